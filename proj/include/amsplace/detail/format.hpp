#pragma once

#include <cstdarg>
#include <cstdio>
#include <string>

namespace amsplace::detail {

// printf-style formatting into std::string; diagnostics only.
inline std::string fmt(const char* format, ...) {
    va_list args;
    va_start(args, format);
    va_list copy;
    va_copy(copy, args);
    int len = std::vsnprintf(nullptr, 0, format, copy);
    va_end(copy);
    std::string s(len > 0 ? len : 0, '\0');
    std::vsnprintf(s.data(), s.size() + 1, format, args);
    va_end(args);
    return s;
}

}  // namespace amsplace::detail
