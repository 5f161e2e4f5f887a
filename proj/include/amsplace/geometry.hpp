#pragma once

#include <algorithm>
#include <cstdint>

namespace amsplace {

// All lengths are integer scaled units (e.g. nanometres after scaling).
using coord_t = std::int64_t;

struct IntPoint {
    coord_t x = 0;
    coord_t y = 0;

    friend bool operator==(const IntPoint&, const IntPoint&) = default;
};

// Axis-aligned box anchored at its bottom-left corner.
struct Box {
    coord_t x = 0;
    coord_t y = 0;
    coord_t w = 0;
    coord_t h = 0;

    coord_t right() const { return x + w; }
    coord_t top() const { return y + h; }
    // Centroid in doubled coordinates so that half units stay exact.
    coord_t cx2() const { return 2 * x + w; }
    coord_t cy2() const { return 2 * y + h; }

    friend bool operator==(const Box&, const Box&) = default;
};

// True when the two boxes share interior area (touching edges do not count).
inline bool boxes_overlap(const Box& a, const Box& b) {
    return a.x < b.right() && b.x < a.right() && a.y < b.top() && b.y < a.top();
}

}  // namespace amsplace
