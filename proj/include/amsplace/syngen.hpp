#pragma once

#include <cstdint>

#include "amsplace/model.hpp"

namespace amsplace {

// Parameters for the synthetic instance families used in benchmarks.
struct GenParams {
    int n_rects = 50;
    int n_nets_lo = 25;
    int n_nets_hi = 50;
    int n_blockages = 0;  // 0, 1 or 2
    double multi_variant_fraction = 0.5;
    bool with_symmetry = false;
    bool allow_negative_distances = true;
    std::uint64_t rng_seed = 1;
};

// Deterministic generator: base dims uniform in [2,30], a fraction of rects
// with 2-4 near-area-preserving variants (the rest rotation-only), pairwise
// distances from {-2..6} (or {0..6}), optional blockages restricting ~15% of
// rects each, nets of size 2-6, and optionally 1-2 symmetry groups with at
// least 10 members in total. Output always passes validate_instance.
Instance generate(const GenParams& p);

// k >= 2 disjoint index-shifted copies of `inst`: intra-copy nets, groups and
// proximities are duplicated, cross-copy pairs use the default distance, and
// blockages are dropped. Throws std::invalid_argument for k < 2.
Instance compose_copies(const Instance& inst, int k);

}  // namespace amsplace
