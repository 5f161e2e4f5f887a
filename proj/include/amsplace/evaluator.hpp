#pragma once

#include <cstdint>
#include <vector>

#include "amsplace/model.hpp"

namespace amsplace {

// Aspect-ratio violations multiply the final criterion by this factor.
inline constexpr double kAspectPenaltyFactor = 2.5;

struct CriterionReport {
    double area_term = 0.0;  // W + H of the placed bounding box
    double conn_raw = 0.0;   // sum of cost-weighted net half-perimeters
    double prox_raw = 0.0;   // cost-weighted Manhattan centroid distances
    double inter_raw = 0.0;  // cost-weighted boundary-connection lengths
    double s_conn = 0.0;     // normalizers (instance constants)
    double s_prox = 0.0;
    double s_inter = 0.0;
    bool penalty_applied = false;
    double total = 0.0;

    friend bool operator==(const CriterionReport&, const CriterionReport&) = default;
};

// Cost-weighted half-perimeter wirelength over rectangle centroids (plus any
// fixed net anchors). Nets with fewer than two placed pins contribute 0.
// `placed_mask` selects the placed subset; null means everything is placed.
double hpwl(const Placement& p, const Instance& inst,
            const std::vector<std::uint8_t>* placed_mask = nullptr);

// Full placement criterion:
//   total = c_area * (W + H) + c_conn/S_conn * conn + c_prox/S_prox * prox
//         + c_inter/S_inter * inter
// where each normalizer S is the sum of the absolute term costs; a term with
// zero normalizer contributes nothing. The aspect-ratio penalty (x2.5) only
// applies to complete placements; partial placements are never penalized.
CriterionReport criterion(const Placement& p, const Instance& inst,
                          const CostWeights& weights,
                          const std::vector<std::uint8_t>* placed_mask = nullptr);

}  // namespace amsplace
