#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "amsplace/evaluator.hpp"
#include "amsplace/model.hpp"

namespace amsplace {

// Gene vector in [0,1]^L with layout [positions | variants | directions]
// (L = 3n) plus an optional trailing priority-modulation gene (L = 3n + 1).
using Chromosome = std::vector<double>;

struct DecodeStats {
    std::uint64_t candidate_evals = 0;   // greedy candidate evaluations
    std::uint64_t slide_calls = 0;
    std::uint64_t obstacle_checks = 0;   // inner-loop obstacle scans
    std::uint64_t points_created = 0;
    std::uint64_t fallback_rounds = 0;
};

// Obstacle for the sliding procedure: a fixed box plus the minimum distance
// the sliding rectangle must keep from it (negative = allowed overlap).
struct SlideObstacle {
    Box box;
    coord_t margin = 0;
};

struct SlideCandidates {
    std::array<IntPoint, 2> pos{};
    int count = 0;  // 0 = no feasible position from this start point
};

// Two-phase axis sliding. Starting from `start` (clamped to the lower
// bounds), the rectangle first slides along the leading axis, then along the
// other one. Both the intermediate and the final position are feasible with
// respect to `obstacles`; they are returned in that order, deduplicated.
SlideCandidates slide(coord_t w, coord_t h, IntPoint start, bool horizontal_first,
                      std::span<const SlideObstacle> obstacles,
                      coord_t min_x = 0, coord_t min_y = 0,
                      DecodeStats* stats = nullptr);

// Multiplies the working position key of every not-yet-placed rectangle that
// shares at least one net with `just_placed` by p_m (once per call, even when
// several nets are shared). Repeated placements compound the factor.
void apply_priority_modulation(std::vector<double>& keys, int just_placed,
                               const Instance& inst, double p_m,
                               const std::vector<std::uint8_t>& placed);

// A symmetry group placed in its own empty canvas, normalized to non-negative
// coordinates. The unit is later inserted into the main placement as one
// rigid rectangle; internal offsets never change afterwards.
struct GroupUnit {
    coord_t w = 0;
    coord_t h = 0;
    std::vector<int> members;            // rect ids: pair members and selfs
    std::vector<IntPoint> offsets;       // bottom-left offsets inside the unit
    std::vector<std::int32_t> variants;  // chosen variant per member
    coord_t axis2_offset = 0;            // doubled axis position, unit-relative
};

// Places symmetry group `g` using the same greedy point heuristic on a
// doubled-coordinate grid: each pair's first member is placed in the
// half-plane right of (above, for horizontal axes) the axis and mirrored
// exactly; self-symmetric members are centred on the axis and slid along it.
// Connectivity is scored over intra-group nets only.
GroupUnit place_symmetry_group(int g, const Chromosome& genes, const Instance& inst,
                               const CostWeights& weights, DecodeStats* stats = nullptr);

// Immutable per-instance decoding tables (item partition, pairwise margins,
// net incidence). Building one is O(n^2 + pins); decode() makes a fresh one,
// the *_with_plan entry points below share it across many decodes.
struct DecodePlan {
    struct Item {
        int group = -1;            // >= 0 for symmetry-group items
        int rect = -1;             // rect id for plain items
        std::vector<int> members;  // covered rect ids
        int key_rect = 0;          // lowest rect id: tie-break + direction gene
    };
    const Instance* inst = nullptr;
    std::vector<Item> items;
    std::vector<int> item_of_rect;
    std::vector<coord_t> margin;           // items x items, max over member pairs
    std::vector<std::uint8_t> blocked;     // items x blockages: must avoid?
    std::vector<std::vector<int>> rect_nets;       // net ids per rect
    std::vector<std::vector<int>> net_neighbors;   // rects sharing a net, per rect

    explicit DecodePlan(const Instance& inst);
    coord_t item_margin(int a, int b) const {
        return margin[static_cast<size_t>(a) * items.size() + b];
    }
};

struct DecodeResult {
    Placement placement;
    CriterionReport report;
};

// Decodes a chromosome into a feasible placement with the greedy constructive
// heuristic. Pure and deterministic; throws std::invalid_argument on a gene
// vector of the wrong length or with genes outside [0,1].
DecodeResult decode(const Chromosome& genes, const Instance& inst,
                    const CostWeights& weights, DecodeStats* stats = nullptr);

DecodeResult decode_with_plan(const Chromosome& genes, const DecodePlan& plan,
                              const CostWeights& weights,
                              DecodeStats* stats = nullptr);

// Variant index selected by a variant gene: floor(gene * m) clamped to m - 1.
inline int variant_from_gene(double gene, int m) {
    int v = static_cast<int>(gene * m);
    return v >= m ? m - 1 : (v < 0 ? 0 : v);
}

inline int chromosome_length(const Instance& inst, bool modulation_gene) {
    return 3 * inst.n() + (modulation_gene ? 1 : 0);
}

}  // namespace amsplace
