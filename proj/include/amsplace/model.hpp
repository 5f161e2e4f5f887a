#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "amsplace/geometry.hpp"

namespace amsplace {

// One realizable shape of a device/module. Multi-variant rectangles model
// layout alternatives of the same circuit element (row folding, rotation...).
struct Variant {
    coord_t w = 0;
    coord_t h = 0;

    friend bool operator==(const Variant&, const Variant&) = default;
};

struct Rect {
    std::string name;
    std::vector<Variant> variants;  // non-empty, positive dims

    friend bool operator==(const Rect&, const Rect&) = default;
};

// Pairwise minimum-distance specification. A negative distance permits the
// two rectangles to overlap by up to |a| along the separating direction,
// which models merged wells/pockets.
struct DistanceSpec {
    coord_t default_distance = 0;
    // Keyed by unordered pair (lo << 32 | hi); values replace the default.
    std::unordered_map<std::uint64_t, coord_t> overrides;

    static std::uint64_t key(int i, int j) {
        if (i > j) std::swap(i, j);
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
               static_cast<std::uint32_t>(j);
    }
    coord_t at(int i, int j) const {
        auto it = overrides.find(key(i, j));
        return it == overrides.end() ? default_distance : it->second;
    }
    void set(int i, int j, coord_t a) { overrides[key(i, j)] = a; }

    friend bool operator==(const DistanceSpec&, const DistanceSpec&) = default;
};

struct Net {
    std::vector<int> members;       // rectangle indices, size >= 2
    double cost = 1.0;              // >= 0; zero-cost nets are ignored
    std::vector<IntPoint> anchors;  // optional fixed pins (e.g. pad positions)

    friend bool operator==(const Net&, const Net&) = default;
};

enum class Axis : std::uint8_t { Vertical, Horizontal };

// A symmetry group shares one axis. Pairs mirror each other across it,
// self-symmetric members are centred on it.
struct SymmetryGroup {
    Axis axis = Axis::Vertical;
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> selfs;

    friend bool operator==(const SymmetryGroup&, const SymmetryGroup&) = default;
};

// Fixed keep-out region. Only the listed rectangles have to avoid it.
struct Blockage {
    Box box;
    std::vector<int> restricted;

    friend bool operator==(const Blockage&, const Blockage&) = default;
};

// Optional objective: keep (or push apart, for negative cost) two centroids.
struct ProximityPair {
    int a = 0;
    int b = 0;
    double cost = 0.0;  // non-zero; negative rewards distance

    friend bool operator==(const ProximityPair&, const ProximityPair&) = default;
};

enum class Side : std::uint8_t { Left, Right, Bottom, Top };

// Optional objective: connection to the layout boundary. The entry point
// lives on the given side; its free coordinate is chosen optimally.
struct InterfaceEntry {
    Side side = Side::Left;
    std::vector<int> members;
    double cost = 1.0;  // > 0

    friend bool operator==(const InterfaceEntry&, const InterfaceEntry&) = default;
};

struct CostWeights {
    double c_area = 1.0;
    double c_conn = 0.0;
    double c_prox = 0.0;
    double c_inter = 0.0;

    friend bool operator==(const CostWeights&, const CostWeights&) = default;
};

struct Instance {
    std::vector<Rect> rects;
    DistanceSpec distances;
    std::vector<Net> nets;
    std::vector<SymmetryGroup> groups;
    std::vector<Blockage> blockages;
    std::vector<ProximityPair> proximities;
    std::vector<InterfaceEntry> interfaces;
    double aspect_lo = 0.0;  // bounds on min(W,H)/max(W,H), within [0,1]
    double aspect_hi = 1.0;
    CostWeights weights;

    int n() const { return static_cast<int>(rects.size()); }
    // Index of the group containing rect i, or -1. O(groups) scan.
    int group_of(int i) const;

    friend bool operator==(const Instance&, const Instance&) = default;
};

// A complete placement: one position and one variant choice per rectangle,
// plus one axis position per symmetry group. Axis positions are stored
// doubled (2 * axis) so that half-unit axes stay integral.
struct Placement {
    std::vector<IntPoint> pos;
    std::vector<std::int32_t> variant;
    std::vector<coord_t> axes2;

    Box rect_box(const Instance& inst, int i) const {
        const Variant& v = inst.rects[i].variants[variant[i]];
        return Box{pos[i].x, pos[i].y, v.w, v.h};
    }
    friend bool operator==(const Placement&, const Placement&) = default;
};

struct FeasibilityResult {
    bool ok = true;
    std::string detail;  // empty when ok; first violation otherwise
    explicit operator bool() const { return ok; }
};

// Structural validation of an instance. Returns one message per violation;
// an empty vector means the instance is well-formed.
std::vector<std::string> validate_instance(const Instance& inst);

// Enumerates row-folded variants of `count` identical devices of size
// device_w x device_h, for row counts 1..min(max_rows, count). A row uses
// ceil(count / rows) devices; a surrounding pocket pads both dimensions by
// 2 * pocket. Duplicates are removed and the result is sorted by width
// (then height). Throws std::invalid_argument on non-positive dimensions,
// counts, or a negative pocket.
std::vector<Variant> enumerate_variants(coord_t device_w, coord_t device_h,
                                        int count, int max_rows,
                                        coord_t pocket = 0);

// Checks every pairwise separation (with pocket-merging semantics), blockage
// avoidance for restricted rectangles, exact symmetry-group equations, and
// non-negative coordinates. Throws std::invalid_argument if the placement
// shape does not match the instance.
FeasibilityResult check_feasible(const Placement& p, const Instance& inst);

// Bounding box of the placed rectangles (blockages excluded). The optional
// mask restricts the box to a subset; rectangles with mask[i] == 0 are
// skipped. An empty selection yields a zero box at the origin.
Box bounding_box(const Placement& p, const Instance& inst,
                 const std::vector<std::uint8_t>* placed_mask = nullptr);

}  // namespace amsplace
