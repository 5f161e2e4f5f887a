#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "amsplace/evaluator.hpp"
#include "amsplace/model.hpp"

namespace amsplace {

// Raised for malformed documents: bad JSON, schema violations, dangling
// references. The message carries field/line context.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- instance documents -------------------------------------------------
//
// {"format": "amsplace-instance", "version": 1,
//  "rects": [{"name": "r0", "variants": [[w,h], ...]}, ...],
//  "distances": {"default": 0, "overrides": [[i,j,a], ...]},
//  "nets": [{"members": [..], "cost": 1.0, "anchors": [[x,y], ...]}, ...],
//  "groups": [{"axis": "v"|"h", "pairs": [[i,j], ...], "selfs": [..]}, ...],
//  "blockages": [{"x":..,"y":..,"w":..,"h":..,"restricted":[..]}, ...],
//  "proximities": [{"a":..,"b":..,"cost":..}, ...],
//  "interfaces": [{"side":"left|right|bottom|top","members":[..],"cost":..}],
//  "aspect": [lo, hi],
//  "weights": {"c_area":..,"c_conn":..,"c_prox":..,"c_inter":..}}
//
// Empty optional sections (groups, blockages, proximities, interfaces, and
// per-net anchors) are omitted on write and default to empty on parse.
// write_instance output is deterministic; parse(write(inst)) == inst.

std::string write_instance(const Instance& inst);
Instance parse_instance(const std::string& text);

// ---- placement documents ------------------------------------------------
//
// {"format": "amsplace-placement", "version": 1,
//  "rects": [{"name": "r0", "x":.., "y":.., "variant":..}, ...],
//  "axes2": [..],
//  "report": {"area_term":.., "conn_raw":.., "prox_raw":.., "inter_raw":..,
//             "s_conn":.., "s_prox":.., "s_inter":..,
//             "penalty_applied":.., "total":..},
//  "meta": {"algorithm":"..", "seed":.., "wall_time_s":..}}   (optional)
//
// Rectangles are matched back to the instance by name, so documents survive
// reordering. "meta" describes the producing run and is ignored on parse.

struct SolveMeta {
    std::string algorithm;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
};

std::string write_placement(const Placement& p, const Instance& inst,
                            const CriterionReport& report,
                            const SolveMeta* meta = nullptr);
Placement parse_placement(const std::string& text, const Instance& inst);

// ---- GSRC benchmarks ------------------------------------------------------
//
// Parses the GSRC hard-block format: .blocks lines of the form
//   <name> hardrectilinear 4 (x,y) (x,y) (x,y) (x,y)
//   <name> terminal
// and .nets documents of "NetDegree : k" headers followed by k pin lines.
// Each 4-corner block becomes one rect with rotation variants; blocks whose
// corners do not form an axis-aligned box are rejected. Nets keep their cost
// at 1 and survive only with at least two distinct block members. Terminals
// are excluded by default; with include_terminals they enter the surviving
// nets as fixed anchors, which requires their coordinates from a .pl text.
Instance parse_gsrc(const std::string& blocks_text, const std::string& nets_text,
                    const std::string& pl_text = "",
                    bool include_terminals = false);

// ---- rendering ------------------------------------------------------------
//
// Deterministic SVG: one labelled rectangle per device, hatched blockages,
// dashed centroid-bounding-box contour per net with >= 2 members, and the
// symmetry axis of each group. Byte-identical output for identical inputs.
std::string render_svg(const Placement& p, const Instance& inst);

// ---- file helpers ----------------------------------------------------------

std::string read_file(const std::string& path);               // throws on failure
void write_file(const std::string& path, const std::string& text);

}  // namespace amsplace
