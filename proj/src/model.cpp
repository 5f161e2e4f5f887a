#include "amsplace/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "amsplace/detail/format.hpp"

namespace amsplace {

int Instance::group_of(int i) const {
    for (int g = 0; g < static_cast<int>(groups.size()); ++g) {
        for (const auto& [a, b] : groups[g].pairs)
            if (a == i || b == i) return g;
        for (int s : groups[g].selfs)
            if (s == i) return g;
    }
    return -1;
}

namespace {

bool index_ok(const Instance& inst, int i) { return i >= 0 && i < inst.n(); }

}  // namespace

std::vector<std::string> validate_instance(const Instance& inst) {
    std::vector<std::string> out;
    auto bad = [&out](std::string msg) { out.push_back(std::move(msg)); };

    std::unordered_set<std::string> names;
    for (int i = 0; i < inst.n(); ++i) {
        const Rect& r = inst.rects[i];
        if (r.name.empty()) bad(detail::fmt("rect %d: empty name", i));
        if (!names.insert(r.name).second)
            bad(detail::fmt("rect %d: duplicate name '%s'", i, r.name.c_str()));
        if (r.variants.empty()) bad(detail::fmt("rect %d: no variants", i));
        for (size_t v = 0; v < r.variants.size(); ++v)
            if (r.variants[v].w < 1 || r.variants[v].h < 1)
                bad(detail::fmt("rect %d variant %zu: non-positive dimensions", i, v));
    }

    for (const auto& [key, a] : inst.distances.overrides) {
        int i = static_cast<int>(key >> 32);
        int j = static_cast<int>(key & 0xffffffffu);
        (void)a;
        if (i >= j || !index_ok(inst, i) || !index_ok(inst, j))
            bad(detail::fmt("distance override (%d,%d): invalid pair", i, j));
    }

    for (size_t e = 0; e < inst.nets.size(); ++e) {
        const Net& net = inst.nets[e];
        if (net.members.size() < 2)
            bad(detail::fmt("net %zu: fewer than 2 members", e));
        std::set<int> seen;
        for (int m : net.members) {
            if (!index_ok(inst, m))
                bad(detail::fmt("net %zu: member %d out of range", e, m));
            else if (!seen.insert(m).second)
                bad(detail::fmt("net %zu: duplicate member %d", e, m));
        }
        if (net.cost < 0.0) bad(detail::fmt("net %zu: negative cost", e));
        for (const IntPoint& p : net.anchors)
            if (p.x < 0 || p.y < 0)
                bad(detail::fmt("net %zu: anchor with negative coordinates", e));
    }

    std::vector<int> group_hits(inst.rects.size(), 0);
    for (size_t g = 0; g < inst.groups.size(); ++g) {
        const SymmetryGroup& grp = inst.groups[g];
        std::set<int> in_group;
        auto add_member = [&](int m) {
            if (!index_ok(inst, m)) {
                bad(detail::fmt("group %zu: member %d out of range", g, m));
                return;
            }
            if (!in_group.insert(m).second)
                bad(detail::fmt("group %zu: member %d listed twice", g, m));
            if (++group_hits[m] == 2)
                bad(detail::fmt("rect %d: member of more than one symmetry group", m));
        };
        for (const auto& [a, b] : grp.pairs) {
            if (a == b) bad(detail::fmt("group %zu: degenerate pair (%d,%d)", g, a, b));
            add_member(a);
            add_member(b);
            if (index_ok(inst, a) && index_ok(inst, b) &&
                inst.rects[a].variants != inst.rects[b].variants)
                bad(detail::fmt(
                    "group %zu: pair (%d,%d) members have different variant lists", g,
                    a, b));
        }
        for (int s : grp.selfs) add_member(s);
        if (grp.pairs.empty() && grp.selfs.empty())
            bad(detail::fmt("group %zu: empty", g));
    }

    for (size_t b = 0; b < inst.blockages.size(); ++b) {
        const Blockage& bl = inst.blockages[b];
        if (bl.box.w < 1 || bl.box.h < 1)
            bad(detail::fmt("blockage %zu: non-positive dimensions", b));
        if (bl.box.x < 0 || bl.box.y < 0)
            bad(detail::fmt("blockage %zu: negative position", b));
        std::set<int> seen;
        for (int r : bl.restricted) {
            if (!index_ok(inst, r))
                bad(detail::fmt("blockage %zu: restricted rect %d out of range", b, r));
            else if (!seen.insert(r).second)
                bad(detail::fmt("blockage %zu: rect %d restricted twice", b, r));
        }
    }

    for (size_t p = 0; p < inst.proximities.size(); ++p) {
        const ProximityPair& pp = inst.proximities[p];
        if (!index_ok(inst, pp.a) || !index_ok(inst, pp.b) || pp.a == pp.b)
            bad(detail::fmt("proximity %zu: invalid pair (%d,%d)", p, pp.a, pp.b));
        if (pp.cost == 0.0) bad(detail::fmt("proximity %zu: zero cost", p));
    }

    for (size_t e = 0; e < inst.interfaces.size(); ++e) {
        const InterfaceEntry& ie = inst.interfaces[e];
        if (ie.members.empty()) bad(detail::fmt("interface %zu: no members", e));
        for (int m : ie.members)
            if (!index_ok(inst, m))
                bad(detail::fmt("interface %zu: member %d out of range", e, m));
        if (ie.cost <= 0.0) bad(detail::fmt("interface %zu: non-positive cost", e));
    }

    if (!(inst.aspect_lo >= 0.0 && inst.aspect_lo <= inst.aspect_hi &&
          inst.aspect_hi <= 1.0))
        bad("aspect bounds must satisfy 0 <= lo <= hi <= 1");
    if (inst.weights.c_area < 0 || inst.weights.c_conn < 0 ||
        inst.weights.c_prox < 0 || inst.weights.c_inter < 0)
        bad("criterion weights must be non-negative");

    return out;
}

std::vector<Variant> enumerate_variants(coord_t device_w, coord_t device_h,
                                        int count, int max_rows, coord_t pocket) {
    if (device_w < 1 || device_h < 1)
        throw std::invalid_argument("enumerate_variants: non-positive device size");
    if (count < 1) throw std::invalid_argument("enumerate_variants: count < 1");
    if (max_rows < 1) throw std::invalid_argument("enumerate_variants: max_rows < 1");
    if (pocket < 0) throw std::invalid_argument("enumerate_variants: negative pocket");

    std::vector<Variant> vs;
    int rows_cap = std::min(max_rows, count);
    for (int rows = 1; rows <= rows_cap; ++rows) {
        coord_t per_row = (count + rows - 1) / rows;  // ceil(count / rows)
        vs.push_back(Variant{per_row * device_w + 2 * pocket,
                             rows * device_h + 2 * pocket});
    }
    std::sort(vs.begin(), vs.end(), [](const Variant& a, const Variant& b) {
        return a.w != b.w ? a.w < b.w : a.h < b.h;
    });
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

namespace {

// At least one axis separation with margin `a` must hold. Negative margins
// allow bounded overlap (merged pockets).
bool separated(const Box& p, const Box& q, coord_t a) {
    return p.x + p.w + a <= q.x || q.x + q.w + a <= p.x ||
           p.y + p.h + a <= q.y || q.y + q.h + a <= p.y;
}

}  // namespace

FeasibilityResult check_feasible(const Placement& p, const Instance& inst) {
    const size_t n = inst.rects.size();
    if (p.pos.size() != n || p.variant.size() != n ||
        p.axes2.size() != inst.groups.size())
        throw std::invalid_argument("check_feasible: placement shape mismatch");

    for (size_t i = 0; i < n; ++i) {
        if (p.variant[i] < 0 ||
            p.variant[i] >= static_cast<std::int32_t>(inst.rects[i].variants.size()))
            return {false, detail::fmt("rect %zu: variant index out of range", i)};
        if (p.pos[i].x < 0 || p.pos[i].y < 0)
            return {false, detail::fmt("rect %zu: negative coordinates", i)};
    }

    std::vector<Box> boxes(n);
    for (size_t i = 0; i < n; ++i) boxes[i] = p.rect_box(inst, static_cast<int>(i));

    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            coord_t a = inst.distances.at(static_cast<int>(i), static_cast<int>(j));
            if (!separated(boxes[i], boxes[j], a))
                return {false, detail::fmt("rects %zu and %zu violate minimum "
                                           "distance %lld",
                                           i, j, static_cast<long long>(a))};
        }

    for (size_t b = 0; b < inst.blockages.size(); ++b)
        for (int r : inst.blockages[b].restricted)
            if (!separated(boxes[r], inst.blockages[b].box, 0))
                return {false,
                        detail::fmt("rect %d overlaps blockage %zu it is "
                                    "restricted by",
                                    r, b)};

    for (size_t g = 0; g < inst.groups.size(); ++g) {
        const SymmetryGroup& grp = inst.groups[g];
        const coord_t ax2 = p.axes2[g];
        for (const auto& [i, j] : grp.pairs) {
            const Box &bi = boxes[i], &bj = boxes[j];
            if (p.variant[i] != p.variant[j] || bi.w != bj.w || bi.h != bj.h)
                return {false, detail::fmt("pair (%d,%d): variants differ", i, j)};
            if (grp.axis == Axis::Vertical) {
                if (bi.x + bj.x + bi.w != ax2 || bi.y != bj.y)
                    return {false,
                            detail::fmt("pair (%d,%d): vertical symmetry broken", i, j)};
            } else {
                if (bi.y + bj.y + bi.h != ax2 || bi.x != bj.x)
                    return {false, detail::fmt("pair (%d,%d): horizontal symmetry "
                                               "broken",
                                               i, j)};
            }
        }
        for (int s : grp.selfs) {
            const Box& bs = boxes[s];
            if (grp.axis == Axis::Vertical ? (2 * bs.x + bs.w != ax2)
                                           : (2 * bs.y + bs.h != ax2))
                return {false, detail::fmt("rect %d: not centred on its symmetry "
                                           "axis",
                                           s)};
        }
    }

    return {};
}

Box bounding_box(const Placement& p, const Instance& inst,
                 const std::vector<std::uint8_t>* placed_mask) {
    coord_t maxx = 0, maxy = 0;
    bool any = false;
    for (size_t i = 0; i < inst.rects.size(); ++i) {
        if (placed_mask && !(*placed_mask)[i]) continue;
        Box b = p.rect_box(inst, static_cast<int>(i));
        maxx = std::max(maxx, b.right());
        maxy = std::max(maxy, b.top());
        any = true;
    }
    if (!any) return Box{};
    return Box{0, 0, maxx, maxy};
}

}  // namespace amsplace
