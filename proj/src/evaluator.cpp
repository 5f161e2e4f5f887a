#include "amsplace/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amsplace {

namespace {

inline bool placed(const std::vector<std::uint8_t>* mask, int i) {
    return !mask || (*mask)[i];
}

// Net span in doubled coordinates (exact integers; centroids are halves).
coord_t net_span2(const Net& net, const Placement& p, const Instance& inst,
                  const std::vector<std::uint8_t>* mask) {
    coord_t minx = std::numeric_limits<coord_t>::max(), maxx = std::numeric_limits<coord_t>::min();
    coord_t miny = minx, maxy = maxx;
    int pins = 0;
    auto add = [&](coord_t x2, coord_t y2) {
        minx = std::min(minx, x2);
        maxx = std::max(maxx, x2);
        miny = std::min(miny, y2);
        maxy = std::max(maxy, y2);
        ++pins;
    };
    for (int m : net.members)
        if (placed(mask, m)) {
            Box b = p.rect_box(inst, m);
            add(b.cx2(), b.cy2());
        }
    for (const IntPoint& a : net.anchors) add(2 * a.x, 2 * a.y);
    if (pins < 2) return 0;
    return (maxx - minx) + (maxy - miny);
}

}  // namespace

double hpwl(const Placement& p, const Instance& inst,
            const std::vector<std::uint8_t>* placed_mask) {
    double sum = 0.0;
    for (const Net& net : inst.nets)
        sum += net.cost * static_cast<double>(net_span2(net, p, inst, placed_mask));
    return sum / 2.0;
}

CriterionReport criterion(const Placement& p, const Instance& inst,
                          const CostWeights& weights,
                          const std::vector<std::uint8_t>* placed_mask) {
    CriterionReport rep;
    for (const Net& net : inst.nets) rep.s_conn += net.cost;
    for (const ProximityPair& pp : inst.proximities) rep.s_prox += std::abs(pp.cost);
    for (const InterfaceEntry& ie : inst.interfaces) rep.s_inter += ie.cost;

    Box bb = bounding_box(p, inst, placed_mask);
    rep.area_term = static_cast<double>(bb.w + bb.h);

    rep.conn_raw = hpwl(p, inst, placed_mask);

    for (const ProximityPair& pp : inst.proximities) {
        if (!placed(placed_mask, pp.a) || !placed(placed_mask, pp.b)) continue;
        Box a = p.rect_box(inst, pp.a), b = p.rect_box(inst, pp.b);
        coord_t d2 = std::abs(a.cx2() - b.cx2()) + std::abs(a.cy2() - b.cy2());
        rep.prox_raw += pp.cost * static_cast<double>(d2) / 2.0;
    }

    for (const InterfaceEntry& ie : inst.interfaces) {
        // Entry point: fixed coordinate on the chosen side, free coordinate at
        // the (lower) median of the connected placed centroids, clamped to the
        // side extent. The median minimizes the Manhattan distance sum.
        std::vector<coord_t> free2;
        free2.reserve(ie.members.size());
        bool vertical_side = ie.side == Side::Left || ie.side == Side::Right;
        for (int m : ie.members) {
            if (!placed(placed_mask, m)) continue;
            Box b = p.rect_box(inst, m);
            free2.push_back(vertical_side ? b.cy2() : b.cx2());
        }
        if (free2.empty()) continue;
        std::sort(free2.begin(), free2.end());
        coord_t med2 = free2[(free2.size() - 1) / 2];
        coord_t extent2 = 2 * (vertical_side ? bb.h : bb.w);
        med2 = std::clamp<coord_t>(med2, 0, extent2);
        coord_t fixed2 = 0;
        if (ie.side == Side::Right) fixed2 = 2 * bb.w;
        if (ie.side == Side::Top) fixed2 = 2 * bb.h;
        coord_t dist2 = 0;
        for (int m : ie.members) {
            if (!placed(placed_mask, m)) continue;
            Box b = p.rect_box(inst, m);
            coord_t ex2 = vertical_side ? fixed2 : med2;
            coord_t ey2 = vertical_side ? med2 : fixed2;
            dist2 += std::abs(ex2 - b.cx2()) + std::abs(ey2 - b.cy2());
        }
        rep.inter_raw += ie.cost * static_cast<double>(dist2) / 2.0;
    }

    rep.total = weights.c_area * rep.area_term;
    if (rep.s_conn > 0.0) rep.total += weights.c_conn / rep.s_conn * rep.conn_raw;
    if (rep.s_prox > 0.0) rep.total += weights.c_prox / rep.s_prox * rep.prox_raw;
    if (rep.s_inter > 0.0) rep.total += weights.c_inter / rep.s_inter * rep.inter_raw;

    bool complete = true;
    if (placed_mask)
        for (std::uint8_t f : *placed_mask) complete &= (f != 0);
    if (complete && (bb.w > 0 || bb.h > 0)) {
        double r = static_cast<double>(std::min(bb.w, bb.h)) /
                   static_cast<double>(std::max(bb.w, bb.h));
        if (r < inst.aspect_lo || r > inst.aspect_hi) {
            rep.total *= kAspectPenaltyFactor;
            rep.penalty_applied = true;
        }
    }
    return rep;
}

}  // namespace amsplace
