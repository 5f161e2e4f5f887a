#include "amsplace/decoder.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "amsplace/detail/format.hpp"

namespace amsplace {

namespace {

constexpr coord_t kInf = std::numeric_limits<coord_t>::max() / 4;

struct PhaseResult {
    coord_t v = 0;
    bool ok = false;
};

// One sliding phase along x at fixed y: the lowest x >= min_x at which the
// rectangle is separated from every obstacle it could collide with given y
// alone. Obstacles are split left/right relative to the start position.
PhaseResult phase_x(coord_t w, coord_t h, coord_t x0, coord_t y,
                    std::span<const SlideObstacle> obs, coord_t min_x,
                    DecodeStats* stats) {
    if (stats) stats->obstacle_checks += obs.size();
    coord_t lo = min_x, hi = kInf;
    for (const SlideObstacle& o : obs) {
        const Box& b = o.box;
        const coord_t a = o.margin;
        if (b.y + b.h + a <= y || y + h + a <= b.y) continue;
        if (2 * b.x + b.w <= 2 * x0 + w)
            lo = std::max(lo, b.x + b.w + a);
        else
            hi = std::min(hi, b.x - w - a);
    }
    return {lo, lo <= hi};
}

PhaseResult phase_y(coord_t w, coord_t h, coord_t x, coord_t y0,
                    std::span<const SlideObstacle> obs, coord_t min_y,
                    DecodeStats* stats) {
    if (stats) stats->obstacle_checks += obs.size();
    coord_t lo = min_y, hi = kInf;
    for (const SlideObstacle& o : obs) {
        const Box& b = o.box;
        const coord_t a = o.margin;
        if (b.x + b.w + a <= x || x + w + a <= b.x) continue;
        if (2 * b.y + b.h <= 2 * y0 + h)
            lo = std::max(lo, b.y + b.h + a);
        else
            hi = std::min(hi, b.y - h - a);
    }
    return {lo, lo <= hi};
}

}  // namespace

SlideCandidates slide(coord_t w, coord_t h, IntPoint start, bool horizontal_first,
                      std::span<const SlideObstacle> obstacles, coord_t min_x,
                      coord_t min_y, DecodeStats* stats) {
    if (stats) ++stats->slide_calls;
    start.x = std::max(start.x, min_x);
    start.y = std::max(start.y, min_y);

    SlideCandidates out;
    IntPoint temp, fin;
    if (horizontal_first) {
        PhaseResult px = phase_x(w, h, start.x, start.y, obstacles, min_x, stats);
        if (!px.ok) return out;
        temp = {px.v, start.y};
        PhaseResult py = phase_y(w, h, temp.x, temp.y, obstacles, min_y, stats);
        if (!py.ok) {
            out.pos[0] = temp;
            out.count = 1;
            return out;
        }
        fin = {temp.x, py.v};
    } else {
        PhaseResult py = phase_y(w, h, start.x, start.y, obstacles, min_y, stats);
        if (!py.ok) return out;
        temp = {start.x, py.v};
        PhaseResult px = phase_x(w, h, temp.x, temp.y, obstacles, min_x, stats);
        if (!px.ok) {
            out.pos[0] = temp;
            out.count = 1;
            return out;
        }
        fin = {px.v, temp.y};
    }
    out.pos[0] = temp;
    out.count = 1;
    if (!(fin == temp)) {
        out.pos[1] = fin;
        out.count = 2;
    }
    return out;
}

void apply_priority_modulation(std::vector<double>& keys, int just_placed,
                               const Instance& inst, double p_m,
                               const std::vector<std::uint8_t>& placed) {
    if (p_m == 1.0) return;
    std::vector<std::uint8_t> hit(keys.size(), 0);
    for (const Net& net : inst.nets) {
        bool touches = false;
        for (int m : net.members) touches |= (m == just_placed);
        if (!touches) continue;
        for (int m : net.members)
            if (m != just_placed && !placed[m]) hit[m] = 1;
    }
    for (size_t i = 0; i < keys.size(); ++i)
        if (hit[i]) keys[i] *= p_m;
}

DecodePlan::DecodePlan(const Instance& instance) : inst(&instance) {
    const int n = instance.n();
    item_of_rect.assign(n, -1);

    for (int g = 0; g < static_cast<int>(instance.groups.size()); ++g) {
        Item it;
        it.group = g;
        for (const auto& [a, b] : instance.groups[g].pairs) {
            it.members.push_back(a);
            it.members.push_back(b);
        }
        for (int s : instance.groups[g].selfs) it.members.push_back(s);
        std::sort(it.members.begin(), it.members.end());
        it.key_rect = it.members.front();
        items.push_back(std::move(it));
    }
    for (int r = 0; r < n; ++r) {
        if (instance.group_of(r) >= 0) continue;
        Item it;
        it.rect = r;
        it.members = {r};
        it.key_rect = r;
        items.push_back(std::move(it));
    }
    for (int it = 0; it < static_cast<int>(items.size()); ++it)
        for (int r : items[it].members) item_of_rect[r] = it;

    const size_t m = items.size();
    margin.assign(m * m, 0);
    for (size_t a = 0; a < m; ++a)
        for (size_t b = a + 1; b < m; ++b) {
            coord_t mx = std::numeric_limits<coord_t>::min();
            for (int ra : items[a].members)
                for (int rb : items[b].members)
                    mx = std::max(mx, instance.distances.at(ra, rb));
            margin[a * m + b] = margin[b * m + a] = mx;
        }

    const size_t nb = instance.blockages.size();
    blocked.assign(m * nb, 0);
    for (size_t b = 0; b < nb; ++b)
        for (int r : instance.blockages[b].restricted)
            blocked[static_cast<size_t>(item_of_rect[r]) * nb + b] = 1;

    rect_nets.assign(n, {});
    for (int e = 0; e < static_cast<int>(instance.nets.size()); ++e)
        for (int r : instance.nets[e].members) rect_nets[r].push_back(e);

    net_neighbors.assign(n, {});
    for (int r = 0; r < n; ++r) {
        std::vector<std::uint8_t> seen(n, 0);
        for (int e : rect_nets[r])
            for (int o : instance.nets[e].members)
                if (o != r && !seen[o]) {
                    seen[o] = 1;
                    net_neighbors[r].push_back(o);
                }
    }
}

namespace {

enum class PointKind : std::uint8_t { Plain, RightEdge, TopEdge, Corner };

struct SeedPoint {
    IntPoint p;
    int gen = -1;  // item (or sub-placement rect) that generated the point
    PointKind kind = PointKind::Plain;
};

class PointSet {
 public:
    bool add(IntPoint p, int gen, PointKind kind, DecodeStats* stats) {
        if (p.x < 0) p.x = 0;
        if (p.y < 0) p.y = 0;
        std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x))
                             << 32) |
                            static_cast<std::uint32_t>(p.y);
        if (!seen_.insert(key).second) return false;
        pts_.push_back({p, gen, kind});
        if (stats) ++stats->points_created;
        return true;
    }
    size_t size() const { return pts_.size(); }
    const SeedPoint& operator[](size_t i) const { return pts_[i]; }

 private:
    std::vector<SeedPoint> pts_;
    std::unordered_set<std::uint64_t> seen_;
};

IntPoint shifted_for_margin(const SeedPoint& sp, coord_t a) {
    IntPoint p = sp.p;
    if (a <= 0) return p;
    switch (sp.kind) {
        case PointKind::RightEdge:
        case PointKind::Corner:
            p.x += a;
            break;
        case PointKind::TopEdge:
            p.y += a;
            break;
        case PointKind::Plain:
            break;
    }
    return p;
}

// Adds the up-to-five points created by placing `box`: the three free corners
// and the projections of the bottom-right / top-left corners onto the nearest
// obstacle below / to the left.
void add_placement_points(PointSet& pts, const Box& box, int gen,
                          std::span<const Box> obstacles, DecodeStats* stats) {
    pts.add({box.right(), box.y}, gen, PointKind::RightEdge, stats);
    pts.add({box.x, box.top()}, gen, PointKind::TopEdge, stats);
    pts.add({box.right(), box.top()}, gen, PointKind::Corner, stats);

    coord_t drop_y = 0;
    coord_t drop_x = 0;
    for (const Box& o : obstacles) {
        if (o.x < box.right() && box.right() < o.right() && o.top() <= box.y)
            drop_y = std::max(drop_y, o.top());
        if (o.y < box.top() && box.top() < o.top() && o.right() <= box.x)
            drop_x = std::max(drop_x, o.right());
    }
    pts.add({box.right(), drop_y}, gen, PointKind::RightEdge, stats);
    pts.add({drop_x, box.top()}, gen, PointKind::TopEdge, stats);
}

// Incremental partial-criterion bookkeeping shared by candidate evaluation
// and committing. Spans of (rect, box) describe the members of one item.
class PartialEval {
 public:
    PartialEval(const Instance& inst, const CostWeights& cw, const DecodePlan& plan)
        : inst_(inst), cw_(cw), plan_(plan) {
        const int n = inst.n();
        cx2_.assign(n, 0);
        cy2_.assign(n, 0);
        placed_.assign(n, 0);
        const size_t ne = inst.nets.size();
        nets_.resize(ne);
        scratch_.resize(ne);
        stamp_.assign(ne, -1);
        for (size_t e = 0; e < ne; ++e) {
            NetB& nb = nets_[e];
            for (const IntPoint& a : inst.nets[e].anchors) {
                nb.extend(2 * a.x, 2 * a.y);
                ++nb.pins;
            }
            s_conn_ += inst.nets[e].cost;
        }
        prox_of_.assign(n, {});
        for (const ProximityPair& pp : inst.proximities) {
            prox_of_[pp.a].push_back({pp.b, pp.cost});
            prox_of_[pp.b].push_back({pp.a, pp.cost});
            s_prox_ += std::abs(pp.cost);
        }
        for (const InterfaceEntry& ie : inst.interfaces) s_inter_ += ie.cost;
    }

    struct Measure {
        coord_t W, H;
        double conn2, prox2, inter2;
        double total;
    };

    // Criterion value of the current partial placement extended by `members`.
    // Matches evaluator::criterion() semantics, including the aspect penalty
    // once the placement becomes complete.
    Measure measure(std::span<const std::pair<int, Box>> members) {
        Measure m;
        m.W = W_;
        m.H = H_;
        for (const auto& [r, b] : members) {
            m.W = std::max(m.W, b.right());
            m.H = std::max(m.H, b.top());
        }

        ++token_;
        touched_.clear();
        for (const auto& [r, b] : members)
            for (int e : plan_.rect_nets[r]) {
                if (stamp_[e] != token_) {
                    stamp_[e] = token_;
                    scratch_[e] = nets_[e];
                    touched_.push_back(e);
                }
                scratch_[e].extend(b.cx2(), b.cy2());
                ++scratch_[e].pins;
            }
        double conn2 = conn2_;
        for (int e : touched_) {
            double c = inst_.nets[e].cost;
            conn2 += c * static_cast<double>(scratch_[e].span2() - nets_[e].span2());
        }
        m.conn2 = conn2;

        double prox2 = prox2_;
        for (size_t k = 0; k < members.size(); ++k) {
            const auto& [r, b] = members[k];
            for (const auto& [o, c] : prox_of_[r]) {
                if (placed_[o]) {
                    prox2 += c * static_cast<double>(std::abs(b.cx2() - cx2_[o]) +
                                                     std::abs(b.cy2() - cy2_[o]));
                } else {
                    // Both endpoints inside this item: count the pair once.
                    for (size_t l = k + 1; l < members.size(); ++l)
                        if (members[l].first == o)
                            prox2 += c * static_cast<double>(
                                             std::abs(b.cx2() - members[l].second.cx2()) +
                                             std::abs(b.cy2() - members[l].second.cy2()));
                }
            }
        }
        m.prox2 = prox2;

        m.inter2 = inst_.interfaces.empty() ? 0.0 : inter2_full(m.W, m.H, members);

        double total = cw_.c_area * static_cast<double>(m.W + m.H);
        if (s_conn_ > 0) total += cw_.c_conn / s_conn_ * m.conn2 / 2.0;
        if (s_prox_ > 0) total += cw_.c_prox / s_prox_ * m.prox2 / 2.0;
        if (s_inter_ > 0) total += cw_.c_inter / s_inter_ * m.inter2 / 2.0;

        if (placed_rects_ + static_cast<int>(members.size()) == inst_.n() &&
            (m.W > 0 || m.H > 0)) {
            double r = static_cast<double>(std::min(m.W, m.H)) /
                       static_cast<double>(std::max(m.W, m.H));
            if (r < inst_.aspect_lo || r > inst_.aspect_hi) total *= kAspectPenaltyFactor;
        }
        m.total = total;
        return m;
    }

    void commit(std::span<const std::pair<int, Box>> members) {
        Measure m = measure(members);
        for (int e : touched_) nets_[e] = scratch_[e];
        for (const auto& [r, b] : members) {
            placed_[r] = 1;
            cx2_[r] = b.cx2();
            cy2_[r] = b.cy2();
        }
        W_ = m.W;
        H_ = m.H;
        conn2_ = m.conn2;
        prox2_ = m.prox2;
        placed_rects_ += static_cast<int>(members.size());
    }

    coord_t W() const { return W_; }
    coord_t H() const { return H_; }

 private:
    struct NetB {
        coord_t minx = kInf, maxx = -kInf, miny = kInf, maxy = -kInf;
        int pins = 0;
        void extend(coord_t x2, coord_t y2) {
            minx = std::min(minx, x2);
            maxx = std::max(maxx, x2);
            miny = std::min(miny, y2);
            maxy = std::max(maxy, y2);
        }
        coord_t span2() const {
            if (pins < 2) return 0;
            return (maxx - minx) + (maxy - miny);
        }
    };

    double inter2_full(coord_t W, coord_t H,
                       std::span<const std::pair<int, Box>> members) const {
        double sum = 0.0;
        std::vector<coord_t> free2;
        for (const InterfaceEntry& ie : inst_.interfaces) {
            bool vertical_side = ie.side == Side::Left || ie.side == Side::Right;
            free2.clear();
            auto centroid = [&](int r, coord_t& x2, coord_t& y2) -> bool {
                if (placed_[r]) {
                    x2 = cx2_[r];
                    y2 = cy2_[r];
                    return true;
                }
                for (const auto& [mr, b] : members)
                    if (mr == r) {
                        x2 = b.cx2();
                        y2 = b.cy2();
                        return true;
                    }
                return false;
            };
            for (int r : ie.members) {
                coord_t x2, y2;
                if (centroid(r, x2, y2)) free2.push_back(vertical_side ? y2 : x2);
            }
            if (free2.empty()) continue;
            std::sort(free2.begin(), free2.end());
            coord_t med2 = free2[(free2.size() - 1) / 2];
            med2 = std::clamp<coord_t>(med2, 0, 2 * (vertical_side ? H : W));
            coord_t fixed2 = 0;
            if (ie.side == Side::Right) fixed2 = 2 * W;
            if (ie.side == Side::Top) fixed2 = 2 * H;
            coord_t dist2 = 0;
            for (int r : ie.members) {
                coord_t x2, y2;
                if (!centroid(r, x2, y2)) continue;
                coord_t ex2 = vertical_side ? fixed2 : med2;
                coord_t ey2 = vertical_side ? med2 : fixed2;
                dist2 += std::abs(ex2 - x2) + std::abs(ey2 - y2);
            }
            sum += ie.cost * static_cast<double>(dist2);
        }
        return sum;
    }

    const Instance& inst_;
    CostWeights cw_;
    const DecodePlan& plan_;
    std::vector<coord_t> cx2_, cy2_;
    std::vector<std::uint8_t> placed_;
    std::vector<NetB> nets_, scratch_;
    std::vector<int> stamp_;
    std::vector<int> touched_;
    int token_ = 0;
    std::vector<std::vector<std::pair<int, double>>> prox_of_;
    coord_t W_ = 0, H_ = 0;
    double conn2_ = 0.0, prox2_ = 0.0;
    double s_conn_ = 0.0, s_prox_ = 0.0, s_inter_ = 0.0;
    int placed_rects_ = 0;
};

// ---------------------------------------------------------------------------
// Symmetry-group sub-placement.
//
// Works on a doubled-coordinate grid so that the axis can sit on half units:
// X = 2x, dims and margins are doubled as well. With self-symmetric members
// present, every X must keep the parity of their widths or no integer
// translation of the finished group exists; `parity` tracks that and the 0
// sentinels are snapped up to it (obstacle-derived bounds keep it for free).
// ---------------------------------------------------------------------------

coord_t snap_up_parity(coord_t v, coord_t parity) {
    return (((v % 2) + 2) % 2) == parity ? v : v + 1;
}

struct SubNet {
    double cost;
    std::vector<int> members;  // rect ids within the group
    coord_t minx = kInf, maxx = -kInf, miny = kInf, maxy = -kInf;
    int pins = 0;
};

GroupUnit place_group_oriented(int g, const Chromosome& genes, const Instance& inst,
                               const CostWeights& weights, bool transposed,
                               DecodeStats* stats) {
    const SymmetryGroup& grp = inst.groups[g];
    const int n = inst.n();
    auto dims = [&](int r, int v) -> std::pair<coord_t, coord_t> {
        const Variant& var = inst.rects[r].variants[v];
        return transposed ? std::pair<coord_t, coord_t>{var.h, var.w}
                          : std::pair<coord_t, coord_t>{var.w, var.h};
    };

    struct Entry {
        bool is_pair;
        int rep, partner;
        double key;
    };
    std::vector<Entry> entries;
    for (const auto& [i, j] : grp.pairs) entries.push_back({true, i, j, genes[i]});
    for (int s : grp.selfs) entries.push_back({false, s, s, genes[s]});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.key != b.key ? a.key < b.key : a.rep < b.rep;
    });

    // Variant choices. Self-symmetric members pin the doubled-axis parity via
    // their width; later selfs must pick a parity-compatible variant.
    coord_t parity = 0;
    bool parity_set = false;
    std::vector<int> chosen(entries.size());
    for (size_t k = 0; k < entries.size(); ++k) {
        const Entry& en = entries[k];
        const int m = static_cast<int>(inst.rects[en.rep].variants.size());
        int v = variant_from_gene(genes[n + en.rep], m);
        if (!en.is_pair) {
            if (!parity_set) {
                parity = dims(en.rep, v).first % 2;
                parity_set = true;
            } else if (dims(en.rep, v).first % 2 != parity) {
                std::vector<int> ok;
                for (int cand = 0; cand < m; ++cand)
                    if (dims(en.rep, cand).first % 2 == parity) ok.push_back(cand);
                if (ok.empty())
                    throw std::runtime_error(detail::fmt(
                        "group %d: self-symmetric rect %d has no variant compatible "
                        "with the axis parity",
                        g, en.rep));
                v = ok[variant_from_gene(genes[n + en.rep], static_cast<int>(ok.size()))];
            }
        }
        chosen[k] = v;
    }

    struct MBox {
        int rect;
        Box box;  // doubled coordinates
    };
    std::vector<MBox> placed;
    PointSet pts;
    pts.add({snap_up_parity(0, parity), 0}, -1, PointKind::Plain, stats);

    // Intra-group nets score the sub-placement's connectivity term.
    std::vector<SubNet> subnets;
    std::vector<std::vector<int>> subnets_of(n);
    {
        std::vector<std::uint8_t> in_group(n, 0);
        for (const Entry& en : entries) {
            in_group[en.rep] = 1;
            in_group[en.partner] = 1;
        }
        for (const Net& net : inst.nets) {
            SubNet sn;
            sn.cost = net.cost;
            for (int r : net.members)
                if (in_group[r]) sn.members.push_back(r);
            if (sn.members.size() < 2) continue;
            for (int r : sn.members) subnets_of[r].push_back(static_cast<int>(subnets.size()));
            subnets.push_back(std::move(sn));
        }
    }
    double s_sub = 0.0;
    for (const SubNet& sn : subnets) s_sub += sn.cost;
    double conn2 = 0.0;
    coord_t minX = kInf, maxX = -kInf, minY = kInf, maxY = -kInf;

    std::vector<SlideObstacle> obstacles;
    std::vector<Box> proj_boxes;
    std::vector<std::pair<int, Box>> cand_members;

    auto sub_total = [&](std::span<const std::pair<int, Box>> members) {
        coord_t mnx = minX, mxx = maxX, mny = minY, mxy = maxY;
        double c2 = conn2;
        // Small groups: recompute touched subnet spans directly.
        for (size_t si = 0; si < subnets.size(); ++si) {
            const SubNet& sn = subnets[si];
            bool touched = false;
            coord_t nminx = sn.minx, nmaxx = sn.maxx, nminy = sn.miny, nmaxy = sn.maxy;
            int pins = sn.pins;
            for (const auto& [r, b] : members)
                for (int mr : sn.members)
                    if (mr == r) {
                        nminx = std::min(nminx, b.cx2());
                        nmaxx = std::max(nmaxx, b.cx2());
                        nminy = std::min(nminy, b.cy2());
                        nmaxy = std::max(nmaxy, b.cy2());
                        ++pins;
                        touched = true;
                    }
            if (!touched) continue;
            coord_t oldspan = sn.pins < 2 ? 0 : (sn.maxx - sn.minx) + (sn.maxy - sn.miny);
            coord_t newspan = pins < 2 ? 0 : (nmaxx - nminx) + (nmaxy - nminy);
            c2 += sn.cost * static_cast<double>(newspan - oldspan);
        }
        for (const auto& [r, b] : members) {
            mnx = std::min(mnx, b.x);
            mxx = std::max(mxx, b.right());
            mny = std::min(mny, b.y);
            mxy = std::max(mxy, b.top());
        }
        double area2 = static_cast<double>((mxx - mnx) + (mxy - mny));
        double total = weights.c_area * area2 / 2.0;
        if (s_sub > 0) total += weights.c_conn / s_sub * c2 / 2.0;
        return total;
    };

    auto commit_members = [&](std::span<const std::pair<int, Box>> members) {
        for (const auto& [r, b] : members) {
            for (int si : subnets_of[r]) {
                SubNet& sn = subnets[si];
                sn.minx = std::min(sn.minx, b.cx2());
                sn.maxx = std::max(sn.maxx, b.cx2());
                sn.miny = std::min(sn.miny, b.cy2());
                sn.maxy = std::max(sn.maxy, b.cy2());
                ++sn.pins;
            }
            minX = std::min(minX, b.x);
            maxX = std::max(maxX, b.right());
            minY = std::min(minY, b.y);
            maxY = std::max(maxY, b.top());
            placed.push_back({r, b});
        }
        conn2 = 0.0;
        for (const SubNet& sn : subnets)
            if (sn.pins >= 2)
                conn2 += sn.cost * static_cast<double>((sn.maxx - sn.minx) +
                                                       (sn.maxy - sn.miny));
    };

    for (size_t k = 0; k < entries.size(); ++k) {
        const Entry& en = entries[k];
        auto [w, h] = dims(en.rep, chosen[k]);
        const coord_t W2 = 2 * w, H2 = 2 * h;
        bool horizontal_first = genes[2 * n + en.rep] <= 0.5;
        if (transposed) horizontal_first = !horizontal_first;

        obstacles.clear();
        for (const MBox& mb : placed) {
            obstacles.push_back(
                {mb.box, 2 * inst.distances.at(en.rep, mb.rect)});
            if (en.is_pair) {
                // The mirrored partner must clear this obstacle as well, which
                // is equivalent to the representative clearing its reflection.
                Box refl{-(mb.box.x + mb.box.w), mb.box.y, mb.box.w, mb.box.h};
                obstacles.push_back({refl, 2 * inst.distances.at(en.partner, mb.rect)});
            }
        }
        coord_t min_x2 = 0;
        if (en.is_pair)
            min_x2 = snap_up_parity(
                std::max<coord_t>(0, inst.distances.at(en.rep, en.partner)), parity);

        struct Best {
            bool found = false;
            double total = 0.0;
            IntPoint at;
        } best;
        std::unordered_set<std::uint64_t> cand_seen;

        for (int round = 0; round < 3 && !best.found; ++round) {
            if (round == 1 && !placed.empty()) {
                pts.add({snap_up_parity(0, parity), maxY}, -1, PointKind::Plain, stats);
                pts.add({snap_up_parity(std::max<coord_t>(maxX, 0), parity), 0}, -1,
                        PointKind::Plain, stats);
            } else if (round == 2) {
                coord_t far = 0, maxA = 0;
                for (const SlideObstacle& o : obstacles) {
                    far = std::max({far, o.box.right(), o.box.top(), -o.box.x});
                    maxA = std::max(maxA, o.margin);
                }
                pts.add({snap_up_parity(far + maxA, parity), 0}, -1, PointKind::Plain,
                        stats);
                pts.add({snap_up_parity(0, parity), far + maxA}, -1, PointKind::Plain,
                        stats);
                if (stats) ++stats->fallback_rounds;
            }

            for (size_t pi = 0; pi < pts.size(); ++pi) {
                IntPoint start = pts[pi].p;
                if (pts[pi].gen >= 0) {
                    coord_t a2 = 2 * inst.distances.at(en.rep, pts[pi].gen);
                    start = shifted_for_margin(pts[pi], a2);
                }
                SlideCandidates sc;
                if (en.is_pair) {
                    sc = slide(W2, H2, start, horizontal_first, obstacles, min_x2, 0,
                               stats);
                } else {
                    // Self-symmetric: x pinned to centre the member on the axis;
                    // the member only slides along it.
                    coord_t xs = -W2 / 2;
                    PhaseResult py =
                        phase_y(W2, H2, xs, std::max<coord_t>(start.y, 0), obstacles,
                                0, stats);
                    if (py.ok) {
                        sc.pos[0] = {xs, py.v};
                        sc.count = 1;
                    }
                }
                for (int ci = 0; ci < sc.count; ++ci) {
                    IntPoint c = sc.pos[ci];
                    std::uint64_t key =
                        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x))
                         << 32) |
                        static_cast<std::uint32_t>(c.y);
                    if (!cand_seen.insert(key).second) continue;
                    cand_members.clear();
                    cand_members.push_back({en.rep, Box{c.x, c.y, W2, H2}});
                    if (en.is_pair)
                        cand_members.push_back(
                            {en.partner, Box{-(c.x + W2), c.y, W2, H2}});
                    double t = sub_total(cand_members);
                    if (stats) ++stats->candidate_evals;
                    bool better = !best.found || t < best.total ||
                                  (t == best.total &&
                                   (c.y < best.at.y ||
                                    (c.y == best.at.y && c.x < best.at.x)));
                    if (better) {
                        best.found = true;
                        best.total = t;
                        best.at = c;
                    }
                }
            }
        }
        if (!best.found)
            throw std::runtime_error(
                detail::fmt("group %d: no feasible sub-placement position", g));

        cand_members.clear();
        cand_members.push_back({en.rep, Box{best.at.x, best.at.y, W2, H2}});
        if (en.is_pair)
            cand_members.push_back({en.partner, Box{-(best.at.x + W2), best.at.y, W2, H2}});
        commit_members(cand_members);

        proj_boxes.clear();
        for (const MBox& mb : placed) proj_boxes.push_back(mb.box);
        for (const auto& [r, b] : cand_members)
            add_placement_points(pts, b, r, proj_boxes, stats);
    }

    // Translate to non-negative coordinates and halve back to real units.
    const coord_t T = -minX;   // keeps the doubled-grid parity by construction
    const coord_t Ty = -minY;  // all Y are even

    GroupUnit unit;
    unit.w = (maxX - minX) / 2;
    unit.h = (maxY - minY) / 2;
    unit.axis2_offset = T;
    std::vector<std::int32_t> variant_of(n, 0);
    for (size_t k = 0; k < entries.size(); ++k) {
        variant_of[entries[k].rep] = chosen[k];
        variant_of[entries[k].partner] = chosen[k];
    }
    for (const MBox& mb : placed) {
        unit.members.push_back(mb.rect);
        IntPoint off{(mb.box.x + T) / 2, (mb.box.y + Ty) / 2};
        if (transposed) std::swap(off.x, off.y);
        unit.offsets.push_back(off);
        unit.variants.push_back(variant_of[mb.rect]);
    }
    if (transposed) std::swap(unit.w, unit.h);
    return unit;
}

}  // namespace

GroupUnit place_symmetry_group(int g, const Chromosome& genes, const Instance& inst,
                               const CostWeights& weights, DecodeStats* stats) {
    return place_group_oriented(g, genes, inst, weights,
                                inst.groups[g].axis == Axis::Horizontal, stats);
}

namespace {

void validate_genes(const Chromosome& genes, const Instance& inst) {
    const size_t n = inst.rects.size();
    if (genes.size() != 3 * n && genes.size() != 3 * n + 1)
        throw std::invalid_argument(detail::fmt(
            "decode: expected %zu or %zu genes, got %zu", 3 * n, 3 * n + 1,
            genes.size()));
    for (double gv : genes)
        if (!(gv >= 0.0 && gv <= 1.0))
            throw std::invalid_argument("decode: gene outside [0,1]");
}

}  // namespace

DecodeResult decode_with_plan(const Chromosome& genes, const DecodePlan& plan,
                              const CostWeights& weights, DecodeStats* stats) {
    const Instance& inst = *plan.inst;
    const int n = inst.n();
    validate_genes(genes, inst);
    const double p_m = genes.size() == static_cast<size_t>(3 * n + 1) ? genes[3 * n] : 1.0;

    std::vector<GroupUnit> units(inst.groups.size());
    for (size_t g = 0; g < units.size(); ++g)
        units[g] = place_symmetry_group(static_cast<int>(g), genes, inst, weights, stats);

    const int m = static_cast<int>(plan.items.size());
    std::vector<double> keys(genes.begin(), genes.begin() + n);
    std::vector<std::uint8_t> rect_placed(n, 0);
    std::vector<std::uint8_t> item_placed(m, 0);
    std::vector<Box> item_box(m);
    std::vector<int> placed_items_order;
    placed_items_order.reserve(m);

    PartialEval eval(inst, weights, plan);
    PointSet pts;
    pts.add({0, 0}, -1, PointKind::Plain, stats);
    for (const Blockage& bl : inst.blockages) {
        pts.add({bl.box.x, bl.box.y}, -1, PointKind::Plain, stats);
        pts.add({bl.box.right(), bl.box.y}, -1, PointKind::Plain, stats);
        pts.add({bl.box.x, bl.box.top()}, -1, PointKind::Plain, stats);
        pts.add({bl.box.right(), bl.box.top()}, -1, PointKind::Plain, stats);
    }

    Placement out;
    out.pos.assign(n, {});
    out.variant.assign(n, 0);
    out.axes2.assign(inst.groups.size(), 0);

    std::vector<SlideObstacle> obstacles;
    std::vector<Box> proj_boxes;
    std::vector<std::pair<int, Box>> members_rel;  // offsets within the item
    std::vector<std::pair<int, Box>> cand_members;

    const size_t nb = inst.blockages.size();
    for (int step = 0; step < m; ++step) {
        // Next item: lowest effective position key, ties by lowest rect id.
        int it = -1;
        double it_key = 0.0;
        for (int cand = 0; cand < m; ++cand) {
            if (item_placed[cand]) continue;
            double k = keys[plan.items[cand].members.front()];
            for (int r : plan.items[cand].members) k = std::min(k, keys[r]);
            if (it < 0 || k < it_key ||
                (k == it_key && plan.items[cand].key_rect < plan.items[it].key_rect)) {
                it = cand;
                it_key = k;
            }
        }

        const DecodePlan::Item& item = plan.items[it];
        coord_t w, h;
        members_rel.clear();
        if (item.group >= 0) {
            const GroupUnit& u = units[item.group];
            w = u.w;
            h = u.h;
            for (size_t k = 0; k < u.members.size(); ++k) {
                const Variant& var =
                    inst.rects[u.members[k]].variants[u.variants[k]];
                members_rel.push_back(
                    {u.members[k],
                     Box{u.offsets[k].x, u.offsets[k].y, var.w, var.h}});
            }
        } else {
            const Rect& r = inst.rects[item.rect];
            int v = variant_from_gene(genes[n + item.rect],
                                      static_cast<int>(r.variants.size()));
            w = r.variants[v].w;
            h = r.variants[v].h;
            members_rel.push_back({item.rect, Box{0, 0, w, h}});
            out.variant[item.rect] = v;
        }
        const bool horizontal_first = genes[2 * n + item.key_rect] <= 0.5;

        obstacles.clear();
        for (int jt : placed_items_order)
            obstacles.push_back({item_box[jt], plan.item_margin(it, jt)});
        for (size_t b = 0; b < nb; ++b)
            if (plan.blocked[static_cast<size_t>(it) * nb + b])
                obstacles.push_back({inst.blockages[b].box, 0});

        struct Best {
            bool found = false;
            double total = 0.0;
            IntPoint at;
        } best;
        std::unordered_set<std::uint64_t> cand_seen;

        for (int round = 0; round < 3 && !best.found; ++round) {
            if (round == 1) {
                pts.add({0, eval.H()}, -1, PointKind::Plain, stats);
                pts.add({eval.W(), 0}, -1, PointKind::Plain, stats);
                if (stats) ++stats->fallback_rounds;
            } else if (round == 2) {
                coord_t far = 0, maxA = 0;
                for (const SlideObstacle& o : obstacles) {
                    far = std::max({far, o.box.right(), o.box.top()});
                    maxA = std::max(maxA, o.margin);
                }
                pts.add({far + maxA, 0}, -1, PointKind::Plain, stats);
                pts.add({0, far + maxA}, -1, PointKind::Plain, stats);
                if (stats) ++stats->fallback_rounds;
            }

            for (size_t pi = 0; pi < pts.size(); ++pi) {
                IntPoint start = pts[pi].p;
                if (pts[pi].gen >= 0) {
                    coord_t a = plan.item_margin(it, pts[pi].gen);
                    start = shifted_for_margin(pts[pi], a);
                }
                SlideCandidates sc =
                    slide(w, h, start, horizontal_first, obstacles, 0, 0, stats);
                for (int ci = 0; ci < sc.count; ++ci) {
                    IntPoint c = sc.pos[ci];
                    std::uint64_t key =
                        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x))
                         << 32) |
                        static_cast<std::uint32_t>(c.y);
                    if (!cand_seen.insert(key).second) continue;
                    cand_members.clear();
                    for (const auto& [r, b] : members_rel)
                        cand_members.push_back({r, Box{b.x + c.x, b.y + c.y, b.w, b.h}});
                    double t = eval.measure(cand_members).total;
                    if (stats) ++stats->candidate_evals;
                    bool better = !best.found || t < best.total ||
                                  (t == best.total &&
                                   (c.y < best.at.y ||
                                    (c.y == best.at.y && c.x < best.at.x)));
                    if (better) {
                        best.found = true;
                        best.total = t;
                        best.at = c;
                    }
                }
            }
        }
        if (!best.found)
            throw std::runtime_error("decode: no feasible position found");

        item_box[it] = Box{best.at.x, best.at.y, w, h};
        item_placed[it] = 1;
        cand_members.clear();
        for (const auto& [r, b] : members_rel)
            cand_members.push_back({r, Box{b.x + best.at.x, b.y + best.at.y, b.w, b.h}});
        eval.commit(cand_members);
        for (size_t k = 0; k < cand_members.size(); ++k) {
            const auto& [r, b] = cand_members[k];
            out.pos[r] = {b.x, b.y};
            rect_placed[r] = 1;
        }
        if (item.group >= 0) {
            const GroupUnit& u = units[item.group];
            for (size_t k = 0; k < u.members.size(); ++k)
                out.variant[u.members[k]] = u.variants[k];
            out.axes2[item.group] =
                inst.groups[item.group].axis == Axis::Vertical
                    ? 2 * best.at.x + u.axis2_offset
                    : 2 * best.at.y + u.axis2_offset;
        }
        placed_items_order.push_back(it);

        proj_boxes.clear();
        for (int jt : placed_items_order) proj_boxes.push_back(item_box[jt]);
        for (const Blockage& bl : inst.blockages) proj_boxes.push_back(bl.box);
        add_placement_points(pts, item_box[it], it, proj_boxes, stats);

        if (p_m != 1.0) {
            for (const auto& [r, b] : cand_members)
                for (int o : plan.net_neighbors[r])
                    if (!rect_placed[o]) keys[o] *= p_m;
        }
    }

    DecodeResult res;
    res.placement = std::move(out);
    res.report = criterion(res.placement, inst, weights);
    return res;
}

DecodeResult decode(const Chromosome& genes, const Instance& inst,
                    const CostWeights& weights, DecodeStats* stats) {
    DecodePlan plan(inst);
    return decode_with_plan(genes, plan, weights, stats);
}

}  // namespace amsplace
