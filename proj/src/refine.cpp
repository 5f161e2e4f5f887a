#include "amsplace/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "amsplace/detail/lp.hpp"

namespace amsplace {

namespace {

Box outline_of(const Placement& p, const Instance& inst, const std::vector<int>& members) {
    coord_t mnx = std::numeric_limits<coord_t>::max(), mny = mnx;
    coord_t mxx = std::numeric_limits<coord_t>::min(), mxy = mxx;
    for (int r : members) {
        Box b = p.rect_box(inst, r);
        mnx = std::min(mnx, b.x);
        mny = std::min(mny, b.y);
        mxx = std::max(mxx, b.right());
        mxy = std::max(mxy, b.top());
    }
    return {mnx, mny, mxx - mnx, mxy - mny};
}

}  // namespace

RelationAssignment extract_relations(const Placement& p, const Instance& inst) {
    const int n = inst.n();
    RelationAssignment ra;
    ra.n = n;
    const size_t pairs = static_cast<size_t>(n) * (n - 1) / 2;
    ra.rel.resize(pairs);
    ra.margin.resize(pairs);
    for (int i = 0; i < n; ++i) {
        Box bi = p.rect_box(inst, i);
        for (int j = i + 1; j < n; ++j) {
            Box bj = p.rect_box(inst, j);
            const coord_t a = inst.distances.at(i, j);
            const coord_t slack[4] = {
                bj.x - (bi.x + bi.w + a),   // LeftOf
                bj.y - (bi.y + bi.h + a),   // Below
                bi.x - (bj.x + bj.w + a),   // RightOf
                bi.y - (bj.y + bj.h + a)};  // Above
            int best = 0;
            for (int k = 1; k < 4; ++k)
                if (slack[k] > slack[best]) best = k;
            const size_t idx = RelationAssignment::pair_index(i, j, n);
            ra.rel[idx] = static_cast<Relation>(best);
            ra.margin[idx] = a;
        }
    }
    return ra;
}

Chromosome ls_variants(const Chromosome& best, const Instance& inst,
                       const CostWeights& cw, std::uint64_t budget,
                       std::uint64_t* evals_out) {
    if (evals_out) *evals_out = 0;
    if (budget == 0) return best;
    const int n = inst.n();
    const DecodePlan plan(inst);
    Chromosome cur = best;
    std::uint64_t evals = 1;
    double cur_total = decode_with_plan(cur, plan, cw).report.total;

    bool improved = true;
    while (improved && evals < budget) {
        improved = false;
        for (int i = 0; i < n && evals < budget; ++i) {
            const int m = static_cast<int>(inst.rects[i].variants.size());
            if (m <= 1) continue;
            int cur_v = variant_from_gene(cur[n + i], m);
            for (int v = 0; v < m && evals < budget; ++v) {
                if (v == cur_v) continue;
                Chromosome trial = cur;
                trial[n + i] = (v + 0.5) / m;
                ++evals;
                double t = decode_with_plan(trial, plan, cw).report.total;
                if (t < cur_total) {
                    cur = std::move(trial);
                    cur_total = t;
                    cur_v = v;
                    improved = true;
                }
            }
        }
    }
    if (evals_out) *evals_out = evals;
    return cur;
}

Chromosome ls_positions(const Chromosome& best, const Instance& inst,
                        const CostWeights& cw, std::uint64_t budget, int max_n,
                        std::uint64_t* evals_out) {
    if (evals_out) *evals_out = 0;
    const int n = inst.n();
    if (budget == 0 || n > max_n) return best;
    const DecodePlan plan(inst);
    Chromosome cur = best;
    std::uint64_t evals = 1;
    double cur_total = decode_with_plan(cur, plan, cw).report.total;

    bool improved = true;
    while (improved && evals < budget) {
        improved = false;
        for (int i = 0; i < n && evals < budget; ++i) {
            for (int j = i + 1; j < n && evals < budget; ++j) {
                Chromosome trial = cur;
                std::swap(trial[i], trial[j]);
                ++evals;
                double t = decode_with_plan(trial, plan, cw).report.total;
                if (t < cur_total) {
                    cur = std::move(trial);
                    cur_total = t;
                    improved = true;
                }
            }
        }
    }
    if (evals_out) *evals_out = evals;
    return cur;
}

Placement ls_layout(const Placement& p, const Instance& inst, const CostWeights& cw,
                    std::uint64_t budget, std::uint64_t* evals_out) {
    if (evals_out) *evals_out = 0;
    if (budget == 0) return p;
    const DecodePlan plan(inst);
    const int m = static_cast<int>(plan.items.size());
    const size_t nb = inst.blockages.size();

    Placement cur = p;
    std::uint64_t evals = 1;
    double cur_total = criterion(cur, inst, cw).total;

    std::vector<SlideObstacle> obstacles;
    std::vector<IntPoint> pts;
    std::set<std::pair<coord_t, coord_t>> pts_seen;

    bool improved = true;
    while (improved && evals < budget) {
        improved = false;
        for (int it = 0; it < m && evals < budget; ++it) {
            const DecodePlan::Item& item = plan.items[it];
            const Box self = outline_of(cur, inst, item.members);

            obstacles.clear();
            pts.clear();
            pts_seen.clear();
            auto add_pt = [&](coord_t x, coord_t y) {
                if (x < 0 || y < 0) return;
                if (pts_seen.insert({x, y}).second) pts.push_back({x, y});
            };
            add_pt(0, 0);
            for (int jt = 0; jt < m; ++jt) {
                if (jt == it) continue;
                Box b = outline_of(cur, inst, plan.items[jt].members);
                obstacles.push_back({b, plan.item_margin(it, jt)});
                add_pt(b.x, b.y);
                add_pt(b.right(), b.y);
                add_pt(b.x, b.top());
                add_pt(b.right(), b.top());
            }
            for (size_t b = 0; b < nb; ++b) {
                const Box& bb = inst.blockages[b].box;
                if (plan.blocked[static_cast<size_t>(it) * nb + b])
                    obstacles.push_back({bb, 0});
                add_pt(bb.x, bb.y);
                add_pt(bb.right(), bb.y);
                add_pt(bb.x, bb.top());
                add_pt(bb.right(), bb.top());
            }

            // Candidate variants: plain rects may re-shape, groups stay rigid.
            std::vector<int> variants;
            if (item.group >= 0)
                variants.push_back(-1);
            else
                for (int v = 0; v < static_cast<int>(inst.rects[item.rect].variants.size());
                     ++v)
                    variants.push_back(v);

            struct Best {
                bool found = false;
                double total = 0.0;
                IntPoint at;
                int variant = -1;
            } best;
            std::set<std::tuple<int, coord_t, coord_t>> seen;

            for (int v : variants) {
                coord_t w = self.w, h = self.h;
                if (v >= 0) {
                    w = inst.rects[item.rect].variants[v].w;
                    h = inst.rects[item.rect].variants[v].h;
                }
                for (int order = 0; order < 2 && evals < budget; ++order) {
                    for (const IntPoint& pt : pts) {
                        if (evals >= budget) break;
                        SlideCandidates sc =
                            slide(w, h, pt, order == 0, obstacles, 0, 0, nullptr);
                        for (int ci = 0; ci < sc.count && evals < budget; ++ci) {
                            IntPoint c = sc.pos[ci];
                            if (!seen.insert({v, c.x, c.y}).second) continue;
                            // Apply the tentative move.
                            Placement trial = cur;
                            if (item.group >= 0) {
                                coord_t dx = c.x - self.x, dy = c.y - self.y;
                                for (int r : item.members) {
                                    trial.pos[r].x += dx;
                                    trial.pos[r].y += dy;
                                }
                                trial.axes2[item.group] +=
                                    inst.groups[item.group].axis == Axis::Vertical
                                        ? 2 * dx
                                        : 2 * dy;
                            } else {
                                trial.pos[item.rect] = c;
                                if (v >= 0) trial.variant[item.rect] = v;
                            }
                            ++evals;
                            double t = criterion(trial, inst, cw).total;
                            if (t < cur_total && (!best.found || t < best.total)) {
                                best = {true, t, c, v};
                            }
                        }
                    }
                }
            }

            if (best.found) {
                if (item.group >= 0) {
                    coord_t dx = best.at.x - self.x, dy = best.at.y - self.y;
                    for (int r : item.members) {
                        cur.pos[r].x += dx;
                        cur.pos[r].y += dy;
                    }
                    cur.axes2[item.group] +=
                        inst.groups[item.group].axis == Axis::Vertical ? 2 * dx : 2 * dy;
                } else {
                    cur.pos[item.rect] = best.at;
                    if (best.variant >= 0) cur.variant[item.rect] = best.variant;
                }
                cur_total = best.total;
                improved = true;
            }
        }
    }
    if (evals_out) *evals_out = evals;
    return cur;
}

// ---------------------------------------------------------------------------
// LP stage
// ---------------------------------------------------------------------------

namespace {

// Sparse affine expression over LP variables.
struct Lin {
    std::vector<std::pair<int, double>> terms;
    double c0 = 0.0;

    void add(int var, double k) {
        for (auto& t : terms)
            if (t.first == var) {
                t.second += k;
                return;
            }
        terms.push_back({var, k});
    }
    void add(const Lin& o, double k) {
        for (const auto& [v, a] : o.terms) add(v, a * k);
        c0 += o.c0 * k;
    }
};

struct LpBuild {
    detail::LpProblem lp;
    std::vector<double> warm;

    int new_var(double w0) {
        lp.c.push_back(0.0);
        warm.push_back(w0);
        return lp.num_vars++;
    }
    void obj(int var, double k) { lp.c[var] += k; }
    void obj(const Lin& lin, double k) {
        for (const auto& [v, a] : lin.terms) lp.c[v] += k * a;
    }
    // lin <= bound
    void le(Lin lin, double bound) {
        lp.add_row(lin.terms, bound - lin.c0);
    }
};

struct GroupRounding {
    int axis_var = -1;
    coord_t new_axes2 = 0;
};

// One extract -> solve -> round -> repair pass. Returns true and fills `out`
// when the rounded placement is feasible and strictly better than `p`.
bool lp_round(const Placement& p, const Instance& inst, const CostWeights& cw,
              Placement& out) {
    const int n = inst.n();
    if (n == 0) return false;
    const CriterionReport rep0 = criterion(p, inst, cw);
    const Box bb0 = bounding_box(p, inst);
    const coord_t W0 = bb0.w, H0 = bb0.h;

    LpBuild B;
    const int vW = B.new_var(static_cast<double>(W0));
    const int vH = B.new_var(static_cast<double>(H0));
    B.obj(vW, cw.c_area);
    B.obj(vH, cw.c_area);

    std::vector<int> axis_var(inst.groups.size(), -1);
    for (size_t g = 0; g < inst.groups.size(); ++g)
        axis_var[g] = B.new_var(p.axes2[g] / 2.0);

    // Coordinate expressions; symmetry equalities eliminated by substitution.
    std::vector<Lin> X(n), Y(n);
    std::vector<int> free_x(n, -1), free_y(n, -1);
    std::vector<coord_t> w(n), h(n);
    for (int i = 0; i < n; ++i) {
        const Variant& var = inst.rects[i].variants[p.variant[i]];
        w[i] = var.w;
        h[i] = var.h;
    }
    std::vector<std::uint8_t> substituted(n, 0);
    for (size_t g = 0; g < inst.groups.size(); ++g) {
        const SymmetryGroup& grp = inst.groups[g];
        const bool vert = grp.axis == Axis::Vertical;
        for (const auto& [i, j] : grp.pairs) {
            if (vert) {
                free_x[i] = B.new_var(static_cast<double>(p.pos[i].x));
                X[i].add(free_x[i], 1.0);
                X[j].add(axis_var[g], 2.0);
                X[j].add(free_x[i], -1.0);
                X[j].c0 = -static_cast<double>(w[i]);
                free_y[i] = B.new_var(static_cast<double>(p.pos[i].y));
                Y[i].add(free_y[i], 1.0);
                Y[j] = Y[i];
            } else {
                free_y[i] = B.new_var(static_cast<double>(p.pos[i].y));
                Y[i].add(free_y[i], 1.0);
                Y[j].add(axis_var[g], 2.0);
                Y[j].add(free_y[i], -1.0);
                Y[j].c0 = -static_cast<double>(h[i]);
                free_x[i] = B.new_var(static_cast<double>(p.pos[i].x));
                X[i].add(free_x[i], 1.0);
                X[j] = X[i];
            }
            substituted[j] = 1;
        }
        for (int s : grp.selfs) {
            if (vert) {
                X[s].add(axis_var[g], 1.0);
                X[s].c0 = -static_cast<double>(w[s]) / 2.0;
                free_y[s] = B.new_var(static_cast<double>(p.pos[s].y));
                Y[s].add(free_y[s], 1.0);
            } else {
                Y[s].add(axis_var[g], 1.0);
                Y[s].c0 = -static_cast<double>(h[s]) / 2.0;
                free_x[s] = B.new_var(static_cast<double>(p.pos[s].x));
                X[s].add(free_x[s], 1.0);
            }
            substituted[s] = 1;
        }
    }
    for (int i = 0; i < n; ++i) {
        if (free_x[i] < 0 && X[i].terms.empty() && !substituted[i]) {
            free_x[i] = B.new_var(static_cast<double>(p.pos[i].x));
            X[i].add(free_x[i], 1.0);
        }
        if (free_y[i] < 0 && Y[i].terms.empty() && !substituted[i]) {
            free_y[i] = B.new_var(static_cast<double>(p.pos[i].y));
            Y[i].add(free_y[i], 1.0);
        }
    }

    auto cx = [&](int i) {
        Lin l = X[i];
        l.c0 += w[i] / 2.0;
        return l;
    };
    auto cy = [&](int i) {
        Lin l = Y[i];
        l.c0 += h[i] / 2.0;
        return l;
    };

    // Coordinates non-negative and inside the (capped) bounding box.
    for (int i = 0; i < n; ++i) {
        Lin nx;
        nx.add(X[i], -1.0);
        B.le(nx, 0.0);
        Lin ny;
        ny.add(Y[i], -1.0);
        B.le(ny, 0.0);
        Lin bx = X[i];
        bx.add(vW, -1.0);
        B.le(bx, -static_cast<double>(w[i]));
        Lin by = Y[i];
        by.add(vH, -1.0);
        B.le(by, -static_cast<double>(h[i]));
    }
    {
        Lin cw_row;
        cw_row.add(vW, 1.0);
        B.le(cw_row, static_cast<double>(W0));
        Lin ch_row;
        ch_row.add(vH, 1.0);
        B.le(ch_row, static_cast<double>(H0));
    }

    // Fixed pairwise relations (the max-slack one per pair).
    const RelationAssignment ra = extract_relations(p, inst);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const size_t idx = RelationAssignment::pair_index(i, j, n);
            const double a = static_cast<double>(ra.margin[idx]);
            Lin row;
            switch (ra.rel[idx]) {
                case Relation::LeftOf:
                    row.add(X[i], 1.0);
                    row.add(X[j], -1.0);
                    B.le(row, -static_cast<double>(w[i]) - a);
                    break;
                case Relation::Below:
                    row.add(Y[i], 1.0);
                    row.add(Y[j], -1.0);
                    B.le(row, -static_cast<double>(h[i]) - a);
                    break;
                case Relation::RightOf:
                    row.add(X[j], 1.0);
                    row.add(X[i], -1.0);
                    B.le(row, -static_cast<double>(w[j]) - a);
                    break;
                case Relation::Above:
                    row.add(Y[j], 1.0);
                    row.add(Y[i], -1.0);
                    B.le(row, -static_cast<double>(h[j]) - a);
                    break;
            }
        }

    // Restricted rect vs blockage: fix the max-slack direction, margin 0.
    for (const Blockage& bl : inst.blockages) {
        for (int r : bl.restricted) {
            Box br = p.rect_box(inst, r);
            const Box& bx = bl.box;
            const coord_t slack[4] = {bx.x - br.right(), bx.y - br.top(),
                                      br.x - bx.right(), br.y - bx.top()};
            int bestk = 0;
            for (int k = 1; k < 4; ++k)
                if (slack[k] > slack[bestk]) bestk = k;
            Lin row;
            switch (bestk) {
                case 0:  // rect left of blockage
                    row.add(X[r], 1.0);
                    B.le(row, static_cast<double>(bx.x - w[r]));
                    break;
                case 1:  // rect below blockage
                    row.add(Y[r], 1.0);
                    B.le(row, static_cast<double>(bx.y - h[r]));
                    break;
                case 2:  // rect right of blockage
                    row.add(X[r], -1.0);
                    B.le(row, -static_cast<double>(bx.right()));
                    break;
                case 3:  // rect above blockage
                    row.add(Y[r], -1.0);
                    B.le(row, -static_cast<double>(bx.top()));
                    break;
            }
        }
    }

    // HPWL: four bound variables per net.
    if (cw.c_conn > 0.0 && rep0.s_conn > 0.0) {
        for (const Net& net : inst.nets) {
            if (net.cost <= 0.0) continue;
            if (net.members.size() + net.anchors.size() < 2) continue;
            coord_t mnx = std::numeric_limits<coord_t>::max(), mny = mnx;
            coord_t mxx = std::numeric_limits<coord_t>::min(), mxy = mxx;
            auto extend = [&](coord_t cx2, coord_t cy2) {
                mnx = std::min(mnx, cx2);
                mxx = std::max(mxx, cx2);
                mny = std::min(mny, cy2);
                mxy = std::max(mxy, cy2);
            };
            for (int r : net.members) {
                Box b = p.rect_box(inst, r);
                extend(b.cx2(), b.cy2());
            }
            for (const IntPoint& a : net.anchors) extend(2 * a.x, 2 * a.y);
            const int xm = B.new_var(mnx / 2.0), xM = B.new_var(mxx / 2.0);
            const int ym = B.new_var(mny / 2.0), yM = B.new_var(mxy / 2.0);
            const double k = cw.c_conn / rep0.s_conn * net.cost;
            B.obj(xM, k);
            B.obj(xm, -k);
            B.obj(yM, k);
            B.obj(ym, -k);
            for (int r : net.members) {
                Lin lo;
                lo.add(xm, 1.0);
                lo.add(cx(r), -1.0);
                B.le(lo, 0.0);
                Lin hi = cx(r);
                hi.add(xM, -1.0);
                B.le(hi, 0.0);
                Lin lo2;
                lo2.add(ym, 1.0);
                lo2.add(cy(r), -1.0);
                B.le(lo2, 0.0);
                Lin hi2 = cy(r);
                hi2.add(yM, -1.0);
                B.le(hi2, 0.0);
            }
            for (const IntPoint& a : net.anchors) {
                Lin lo;
                lo.add(xm, 1.0);
                B.le(lo, static_cast<double>(a.x));
                Lin hi;
                hi.add(xM, -1.0);
                B.le(hi, -static_cast<double>(a.x));
                Lin lo2;
                lo2.add(ym, 1.0);
                B.le(lo2, static_cast<double>(a.y));
                Lin hi2;
                hi2.add(yM, -1.0);
                B.le(hi2, -static_cast<double>(a.y));
            }
        }
    }

    // Proximity: |dx| + |dy| via distance variables. Positive costs minimize
    // the distance (two-sided rows); negative costs maximize it along the
    // input's sign branch (one-sided row), which keeps the program linear.
    if (cw.c_prox > 0.0 && rep0.s_prox > 0.0) {
        for (const ProximityPair& pp : inst.proximities) {
            Box ba = p.rect_box(inst, pp.a), bq = p.rect_box(inst, pp.b);
            const double k = cw.c_prox / rep0.s_prox * pp.cost;
            const double dx0 = std::abs(ba.cx2() - bq.cx2()) / 2.0;
            const double dy0 = std::abs(ba.cy2() - bq.cy2()) / 2.0;
            const int dx = B.new_var(dx0), dy = B.new_var(dy0);
            B.obj(dx, k);
            B.obj(dy, k);
            if (pp.cost > 0.0) {
                Lin r1 = cx(pp.a);
                r1.add(cx(pp.b), -1.0);
                r1.add(dx, -1.0);
                B.le(r1, 0.0);
                Lin r2 = cx(pp.b);
                r2.add(cx(pp.a), -1.0);
                r2.add(dx, -1.0);
                B.le(r2, 0.0);
                Lin r3 = cy(pp.a);
                r3.add(cy(pp.b), -1.0);
                r3.add(dy, -1.0);
                B.le(r3, 0.0);
                Lin r4 = cy(pp.b);
                r4.add(cy(pp.a), -1.0);
                r4.add(dy, -1.0);
                B.le(r4, 0.0);
            } else {
                const double sx = ba.cx2() >= bq.cx2() ? 1.0 : -1.0;
                const double sy = ba.cy2() >= bq.cy2() ? 1.0 : -1.0;
                Lin r1;
                r1.add(dx, 1.0);
                r1.add(cx(pp.a), -sx);
                r1.add(cx(pp.b), sx);
                B.le(r1, 0.0);
                Lin r2;
                r2.add(dy, 1.0);
                r2.add(cy(pp.a), -sy);
                r2.add(cy(pp.b), sy);
                B.le(r2, 0.0);
            }
        }
    }

    // Interface entries: one free coordinate on the side, absolute deviations
    // per member; the coordinate along the fixed side is linear directly.
    if (cw.c_inter > 0.0 && rep0.s_inter > 0.0) {
        for (const InterfaceEntry& ie : inst.interfaces) {
            const bool vertical_side = ie.side == Side::Left || ie.side == Side::Right;
            const double k = cw.c_inter / rep0.s_inter * ie.cost;
            std::vector<coord_t> free2;
            for (int r : ie.members) {
                Box b = p.rect_box(inst, r);
                free2.push_back(vertical_side ? b.cy2() : b.cx2());
            }
            std::sort(free2.begin(), free2.end());
            coord_t med2 = free2[(free2.size() - 1) / 2];
            med2 = std::clamp<coord_t>(med2, 0, 2 * (vertical_side ? H0 : W0));
            const int f = B.new_var(med2 / 2.0);
            Lin fl;
            fl.add(f, -1.0);
            B.le(fl, 0.0);
            Lin fu;
            fu.add(f, 1.0);
            fu.add(vertical_side ? vH : vW, -1.0);
            B.le(fu, 0.0);

            for (int r : ie.members) {
                Lin fc = vertical_side ? cy(r) : cx(r);
                Box b = p.rect_box(inst, r);
                const double f0 =
                    std::abs((vertical_side ? b.cy2() : b.cx2()) - med2) / 2.0;
                const int t = B.new_var(f0);
                B.obj(t, k);
                Lin r1 = fc;
                r1.add(f, -1.0);
                r1.add(t, -1.0);
                B.le(r1, 0.0);
                Lin r2;
                r2.add(f, 1.0);
                r2.add(fc, -1.0);
                r2.add(t, -1.0);
                B.le(r2, 0.0);

                switch (ie.side) {
                    case Side::Left:
                        B.obj(cx(r), k);
                        break;
                    case Side::Right:
                        B.obj(vW, k);
                        B.obj(cx(r), -k);
                        break;
                    case Side::Bottom:
                        B.obj(cy(r), k);
                        break;
                    case Side::Top:
                        B.obj(vH, k);
                        B.obj(cy(r), -k);
                        break;
                }
            }
        }
    }

    // Aspect-ratio rows, only when the input already satisfies the bounds
    // (then the input is LP-feasible and the branch is the current argmax).
    if (W0 > 0 || H0 > 0) {
        const double R0 = static_cast<double>(std::min(W0, H0)) /
                          static_cast<double>(std::max(W0, H0));
        if (R0 >= inst.aspect_lo && R0 <= inst.aspect_hi) {
            const int vmax = W0 >= H0 ? vW : vH;
            const int vmin = W0 >= H0 ? vH : vW;
            Lin lo;  // aspect_lo * max <= min
            lo.add(vmax, inst.aspect_lo);
            lo.add(vmin, -1.0);
            B.le(lo, 0.0);
            Lin hi;  // min <= aspect_hi * max
            hi.add(vmin, 1.0);
            hi.add(vmax, -inst.aspect_hi);
            B.le(hi, 0.0);
        }
    }

    detail::LpResult sol = detail::solve_lp(B.lp, B.warm);
    if (!sol.ok) return false;

    // Round: snap near-integers, floor free coordinates, keep each axis'
    // doubled-value parity, and derive mirrored coordinates exactly.
    auto snap = [](double v) {
        double r = std::nearbyint(v);
        return std::abs(v - r) <= 1e-6 ? r : v;
    };
    auto floor_of = [&](double v) {
        return static_cast<coord_t>(std::floor(snap(v)));
    };

    Placement q = p;
    std::vector<coord_t> ax2(inst.groups.size(), 0);
    for (size_t g = 0; g < inst.groups.size(); ++g) {
        double A = snap(2.0 * sol.v[axis_var[g]]);
        coord_t k0 = static_cast<coord_t>(std::floor(A));
        const coord_t parity = ((p.axes2[g] % 2) + 2) % 2;
        if (((k0 % 2) + 2) % 2 != parity) k0 -= 1;
        ax2[g] = k0;
        q.axes2[g] = k0;
    }
    for (int i = 0; i < n; ++i) {
        if (free_x[i] >= 0) q.pos[i].x = floor_of(sol.v[free_x[i]]);
        if (free_y[i] >= 0) q.pos[i].y = floor_of(sol.v[free_y[i]]);
    }
    for (size_t g = 0; g < inst.groups.size(); ++g) {
        const SymmetryGroup& grp = inst.groups[g];
        const bool vert = grp.axis == Axis::Vertical;
        for (const auto& [i, j] : grp.pairs) {
            if (vert) {
                q.pos[j].x = ax2[g] - q.pos[i].x - w[i];
                q.pos[j].y = q.pos[i].y;
            } else {
                q.pos[j].y = ax2[g] - q.pos[i].y - h[i];
                q.pos[j].x = q.pos[i].x;
            }
        }
        for (int s : grp.selfs) {
            if (vert)
                q.pos[s].x = (ax2[g] - w[s]) / 2;
            else
                q.pos[s].y = (ax2[g] - h[s]) / 2;
        }
    }

    // Groups whose internal spacing got damaged by rounding fall back to the
    // input's rigid internal geometry, translated to the rounded location.
    const DecodePlan plan(inst);
    for (size_t g = 0; g < inst.groups.size(); ++g) {
        const DecodePlan::Item& item = plan.items[g];
        bool internal_ok = true;
        for (size_t a = 0; a < item.members.size() && internal_ok; ++a)
            for (size_t b = a + 1; b < item.members.size() && internal_ok; ++b) {
                int ra_ = item.members[a], rb_ = item.members[b];
                Box b1 = q.rect_box(inst, ra_), b2 = q.rect_box(inst, rb_);
                coord_t d = inst.distances.at(ra_, rb_);
                bool sep = b1.right() + d <= b2.x || b2.right() + d <= b1.x ||
                           b1.top() + d <= b2.y || b2.top() + d <= b1.y;
                if (!sep) internal_ok = false;
            }
        if (internal_ok) continue;
        Box o0 = outline_of(p, inst, item.members);
        Box o1 = outline_of(q, inst, item.members);
        coord_t dx = std::max<coord_t>(o1.x, 0) - o0.x;
        coord_t dy = std::max<coord_t>(o1.y, 0) - o0.y;
        for (int r : item.members) {
            q.pos[r].x = p.pos[r].x + dx;
            q.pos[r].y = p.pos[r].y + dy;
        }
        q.axes2[g] = p.axes2[g] +
                     (inst.groups[g].axis == Axis::Vertical ? 2 * dx : 2 * dy);
    }

    // Repair sweep: re-slide items that ended up violating a margin.
    const int m = static_cast<int>(plan.items.size());
    const size_t nb = inst.blockages.size();
    auto item_outline = [&](int it) {
        return outline_of(q, inst, plan.items[it].members);
    };
    auto violates = [&](int it) {
        Box b = item_outline(it);
        if (b.x < 0 || b.y < 0) return true;
        for (int jt = 0; jt < m; ++jt) {
            if (jt == it) continue;
            Box o = item_outline(jt);
            coord_t a = plan.item_margin(it, jt);
            bool sep = b.right() + a <= o.x || o.right() + a <= b.x ||
                       b.top() + a <= o.y || o.top() + a <= b.y;
            if (!sep) return true;
        }
        for (size_t bl = 0; bl < nb; ++bl) {
            if (!plan.blocked[static_cast<size_t>(it) * nb + bl]) continue;
            const Box& o = inst.blockages[bl].box;
            bool sep = b.right() <= o.x || o.right() <= b.x || b.top() <= o.y ||
                       o.top() <= b.y;
            if (!sep) return true;
        }
        return false;
    };
    std::vector<SlideObstacle> obstacles;
    for (int it = 0; it < m; ++it) {
        if (!violates(it)) continue;
        Box b = item_outline(it);
        obstacles.clear();
        for (int jt = 0; jt < m; ++jt)
            if (jt != it) obstacles.push_back({item_outline(jt), plan.item_margin(it, jt)});
        for (size_t bl = 0; bl < nb; ++bl)
            if (plan.blocked[static_cast<size_t>(it) * nb + bl])
                obstacles.push_back({inst.blockages[bl].box, 0});
        IntPoint start{std::max<coord_t>(b.x, 0), std::max<coord_t>(b.y, 0)};
        SlideCandidates sc = slide(b.w, b.h, start, true, obstacles, 0, 0, nullptr);
        if (sc.count == 0) sc = slide(b.w, b.h, start, false, obstacles, 0, 0, nullptr);
        if (sc.count == 0) return false;
        IntPoint c = sc.pos[sc.count - 1];
        coord_t dx = c.x - b.x, dy = c.y - b.y;
        const DecodePlan::Item& item = plan.items[it];
        for (int r : item.members) {
            q.pos[r].x += dx;
            q.pos[r].y += dy;
        }
        if (item.group >= 0)
            q.axes2[item.group] +=
                inst.groups[item.group].axis == Axis::Vertical ? 2 * dx : 2 * dy;
    }

    if (!check_feasible(q, inst)) return false;
    if (!(criterion(q, inst, cw).total < rep0.total)) return false;
    out = std::move(q);
    return true;
}

}  // namespace

Placement lp_refine(const Placement& p, const Instance& inst, const CostWeights& cw,
                    int max_rounds) {
    Placement cur = p;
    for (int round = 0; round < max_rounds; ++round) {
        Placement next;
        if (!lp_round(cur, inst, cw, next)) break;
        cur = std::move(next);
    }
    return cur;
}

RefineResult refine_pipeline(const Chromosome& best, const Instance& inst,
                             const CostWeights& cw, const RefineBudgets& budgets) {
    RefineResult out;
    const DecodePlan plan(inst);

    Chromosome cur = best;
    double total = decode_with_plan(cur, plan, cw).report.total;

    std::uint64_t ev = 0;
    Chromosome next = ls_variants(cur, inst, cw, budgets.variants_evals, &ev);
    double t2 = next == cur ? total : decode_with_plan(next, plan, cw).report.total;
    out.stages.push_back({"ls_variants", total, t2, ev});
    cur = std::move(next);
    total = t2;

    next = ls_positions(cur, inst, cw, budgets.positions_evals, budgets.positions_max_n,
                        &ev);
    t2 = next == cur ? total : decode_with_plan(next, plan, cw).report.total;
    out.stages.push_back({"ls_positions", total, t2, ev});
    cur = std::move(next);
    total = t2;

    Placement placed = decode_with_plan(cur, plan, cw).placement;
    Placement after_layout = ls_layout(placed, inst, cw, budgets.layout_evals, &ev);
    double t3 = criterion(after_layout, inst, cw).total;
    out.stages.push_back({"ls_layout", total, t3, ev});

    Placement final_p = budgets.lp_rounds > 0
                            ? lp_refine(after_layout, inst, cw, budgets.lp_rounds)
                            : after_layout;
    double t4 = criterion(final_p, inst, cw).total;
    out.stages.push_back({"lp_refine", t3, t4, 0});

    out.placement = std::move(final_p);
    out.report = criterion(out.placement, inst, cw);
    return out;
}

}  // namespace amsplace
