#include "amsplace/syngen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "amsplace/detail/format.hpp"

namespace amsplace {

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<Variant> rotation_variants(coord_t w, coord_t h) {
    std::vector<Variant> v{{w, h}};
    if (w != h) v.push_back({h, w});
    std::sort(v.begin(), v.end(), [](const Variant& a, const Variant& b) {
        return a.w != b.w ? a.w < b.w : a.h < b.h;
    });
    return v;
}

}  // namespace

Instance generate(const GenParams& p) {
    if (p.n_rects < 1 || p.n_nets_lo > p.n_nets_hi || p.n_nets_lo < 0 ||
        p.n_blockages < 0 || p.n_blockages > 2 || p.multi_variant_fraction < 0.0 ||
        p.multi_variant_fraction > 1.0)
        throw std::invalid_argument("generate: invalid parameters");

    std::mt19937_64 rng(p.rng_seed);
    const int n = p.n_rects;
    Instance inst;
    inst.weights = {1.0, 8.0, 0.0, 0.0};
    inst.aspect_lo = 0.0;
    inst.aspect_hi = 1.0;

    // Rectangles: the first round(mvf*n) of a shuffled id list get device-array
    // variants, the rest rotation only.
    std::vector<int> shuffled(n);
    std::iota(shuffled.begin(), shuffled.end(), 0);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const int n_multi = static_cast<int>(std::lround(p.multi_variant_fraction * n));
    std::vector<std::uint8_t> is_multi(n, 0);
    for (int k = 0; k < n_multi; ++k) is_multi[shuffled[k]] = 1;

    inst.rects.resize(n);
    for (int i = 0; i < n; ++i) {
        const coord_t w = uniform_int(rng, 2, 30);
        const coord_t h = uniform_int(rng, 2, 30);
        inst.rects[i].name = detail::fmt("r%d", i);
        if (is_multi[i]) {
            const int count = uniform_int(rng, 2, 4);
            inst.rects[i].variants = enumerate_variants(w, h, count, count, 0);
        } else {
            inst.rects[i].variants = rotation_variants(w, h);
        }
    }

    // Pairwise minimum distances; zeros stay on the default.
    const int d_lo = p.allow_negative_distances ? -2 : 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const coord_t a = uniform_int(rng, d_lo, 6);
            if (a != 0) inst.distances.set(i, j, a);
        }

    // Symmetry groups: 1-2 groups with >= 10 members in total when they fit.
    if (p.with_symmetry) {
        int take = 0;  // next index into `shuffled` to consume as a member
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const int n_groups = n >= 48 ? 2 : 1;
        for (int g = 0; g < n_groups; ++g) {
            int n_pairs = n_groups == 1 ? uniform_int(rng, 4, 5) : uniform_int(rng, 3, 4);
            int n_selfs = uniform_int(rng, n_groups == 1 ? 2 : 1, 2);
            while (take + 2 * n_pairs + n_selfs > n && n_pairs > 1) --n_pairs;
            while (take + 2 * n_pairs + n_selfs > n && n_selfs > 0) --n_selfs;
            if (take + 2 * n_pairs + n_selfs > n) break;
            SymmetryGroup grp;
            grp.axis = uniform_int(rng, 0, 1) == 0 ? Axis::Vertical : Axis::Horizontal;
            for (int k = 0; k < n_pairs; ++k) {
                int a = shuffled[take++], b = shuffled[take++];
                inst.rects[b].variants = inst.rects[a].variants;  // identical lists
                grp.pairs.push_back({a, b});
            }
            for (int k = 0; k < n_selfs; ++k) {
                int s = shuffled[take++];
                // Even dims on both axes: on-axis members then never clash with
                // the axis parity whichever orientation the group uses.
                coord_t we = 2 * uniform_int(rng, 1, 15);
                coord_t he = 2 * uniform_int(rng, 1, 15);
                inst.rects[s].variants = rotation_variants(we, he);
                grp.selfs.push_back(s);
            }
            inst.groups.push_back(std::move(grp));
        }
    }

    // Nominal canvas estimate for blockage sizing/placement.
    double area_sum = 0.0;
    for (const Rect& r : inst.rects)
        area_sum += static_cast<double>(r.variants[0].w) * r.variants[0].h;
    const coord_t est = static_cast<coord_t>(std::ceil(std::sqrt(area_sum)));

    for (int b = 0; b < p.n_blockages; ++b) {
        Blockage bl;
        const coord_t lo = std::max<coord_t>(1, est / 6);
        const coord_t hi = std::max<coord_t>(lo, est / 3);
        bl.box.w = uniform_int(rng, static_cast<int>(lo), static_cast<int>(hi));
        bl.box.h = uniform_int(rng, static_cast<int>(lo), static_cast<int>(hi));
        switch (uniform_int(rng, 0, 3)) {
            case 0: bl.box.x = 0; bl.box.y = 0; break;
            case 1: bl.box.x = std::max<coord_t>(0, est - bl.box.w); bl.box.y = 0; break;
            case 2: bl.box.x = 0; bl.box.y = std::max<coord_t>(0, est - bl.box.h); break;
            default:
                bl.box.x = std::max<coord_t>(0, est - bl.box.w);
                bl.box.y = std::max<coord_t>(0, est - bl.box.h);
        }
        const int n_restricted = std::min(n, static_cast<int>(std::lround(0.15 * n)));
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        bl.restricted.assign(shuffled.begin(), shuffled.begin() + n_restricted);
        std::sort(bl.restricted.begin(), bl.restricted.end());
        inst.blockages.push_back(std::move(bl));
    }

    // Nets: uniform count in [lo,hi], sizes 2-6, distinct members, cost 1.
    const int n_nets = uniform_int(rng, p.n_nets_lo, p.n_nets_hi);
    for (int e = 0; e < n_nets && n >= 2; ++e) {
        const int size = std::min(n, uniform_int(rng, 2, 6));
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        Net net;
        net.members.assign(shuffled.begin(), shuffled.begin() + size);
        std::sort(net.members.begin(), net.members.end());
        net.cost = 1.0;
        inst.nets.push_back(std::move(net));
    }

    auto errs = validate_instance(inst);
    if (!errs.empty())
        throw std::logic_error("generate: produced invalid instance: " + errs.front());
    return inst;
}

Instance compose_copies(const Instance& inst, int k) {
    if (k < 2) throw std::invalid_argument("compose_copies: k must be >= 2");
    const int n = inst.n();
    Instance out;
    out.weights = inst.weights;
    out.aspect_lo = inst.aspect_lo;
    out.aspect_hi = inst.aspect_hi;
    out.distances.default_distance = inst.distances.default_distance;

    for (int c = 0; c < k; ++c) {
        const int off = c * n;
        for (int i = 0; i < n; ++i) {
            Rect r = inst.rects[i];
            r.name = detail::fmt("%s@%d", r.name.c_str(), c);
            out.rects.push_back(std::move(r));
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                coord_t a = inst.distances.at(i, j);
                if (a != inst.distances.default_distance)
                    out.distances.set(off + i, off + j, a);
            }
        for (const Net& net : inst.nets) {
            Net nn = net;
            for (int& m : nn.members) m += off;
            out.nets.push_back(std::move(nn));
        }
        for (const SymmetryGroup& g : inst.groups) {
            SymmetryGroup ng = g;
            for (auto& [a, b] : ng.pairs) {
                a += off;
                b += off;
            }
            for (int& s : ng.selfs) s += off;
            out.groups.push_back(std::move(ng));
        }
        for (const ProximityPair& pp : inst.proximities)
            out.proximities.push_back({pp.a + off, pp.b + off, pp.cost});
        for (const InterfaceEntry& ie : inst.interfaces) {
            InterfaceEntry ne = ie;
            for (int& m : ne.members) m += off;
            out.interfaces.push_back(std::move(ne));
        }
    }
    return out;
}

}  // namespace amsplace
