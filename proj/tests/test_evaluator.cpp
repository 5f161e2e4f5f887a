#include "doctest.h"

#include <vector>

#include "amsplace/evaluator.hpp"

using namespace amsplace;

namespace {

Instance square_pair() {
    // Two 2x2 rects; centroids at (1,1) and (5,3) once placed at (0,0)/(4,2).
    Instance inst;
    inst.rects = {{"a", {{2, 2}}}, {"b", {{2, 2}}}};
    return inst;
}

Placement at(std::vector<IntPoint> pos, std::vector<std::int32_t> variant,
             std::vector<coord_t> axes2 = {}) {
    Placement p;
    p.pos = std::move(pos);
    p.variant = std::move(variant);
    p.axes2 = std::move(axes2);
    return p;
}

}  // namespace

TEST_CASE("hpwl of a two-pin net over centroids") {
    Instance inst = square_pair();
    inst.nets.push_back({{0, 1}, 1.0, {}});
    Placement p = at({{0, 0}, {4, 2}}, {0, 0});
    // |5-1| + |3-1| = 6
    CHECK(hpwl(p, inst) == doctest::Approx(6.0));
}

TEST_CASE("hpwl handles half-unit centroids exactly") {
    Instance inst;
    inst.rects = {{"a", {{3, 3}}}, {"b", {{1, 1}}}};
    inst.nets.push_back({{0, 1}, 1.0, {}});
    // centroids (1.5, 1.5) and (4.5, 0.5): span 3 + 1 = 4
    CHECK(hpwl(at({{0, 0}, {4, 0}}, {0, 0}), inst) == doctest::Approx(4.0));
}

TEST_CASE("hpwl weights nets by cost and sums them") {
    Instance inst;
    inst.rects = {{"a", {{2, 2}}}, {"b", {{2, 2}}}, {"c", {{2, 2}}}};
    inst.nets.push_back({{0, 1}, 2.0, {}});
    inst.nets.push_back({{0, 2}, 1.0, {}});
    // a (1,1), b (4,2), c (1,5): spans 3+1=4 and 0+4=4 -> 2*4 + 1*4
    Placement p = at({{0, 0}, {3, 1}, {0, 4}}, {0, 0, 0});
    CHECK(hpwl(p, inst) == doctest::Approx(12.0));
}

TEST_CASE("hpwl counts anchors as pins") {
    Instance inst = square_pair();
    inst.nets.push_back({{0, 1}, 1.0, {{10, 0}}});
    Placement p = at({{0, 0}, {4, 2}}, {0, 0});
    // pins (1,1), (5,3), (10,0): span 9 + 3 = 12
    CHECK(hpwl(p, inst) == doctest::Approx(12.0));

    // Mask out b: the anchor keeps the net at two pins.
    std::vector<std::uint8_t> mask = {1, 0};
    // pins (1,1), (10,0): span 9 + 1 = 10
    CHECK(hpwl(p, inst, &mask) == doctest::Approx(10.0));
}

TEST_CASE("hpwl ignores nets with fewer than two placed pins") {
    Instance inst = square_pair();
    inst.nets.push_back({{0, 1}, 1.0, {}});
    Placement p = at({{0, 0}, {4, 2}}, {0, 0});
    std::vector<std::uint8_t> mask = {1, 0};
    CHECK(hpwl(p, inst, &mask) == 0.0);
}

TEST_CASE("criterion area term is the origin-anchored half-perimeter") {
    Instance inst;
    inst.rects = {{"a", {{4, 2}}}, {"b", {{3, 3}}}};
    Placement p = at({{0, 0}, {5, 0}}, {0, 0});
    auto rep = criterion(p, inst, inst.weights);
    CHECK(rep.area_term == doctest::Approx(11.0));  // W=8, H=3
    CHECK(rep.total == doctest::Approx(11.0));
    CHECK(!rep.penalty_applied);
}

TEST_CASE("criterion applies the aspect penalty on bound violation") {
    Instance inst;
    inst.rects = {{"a", {{4, 2}}}, {"b", {{3, 3}}}};
    inst.aspect_lo = 0.5;
    inst.aspect_hi = 1.0;
    Placement p = at({{0, 0}, {5, 0}}, {0, 0});
    auto rep = criterion(p, inst, inst.weights);
    // ratio 3/8 = 0.375 < 0.5, so 11 * 2.5
    CHECK(rep.penalty_applied);
    CHECK(rep.total == doctest::Approx(27.5));
}

TEST_CASE("criterion penalizes ratios above the upper bound too") {
    Instance inst;
    inst.rects = {{"sq", {{5, 5}}}};
    inst.aspect_lo = 0.3;
    inst.aspect_hi = 0.8;
    auto rep = criterion(at({{0, 0}}, {0}), inst, inst.weights);
    CHECK(rep.penalty_applied);
    CHECK(rep.total == doctest::Approx(25.0));
}

TEST_CASE("criterion never penalizes partial placements") {
    Instance inst;
    inst.rects = {{"a", {{10, 1}}}, {"b", {{1, 1}}}};
    inst.aspect_lo = 0.9;
    inst.aspect_hi = 1.0;
    Placement p = at({{0, 0}, {12, 0}}, {0, 0});

    std::vector<std::uint8_t> partial = {1, 0};
    auto rep = criterion(p, inst, inst.weights, &partial);
    CHECK(!rep.penalty_applied);
    CHECK(rep.total == doctest::Approx(11.0));  // W=10, H=1

    auto full = criterion(p, inst, inst.weights);
    CHECK(full.penalty_applied);
}

TEST_CASE("criterion connectivity term uses the cost-sum normalizer") {
    Instance inst = square_pair();
    inst.nets.push_back({{0, 1}, 1.0, {}});
    inst.weights.c_conn = 8.0;
    Placement p = at({{0, 0}, {4, 2}}, {0, 0});
    auto rep = criterion(p, inst, inst.weights);
    CHECK(rep.s_conn == doctest::Approx(1.0));
    CHECK(rep.conn_raw == doctest::Approx(6.0));
    // W=6, H=4: 10 + 8/1 * 6
    CHECK(rep.total == doctest::Approx(58.0));

    // Doubling every net cost rescales the normalizer: total unchanged.
    Instance scaled = inst;
    scaled.nets[0].cost = 2.0;
    auto rep2 = criterion(p, scaled, scaled.weights);
    CHECK(rep2.s_conn == doctest::Approx(2.0));
    CHECK(rep2.conn_raw == doctest::Approx(12.0));
    CHECK(rep2.total == doctest::Approx(rep.total));
}

TEST_CASE("criterion terms with zero normalizer contribute nothing") {
    Instance inst = square_pair();
    inst.weights.c_conn = 8.0;
    inst.weights.c_prox = 5.0;
    inst.weights.c_inter = 3.0;
    Placement p = at({{0, 0}, {4, 2}}, {0, 0});
    auto rep = criterion(p, inst, inst.weights);
    CHECK(rep.s_conn == 0.0);
    CHECK(rep.s_prox == 0.0);
    CHECK(rep.s_inter == 0.0);
    CHECK(rep.total == doctest::Approx(10.0));
}

TEST_CASE("criterion proximity term, attracting and repelling") {
    Instance inst = square_pair();
    inst.proximities.push_back({0, 1, 2.0});
    inst.weights.c_prox = 1.0;
    // centroids (1,1) and (7,5): Manhattan distance 10
    Placement p = at({{0, 0}, {6, 4}}, {0, 0});
    auto rep = criterion(p, inst, inst.weights);
    CHECK(rep.prox_raw == doctest::Approx(20.0));
    CHECK(rep.s_prox == doctest::Approx(2.0));
    CHECK(rep.total == doctest::Approx(14.0 + 10.0));  // W=8, H=6

    // A negative cost rewards distance; the normalizer stays positive.
    Instance rep_inst = inst;
    rep_inst.proximities[0].cost = -2.0;
    auto rep2 = criterion(p, rep_inst, rep_inst.weights);
    CHECK(rep2.prox_raw == doctest::Approx(-20.0));
    CHECK(rep2.s_prox == doctest::Approx(2.0));
    CHECK(rep2.total == doctest::Approx(14.0 - 10.0));
}

TEST_CASE("criterion interface term picks the lower-median entry point") {
    Instance inst = square_pair();
    inst.interfaces.push_back({Side::Left, {0, 1}, 1.0});
    inst.weights.c_inter = 1.0;
    Placement p = at({{0, 0}, {4, 2}}, {0, 0});
    auto rep = criterion(p, inst, inst.weights);
    // entry at (0, 1): distances |0-1|+|1-1| = 1 and |0-5|+|1-3| = 7
    CHECK(rep.inter_raw == doctest::Approx(8.0));
    CHECK(rep.total == doctest::Approx(10.0 + 8.0));

    // Same members through the right side: entry (6, 1).
    Instance right = inst;
    right.interfaces[0].side = Side::Right;
    auto rep2 = criterion(p, right, right.weights);
    // |6-1|+|1-1| = 5 and |6-5|+|1-3| = 3
    CHECK(rep2.inter_raw == doctest::Approx(8.0));
}

TEST_CASE("criterion interface term on a horizontal side") {
    Instance inst = square_pair();
    inst.interfaces.push_back({Side::Top, {0}, 1.0});
    inst.weights.c_inter = 2.0;
    Placement p = at({{0, 0}, {4, 2}}, {0, 0});
    auto rep = criterion(p, inst, inst.weights);
    // H=4; entry (1, 4), member centroid (1,1): distance 3
    CHECK(rep.inter_raw == doctest::Approx(3.0));
    CHECK(rep.s_inter == doctest::Approx(1.0));
    CHECK(rep.total == doctest::Approx(10.0 + 2.0 * 3.0));
}

TEST_CASE("criterion interface median is the lower middle element") {
    Instance inst;
    inst.rects = {{"a", {{2, 2}}}, {"b", {{2, 2}}}, {"c", {{2, 2}}}};
    inst.interfaces.push_back({Side::Left, {0, 1, 2}, 1.0});
    inst.weights.c_inter = 1.0;
    // centroids y = 1, 3, 9 -> median 3; x distances 1, 5, 3
    Placement p = at({{0, 0}, {4, 2}, {2, 8}}, {0, 0, 0});
    auto rep = criterion(p, inst, inst.weights);
    // entry (0,3): (1+2) + (5+0) + (3+6) = 17
    CHECK(rep.inter_raw == doctest::Approx(17.0));
}

TEST_CASE("connectivity and proximity terms are translation invariant") {
    Instance inst = square_pair();
    inst.nets.push_back({{0, 1}, 1.5, {}});
    inst.proximities.push_back({0, 1, 1.0});
    inst.weights.c_conn = 2.0;
    inst.weights.c_prox = 2.0;
    Placement p = at({{0, 0}, {4, 2}}, {0, 0});
    auto base = criterion(p, inst, inst.weights);
    for (coord_t t : {3, 11}) {
        Placement q = p;
        for (auto& pt : q.pos) {
            pt.x += t;
            pt.y += t;
        }
        auto moved = criterion(q, inst, inst.weights);
        CHECK(moved.conn_raw == doctest::Approx(base.conn_raw));
        CHECK(moved.prox_raw == doctest::Approx(base.prox_raw));
        // the bounding box is origin-anchored, so the area term grows
        CHECK(moved.area_term == doctest::Approx(base.area_term + 2 * t));
    }
}

TEST_CASE("criterion grows when a rect moves outward under pure area weight") {
    Instance inst = square_pair();
    double prev = -1.0;
    for (coord_t x : {2, 5, 9, 14}) {
        auto rep = criterion(at({{0, 0}, {x, 0}}, {0, 0}), inst, inst.weights);
        CHECK(rep.total > prev);
        prev = rep.total;
    }
}
