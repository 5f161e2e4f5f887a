#include "doctest.h"

#include <random>
#include <stdexcept>
#include <vector>

#include "amsplace/decoder.hpp"

using namespace amsplace;

namespace {

// genes = [positions | variants | directions | (p_mod)]
Chromosome genome(std::vector<double> pos, std::vector<double> var,
                  std::vector<double> dir, double p_mod = -1.0) {
    Chromosome c;
    c.insert(c.end(), pos.begin(), pos.end());
    c.insert(c.end(), var.begin(), var.end());
    c.insert(c.end(), dir.begin(), dir.end());
    if (p_mod >= 0.0) c.push_back(p_mod);
    return c;
}

}  // namespace

TEST_CASE("variant_from_gene floor rule with clamping") {
    CHECK(variant_from_gene(0.0, 2) == 0);
    CHECK(variant_from_gene(0.49, 2) == 0);
    CHECK(variant_from_gene(0.5, 2) == 1);
    CHECK(variant_from_gene(1.0, 2) == 1);
    CHECK(variant_from_gene(0.34, 3) == 1);
    CHECK(variant_from_gene(0.99, 3) == 2);
    CHECK(variant_from_gene(1.0, 1) == 0);
}

TEST_CASE("chromosome_length with and without the modulation gene") {
    Instance inst;
    inst.rects = {{"a", {{1, 1}}}, {"b", {{1, 1}}}};
    CHECK(chromosome_length(inst, false) == 6);
    CHECK(chromosome_length(inst, true) == 7);
}

TEST_CASE("decode validates gene vectors") {
    Instance inst;
    inst.rects = {{"a", {{2, 2}}}};
    CHECK_THROWS_AS(decode({0.1, 0.2}, inst, inst.weights), std::invalid_argument);
    CHECK_THROWS_AS(decode({0.1, 0.2, 0.3, 0.4, 0.5}, inst, inst.weights),
                    std::invalid_argument);
    CHECK_THROWS_AS(decode({0.1, 1.5, 0.3}, inst, inst.weights),
                    std::invalid_argument);
    CHECK_THROWS_AS(decode({-0.1, 0.5, 0.3}, inst, inst.weights),
                    std::invalid_argument);
}

TEST_CASE("slide abuts a single obstacle, horizontal first") {
    std::vector<SlideObstacle> obs = {{{0, 0, 3, 3}, 0}};
    auto sc = slide(2, 2, {5, 0}, true, obs);
    REQUIRE(sc.count == 1);
    CHECK(sc.pos[0] == IntPoint{3, 0});
}

TEST_CASE("slide without obstacles lands on the clamped start") {
    auto sc = slide(2, 2, {-3, -1}, true, {});
    REQUIRE(sc.count == 1);
    CHECK(sc.pos[0] == IntPoint{0, 0});

    auto sc2 = slide(2, 2, {4, 7}, false, {});
    REQUIRE(sc2.count == 2);
    CHECK(sc2.pos[0] == IntPoint{4, 0});  // intermediate after the vertical phase
    CHECK(sc2.pos[1] == IntPoint{0, 0});  // final, after sliding to the wall
}

TEST_CASE("slide reports infeasibility when pinched") {
    std::vector<SlideObstacle> obs = {{{0, 0, 3, 3}, 0}, {{4, 0, 3, 3}, 0}};
    auto sc = slide(3, 2, {3, 0}, true, obs);
    CHECK(sc.count == 0);
}

TEST_CASE("slide returns the intermediate and the final position") {
    std::vector<SlideObstacle> obs = {{{0, 0, 3, 3}, 0}};
    auto sc = slide(2, 2, {5, 5}, true, obs);
    REQUIRE(sc.count == 2);
    CHECK(sc.pos[0] == IntPoint{0, 5});  // after the horizontal phase
    CHECK(sc.pos[1] == IntPoint{0, 3});  // settled on the obstacle
}

TEST_CASE("slide honours positive margins") {
    std::vector<SlideObstacle> obs = {{{0, 0, 3, 3}, 1}};
    auto sc = slide(2, 2, {6, 0}, true, obs);
    REQUIRE(sc.count == 1);
    CHECK(sc.pos[0] == IntPoint{4, 0});
}

TEST_CASE("slide lets negative margins overlap pockets") {
    std::vector<SlideObstacle> obs = {{{0, 0, 4, 4}, -1}};
    auto sc = slide(2, 2, {5, 0}, true, obs);
    REQUIRE(sc.count == 1);
    CHECK(sc.pos[0] == IntPoint{3, 0});  // one unit inside the obstacle
}

TEST_CASE("slide respects the lower bounds") {
    auto sc = slide(2, 2, {0, 0}, true, {}, 3, 1);
    REQUIRE(sc.count == 1);
    CHECK(sc.pos[0] == IntPoint{3, 1});
}

TEST_CASE("priority modulation scales unplaced neighbours once") {
    Instance inst;
    inst.rects = {{"a", {{1, 1}}}, {"b", {{1, 1}}}, {"c", {{1, 1}}}};
    inst.nets.push_back({{0, 1}, 1.0, {}});

    std::vector<double> keys = {0.5, 0.8, 0.6};
    std::vector<std::uint8_t> placed = {1, 0, 0};
    apply_priority_modulation(keys, 0, inst, 0.5, placed);
    CHECK(keys[1] == doctest::Approx(0.4));
    CHECK(keys[2] == doctest::Approx(0.6));
}

TEST_CASE("priority modulation with factor one is the identity") {
    Instance inst;
    inst.rects = {{"a", {{1, 1}}}, {"b", {{1, 1}}}};
    inst.nets.push_back({{0, 1}, 1.0, {}});
    std::vector<double> keys = {0.5, 0.8};
    std::vector<std::uint8_t> placed = {1, 0};
    apply_priority_modulation(keys, 0, inst, 1.0, placed);
    CHECK(keys[1] == doctest::Approx(0.8));
}

TEST_CASE("priority modulation touches every connected rect, once each") {
    Instance inst;
    inst.rects = {{"a", {{1, 1}}}, {"b", {{1, 1}}}, {"c", {{1, 1}}}};
    inst.nets.push_back({{0, 1}, 1.0, {}});
    inst.nets.push_back({{0, 2}, 1.0, {}});
    inst.nets.push_back({{0, 1, 2}, 1.0, {}});  // shared: still one multiply

    std::vector<double> keys = {0.5, 0.8, 0.6};
    std::vector<std::uint8_t> placed = {1, 0, 0};
    apply_priority_modulation(keys, 0, inst, 0.5, placed);
    CHECK(keys[1] == doctest::Approx(0.4));
    CHECK(keys[2] == doctest::Approx(0.3));
}

TEST_CASE("priority modulation skips already placed rects") {
    Instance inst;
    inst.rects = {{"a", {{1, 1}}}, {"b", {{1, 1}}}};
    inst.nets.push_back({{0, 1}, 1.0, {}});
    std::vector<double> keys = {0.5, 0.8};
    std::vector<std::uint8_t> placed = {1, 1};
    apply_priority_modulation(keys, 0, inst, 0.5, placed);
    CHECK(keys[1] == doctest::Approx(0.8));
}

TEST_CASE("decode places a single rect at the origin with the chosen variant") {
    Instance inst;
    inst.rects = {{"a", {{4, 2}, {2, 4}}}};
    auto res = decode(genome({0.3}, {0.0}, {0.0}), inst, inst.weights);
    CHECK(res.placement.pos[0] == IntPoint{0, 0});
    CHECK(res.placement.variant[0] == 0);
    CHECK(res.report.total == doctest::Approx(6.0));

    auto rot = decode(genome({0.3}, {0.9}, {0.0}), inst, inst.weights);
    CHECK(rot.placement.variant[0] == 1);
}

TEST_CASE("decode packs two squares side by side, lower y wins ties") {
    Instance inst;
    inst.rects = {{"a", {{2, 2}}}, {"b", {{2, 2}}}};
    auto res = decode(genome({0.1, 0.1}, {0.1, 0.1}, {0.0, 0.0}), inst,
                      inst.weights);
    CHECK(res.placement.pos[0] == IntPoint{0, 0});
    CHECK(res.placement.pos[1] == IntPoint{2, 0});
    CHECK(res.report.total == doctest::Approx(6.0));
    CHECK(check_feasible(res.placement, inst).ok);
}

TEST_CASE("decode shifts candidate points by the pairwise distance") {
    Instance inst;
    inst.rects = {{"a", {{4, 2}}}, {"b", {{3, 3}}}};
    inst.distances.default_distance = 1;
    auto res = decode(genome({0.1, 0.2}, {0.0, 0.0}, {0.0, 0.0}), inst,
                      inst.weights);
    CHECK(res.placement.pos[0] == IntPoint{0, 0});
    // stacking at (0,3) gives W+H = 10, beating (5,0) at 11
    CHECK(res.placement.pos[1] == IntPoint{0, 3});
    CHECK(res.report.total == doctest::Approx(10.0));
    CHECK(check_feasible(res.placement, inst).ok);
}

TEST_CASE("decode modulation gene reorders connected rects") {
    Instance inst;
    inst.rects = {{"a", {{2, 2}}}, {"b", {{4, 4}}}, {"c", {{2, 2}}}};
    inst.nets.push_back({{0, 2}, 1.0, {}});

    // order a, b, c: b fills the corner next to a, c stacks on top
    auto plain = decode(genome({0.1, 0.5, 0.9}, {0, 0, 0}, {0, 0, 0}), inst,
                        inst.weights);
    CHECK(plain.placement.pos[1] == IntPoint{2, 0});
    CHECK(plain.placement.pos[2] == IntPoint{0, 2});

    // p_mod = 0.1 promotes c right after its neighbour a: order a, c, b, so
    // c takes the corner slot and b stacks on top of the pair (W+H = 10
    // beats 12 at the right flank)
    auto mod = decode(genome({0.1, 0.5, 0.9}, {0, 0, 0}, {0, 0, 0}, 0.1), inst,
                      inst.weights);
    CHECK(mod.placement.pos[2] == IntPoint{2, 0});
    CHECK(mod.placement.pos[1] == IntPoint{0, 2});
    CHECK(check_feasible(plain.placement, inst).ok);
    CHECK(check_feasible(mod.placement, inst).ok);
}

TEST_CASE("place_symmetry_group mirrors one pair around the axis") {
    Instance inst;
    inst.rects = {{"p", {{2, 2}}}, {"q", {{2, 2}}}};
    inst.groups.push_back({Axis::Vertical, {{0, 1}}, {}});

    auto unit = place_symmetry_group(0, genome({0.1, 0.2}, {0, 0}, {0, 0}), inst,
                                     inst.weights);
    CHECK(unit.w == 4);
    CHECK(unit.h == 2);
    REQUIRE(unit.members == std::vector<int>{0, 1});
    CHECK(unit.offsets[0] == IntPoint{2, 0});
    CHECK(unit.offsets[1] == IntPoint{0, 0});
    CHECK(unit.axis2_offset == 4);
    // mirror equation inside the unit: x_i + x_j + w = axis2
    CHECK(unit.offsets[0].x + unit.offsets[1].x + 2 == unit.axis2_offset);
}

TEST_CASE("place_symmetry_group centres a self-symmetric member") {
    Instance inst;
    inst.rects = {{"s", {{3, 2}}}};
    inst.groups.push_back({Axis::Vertical, {}, {0}});
    auto unit = place_symmetry_group(0, genome({0.5}, {0.0}, {0.0}), inst,
                                     inst.weights);
    CHECK(unit.w == 3);
    CHECK(unit.h == 2);
    CHECK(unit.offsets[0] == IntPoint{0, 0});
    CHECK(unit.axis2_offset == 3);  // 2*0 + 3
}

TEST_CASE("place_symmetry_group pair plus self keeps both equations") {
    Instance inst;
    inst.rects = {{"p", {{2, 2}}}, {"q", {{2, 2}}}, {"s", {{4, 1}}}};
    inst.groups.push_back({Axis::Vertical, {{0, 1}}, {2}});
    auto unit = place_symmetry_group(
        0, genome({0.1, 0.3, 0.2}, {0, 0, 0}, {0, 0, 0}), inst, inst.weights);

    REQUIRE(unit.members == std::vector<int>{0, 1, 2});
    coord_t w_pair = 2, w_self = 4;
    CHECK(unit.offsets[0].x + unit.offsets[1].x + w_pair == unit.axis2_offset);
    CHECK(unit.offsets[0].y == unit.offsets[1].y);
    CHECK(2 * unit.offsets[2].x + w_self == unit.axis2_offset);
    CHECK(unit.w == 4);
    CHECK(unit.h == 3);  // self slides on top of the pair
}

TEST_CASE("place_symmetry_group horizontal axis transposes the layout") {
    Instance inst;
    inst.rects = {{"p", {{2, 2}}}, {"q", {{2, 2}}}};
    inst.groups.push_back({Axis::Horizontal, {{0, 1}}, {}});
    auto unit = place_symmetry_group(0, genome({0.1, 0.2}, {0, 0}, {0, 0}), inst,
                                     inst.weights);
    CHECK(unit.w == 2);
    CHECK(unit.h == 4);
    CHECK(unit.offsets[0].y + unit.offsets[1].y + 2 == unit.axis2_offset);
    CHECK(unit.offsets[0].x == unit.offsets[1].x);
}

TEST_CASE("place_symmetry_group resolves self width parity via variants") {
    Instance inst;
    inst.rects = {{"m1", {{3, 2}}}, {"m2", {{4, 1}, {5, 1}}}};
    inst.groups.push_back({Axis::Vertical, {}, {0, 1}});
    auto unit = place_symmetry_group(0, genome({0.1, 0.2}, {0, 0}, {0, 0}), inst,
                                     inst.weights);
    // m1 pins an odd axis parity; m2 must fall back to its 5-wide variant
    REQUIRE(unit.members == std::vector<int>{0, 1});
    CHECK(unit.variants[1] == 1);
    CHECK(2 * unit.offsets[0].x + 3 == unit.axis2_offset);
    CHECK(2 * unit.offsets[1].x + 5 == unit.axis2_offset);
}

TEST_CASE("place_symmetry_group reports irreconcilable parity") {
    Instance inst;
    inst.rects = {{"m1", {{3, 2}}}, {"m2", {{4, 1}}}};
    inst.groups.push_back({Axis::Vertical, {}, {0, 1}});
    CHECK_THROWS_AS(place_symmetry_group(0, genome({0.1, 0.2}, {0, 0}, {0, 0}),
                                         inst, inst.weights),
                    std::runtime_error);
}

TEST_CASE("decode inserts a symmetry group as one rigid unit") {
    Instance inst;
    inst.rects = {{"p", {{2, 2}}}, {"q", {{2, 2}}}, {"free", {{3, 3}}}};
    inst.groups.push_back({Axis::Vertical, {{0, 1}}, {}});

    auto res = decode(genome({0.9, 0.9, 0.1}, {0, 0, 0}, {0, 0, 0}), inst,
                      inst.weights);
    CHECK(res.placement.pos[2] == IntPoint{0, 0});  // lowest key goes first
    CHECK(res.placement.pos[0] == IntPoint{2, 3});
    CHECK(res.placement.pos[1] == IntPoint{0, 3});
    CHECK(res.placement.axes2[0] == 4);
    CHECK(res.report.total == doctest::Approx(9.0));
    CHECK(check_feasible(res.placement, inst).ok);
}

TEST_CASE("decode plan partitions rects into items, groups first") {
    Instance inst;
    inst.rects = {{"a", {{2, 2}}}, {"b", {{2, 2}}}, {"c", {{2, 2}}},
                  {"d", {{2, 2}}}};
    inst.groups.push_back({Axis::Vertical, {{1, 3}}, {}});
    inst.distances.set(0, 1, 5);
    inst.distances.set(0, 3, -2);
    inst.blockages.push_back({{0, 0, 2, 2}, {3}});
    inst.blockages.push_back({{4, 0, 2, 2}, {0}});
    inst.nets.push_back({{0, 1, 2}, 1.0, {}});

    DecodePlan plan(inst);
    REQUIRE(plan.items.size() == 3);
    CHECK(plan.items[0].group == 0);
    CHECK(plan.items[0].members == std::vector<int>{1, 3});
    CHECK(plan.items[0].key_rect == 1);
    CHECK(plan.items[1].rect == 0);
    CHECK(plan.items[2].rect == 2);
    CHECK(plan.item_of_rect == std::vector<int>{1, 0, 2, 0});

    // margin between the group and rect 0: max(a(1,0), a(3,0)) = max(5,-2)
    CHECK(plan.item_margin(0, 1) == 5);
    CHECK(plan.item_margin(1, 0) == 5);
    CHECK(plan.item_margin(1, 2) == 0);

    CHECK(plan.blocked[0 * 2 + 0] == 1);  // group contains rect 3
    CHECK(plan.blocked[0 * 2 + 1] == 0);
    CHECK(plan.blocked[1 * 2 + 1] == 1);  // rect 0's item avoids blockage 1

    CHECK(plan.net_neighbors[0] == std::vector<int>{1, 2});
    CHECK(plan.rect_nets[3].empty());
}

TEST_CASE("decode_with_plan matches decode") {
    Instance inst;
    inst.rects = {{"a", {{2, 3}, {3, 2}}}, {"b", {{4, 2}}}, {"c", {{2, 2}}}};
    inst.nets.push_back({{0, 1}, 2.0, {}});
    inst.weights.c_conn = 4.0;
    DecodePlan plan(inst);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Chromosome c(chromosome_length(inst, false));
        for (double& g : c) g = u(rng);
        auto a = decode(c, inst, inst.weights);
        auto b = decode_with_plan(c, plan, inst.weights);
        CHECK(a.placement == b.placement);
        CHECK(a.report == b.report);
    }
}

TEST_CASE("decode is deterministic and always feasible on a mixed instance") {
    Instance inst;
    inst.rects = {{"a", {{4, 2}, {2, 4}}}, {"b", {{3, 3}}},
                  {"c", {{2, 5}, {5, 2}}}, {"d", {{2, 2}}},
                  {"e", {{3, 2}}},         {"f", {{3, 2}}}};
    inst.distances.default_distance = 1;
    inst.distances.set(1, 2, -1);
    inst.nets.push_back({{0, 3}, 1.0, {}});
    inst.nets.push_back({{1, 2, 3}, 2.0, {{0, 0}}});
    inst.groups.push_back({Axis::Vertical, {{4, 5}}, {}});
    inst.blockages.push_back({{0, 0, 3, 2}, {0, 3}});
    inst.weights.c_conn = 8.0;
    REQUIRE(validate_instance(inst).empty());

    DecodePlan plan(inst);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DecodeStats stats;
    for (int trial = 0; trial < 100; ++trial) {
        Chromosome c(chromosome_length(inst, true));
        for (double& g : c) g = u(rng);
        auto r1 = decode_with_plan(c, plan, inst.weights, &stats);
        auto r2 = decode_with_plan(c, plan, inst.weights);
        CHECK(r1.placement == r2.placement);
        auto feas = check_feasible(r1.placement, inst);
        CHECK(feas.ok);
        if (!feas.ok) {
            MESSAGE("trial ", trial, ": ", feas.detail);
            break;
        }
    }
    CHECK(stats.candidate_evals > 0);
    CHECK(stats.slide_calls > 0);
    CHECK(stats.points_created > 0);
}
