#include "doctest.h"

#include <stdexcept>

#include "amsplace/model.hpp"

using namespace amsplace;

namespace {

Instance two_rects(coord_t a_default = 0) {
    Instance inst;
    inst.rects = {{"a", {{4, 2}}}, {"b", {{3, 3}}}};
    inst.distances.default_distance = a_default;
    return inst;
}

Placement place(std::vector<IntPoint> pos, std::vector<std::int32_t> variant,
                std::vector<coord_t> axes2 = {}) {
    Placement p;
    p.pos = std::move(pos);
    p.variant = std::move(variant);
    p.axes2 = std::move(axes2);
    return p;
}

}  // namespace

TEST_CASE("enumerate_variants row folding of 4 devices 3x2") {
    auto vs = enumerate_variants(3, 2, 4, 4, 0);
    REQUIRE(vs.size() == 4);
    // rows=4 -> (3,8), rows=2 -> (6,4), rows=3 -> ceil(4/3)*3=6 wide, 6 tall,
    // rows=1 -> (12,2); sorted by width
    CHECK(vs[0] == Variant{3, 8});
    CHECK(vs[1] == Variant{6, 4});
    CHECK(vs[2] == Variant{6, 6});
    CHECK(vs[3] == Variant{12, 2});
}

TEST_CASE("enumerate_variants pocket padding") {
    auto vs = enumerate_variants(2, 2, 2, 2, 1);
    REQUIRE(vs.size() == 2);
    CHECK(vs[0] == Variant{4, 6});
    CHECK(vs[1] == Variant{6, 4});
}

TEST_CASE("enumerate_variants single device") {
    auto vs = enumerate_variants(1, 1, 1, 4, 2);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0] == Variant{5, 5});
}

TEST_CASE("enumerate_variants never loses area") {
    for (coord_t w : {1, 3, 7})
        for (coord_t h : {2, 5})
            for (int count : {1, 3, 6, 10})
                for (auto v : enumerate_variants(w, h, count, count, 0))
                    CHECK(v.w * v.h >= w * h * count);
}

TEST_CASE("enumerate_variants rejects bad arguments") {
    CHECK_THROWS_AS(enumerate_variants(0, 2, 1, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_variants(2, -1, 1, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_variants(2, 2, 0, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_variants(2, 2, 1, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_variants(2, 2, 1, 1, -1), std::invalid_argument);
}

TEST_CASE("validate_instance accepts a well-formed instance") {
    Instance inst = two_rects();
    inst.nets.push_back({{0, 1}, 1.0, {}});
    CHECK(validate_instance(inst).empty());
}

TEST_CASE("validate_instance flags dangling net member") {
    Instance inst;
    inst.rects = {{"a", {{1, 1}}}, {"b", {{1, 1}}}, {"c", {{1, 1}}}};
    inst.nets.push_back({{0, 5}, 1.0, {}});
    auto errs = validate_instance(inst);
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].find("out of range") != std::string::npos);
}

TEST_CASE("validate_instance flags inverted aspect bounds") {
    Instance inst = two_rects();
    inst.aspect_lo = 0.8;
    inst.aspect_hi = 0.5;
    auto errs = validate_instance(inst);
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].find("aspect") != std::string::npos);
}

TEST_CASE("validate_instance covers the remaining violation classes") {
    Instance inst = two_rects();

    SUBCASE("duplicate name") {
        inst.rects[1].name = "a";
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("empty variant list") {
        inst.rects[0].variants.clear();
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("non-positive variant dims") {
        inst.rects[0].variants[0].w = 0;
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("self-distance override") {
        inst.distances.overrides[DistanceSpec::key(1, 1)] = 2;
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("net with one member") {
        inst.nets.push_back({{0}, 1.0, {}});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("duplicate net member") {
        inst.nets.push_back({{0, 0}, 1.0, {}});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("negative net cost") {
        inst.nets.push_back({{0, 1}, -1.0, {}});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("negative anchor") {
        inst.nets.push_back({{0, 1}, 1.0, {{-1, 0}}});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("rect in two groups") {
        inst.rects.push_back({"c", {{2, 2}}});
        inst.rects.push_back({"d", {{2, 2}}});
        inst.groups.push_back({Axis::Vertical, {{0, 1}}, {}});
        inst.groups.push_back({Axis::Vertical, {{0, 2}}, {}});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("degenerate pair") {
        inst.groups.push_back({Axis::Vertical, {{1, 1}}, {}});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("pair with mismatched variants") {
        inst.groups.push_back({Axis::Vertical, {{0, 1}}, {}});
        CHECK(!validate_instance(inst).empty());  // 4x2 vs 3x3 lists differ
    }
    SUBCASE("empty group") {
        inst.groups.push_back({Axis::Vertical, {}, {}});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("blockage with zero area") {
        inst.blockages.push_back({{0, 0, 0, 3}, {0}});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("blockage at negative position") {
        inst.blockages.push_back({{-1, 0, 2, 2}, {0}});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("restricted listed twice") {
        inst.blockages.push_back({{0, 0, 2, 2}, {0, 0}});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("proximity with zero cost") {
        inst.proximities.push_back({0, 1, 0.0});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("proximity self pair") {
        inst.proximities.push_back({1, 1, 2.0});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("interface without members") {
        inst.interfaces.push_back({Side::Left, {}, 1.0});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("interface cost must be positive") {
        inst.interfaces.push_back({Side::Left, {0}, 0.0});
        CHECK(!validate_instance(inst).empty());
    }
    SUBCASE("negative weight") {
        inst.weights.c_conn = -1.0;
        CHECK(!validate_instance(inst).empty());
    }
}

TEST_CASE("check_feasible boundary separation with positive margin") {
    Instance inst = two_rects(1);
    // x1 + w1 + a = 0 + 4 + 1 = 5 <= x2: holds with equality
    CHECK(check_feasible(place({{0, 0}, {5, 0}}, {0, 0}), inst).ok);
    auto r = check_feasible(place({{0, 0}, {4, 0}}, {0, 0}), inst);
    CHECK(!r.ok);
    CHECK(!r.detail.empty());
}

TEST_CASE("check_feasible negative distance permits bounded overlap") {
    Instance inst = two_rects();
    inst.distances.set(0, 1, -1);
    // 0 + 4 - 1 = 3 <= 3: pockets may overlap by 1 in x (within the allowed 1)
    CHECK(check_feasible(place({{0, 0}, {3, 0}}, {0, 0}), inst).ok);
    // x overlap of 3 exceeds the allowance and every other direction fails
    // too (heights 2 and 3 leave 2 - 1 = 1 > 0 and 3 - 1 = 2 > 0 in y)
    CHECK(!check_feasible(place({{0, 0}, {1, 0}}, {0, 0}), inst).ok);
}

TEST_CASE("check_feasible is symmetric in pair order") {
    Instance inst = two_rects(2);
    Instance swapped;
    swapped.rects = {inst.rects[1], inst.rects[0]};
    swapped.distances.default_distance = 2;
    for (coord_t x : {0, 3, 5, 6, 9}) {
        bool ab = check_feasible(place({{0, 0}, {x, 0}}, {0, 0}), inst).ok;
        bool ba = check_feasible(place({{x, 0}, {0, 0}}, {0, 0}), swapped).ok;
        CHECK(ab == ba);
    }
}

TEST_CASE("check_feasible translation invariance") {
    Instance inst = two_rects(1);
    inst.nets.push_back({{0, 1}, 1.0, {}});
    Placement p = place({{0, 0}, {5, 0}}, {0, 0});
    for (coord_t t : {1, 7, 100}) {
        Placement q = p;
        for (auto& pt : q.pos) {
            pt.x += t;
            pt.y += t;
        }
        CHECK(check_feasible(q, inst).ok);
    }
}

TEST_CASE("check_feasible rejects negative coordinates and bad variants") {
    Instance inst = two_rects();
    CHECK(!check_feasible(place({{-1, 0}, {9, 0}}, {0, 0}), inst).ok);
    CHECK(!check_feasible(place({{0, 0}, {9, 0}}, {0, 7}), inst).ok);
}

TEST_CASE("check_feasible enforces blockage avoidance for restricted rects") {
    Instance inst = two_rects();
    inst.blockages.push_back({{2, 0, 4, 4}, {1}});
    // rect b (restricted) inside the blockage: rejected
    CHECK(!check_feasible(place({{10, 0}, {3, 0}}, {0, 0}), inst).ok);
    // rect a may overlap the blockage freely
    CHECK(check_feasible(place({{2, 0}, {10, 0}}, {0, 0}), inst).ok);
}

TEST_CASE("check_feasible symmetry equations, vertical axis") {
    Instance inst;
    inst.rects = {{"p", {{2, 3}}}, {"q", {{2, 3}}}, {"s", {{4, 2}}}};
    inst.groups.push_back({Axis::Vertical, {{0, 1}}, {2}});

    // axis at x = 3 (axes2 = 6): pair at x = 0 and 4 (0 + 4 + 2 = 6), same y;
    // self at x = 1 (2*1 + 4 = 6)
    CHECK(check_feasible(place({{0, 0}, {4, 0}, {1, 3}}, {0, 0, 0}, {6}), inst).ok);
    // pair members at different y
    CHECK(!check_feasible(place({{0, 0}, {4, 1}, {1, 3}}, {0, 0, 0}, {6}), inst).ok);
    // off-axis self
    CHECK(!check_feasible(place({{0, 0}, {4, 0}, {2, 3}}, {0, 0, 0}, {6}), inst).ok);
    // mirror equation broken
    CHECK(!check_feasible(place({{0, 0}, {5, 0}, {1, 3}}, {0, 0, 0}, {6}), inst).ok);
}

TEST_CASE("check_feasible symmetry equations, horizontal axis") {
    Instance inst;
    inst.rects = {{"p", {{3, 2}}}, {"q", {{3, 2}}}};
    inst.groups.push_back({Axis::Horizontal, {{0, 1}}, {}});
    // axis at y = 2 (axes2 = 4): members at y = 0 and 2 share x
    CHECK(check_feasible(place({{0, 0}, {0, 2}}, {0, 0}, {4}), inst).ok);
    CHECK(!check_feasible(place({{0, 0}, {1, 2}}, {0, 0}, {4}), inst).ok);
}

TEST_CASE("check_feasible requires equal variants for pairs") {
    Instance inst;
    inst.rects = {{"p", {{2, 3}, {3, 2}}}, {"q", {{2, 3}, {3, 2}}}};
    inst.groups.push_back({Axis::Vertical, {{0, 1}}, {}});
    CHECK(check_feasible(place({{0, 0}, {4, 0}}, {0, 0}, {6}), inst).ok);
    CHECK(!check_feasible(place({{0, 0}, {4, 0}}, {0, 1}, {6}), inst).ok);
}

TEST_CASE("check_feasible throws on shape mismatch") {
    Instance inst = two_rects();
    CHECK_THROWS_AS(check_feasible(place({{0, 0}}, {0}), inst),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_feasible(place({{0, 0}, {9, 0}}, {0, 0}, {4}), inst),
                    std::invalid_argument);
}

TEST_CASE("bounding_box basics") {
    Instance inst = two_rects();
    CHECK(bounding_box(place({{0, 0}, {5, 0}}, {0, 0}), inst) == Box{0, 0, 8, 3});

    Instance empty;
    Placement nothing;
    CHECK(bounding_box(nothing, empty) == Box{0, 0, 0, 0});
}

TEST_CASE("bounding_box honours the placed mask") {
    Instance inst = two_rects();
    Placement p = place({{0, 0}, {5, 0}}, {0, 0});
    std::vector<std::uint8_t> only_a = {1, 0};
    CHECK(bounding_box(p, inst, &only_a) == Box{0, 0, 4, 2});
    std::vector<std::uint8_t> none = {0, 0};
    CHECK(bounding_box(p, inst, &none) == Box{0, 0, 0, 0});
}

TEST_CASE("group_of scans all groups") {
    Instance inst;
    inst.rects = {{"a", {{1, 1}}}, {"b", {{1, 1}}}, {"c", {{2, 2}}},
                  {"d", {{1, 1}}}};
    inst.groups.push_back({Axis::Vertical, {{0, 1}}, {}});
    inst.groups.push_back({Axis::Horizontal, {}, {2}});
    CHECK(inst.group_of(0) == 0);
    CHECK(inst.group_of(1) == 0);
    CHECK(inst.group_of(2) == 1);
    CHECK(inst.group_of(3) == -1);
}

TEST_CASE("distance spec override symmetry") {
    DistanceSpec d;
    d.default_distance = 1;
    d.set(3, 1, 5);
    CHECK(d.at(1, 3) == 5);
    CHECK(d.at(3, 1) == 5);
    CHECK(d.at(0, 1) == 1);
}
