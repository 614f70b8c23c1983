#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "wander/geometry.hpp"

using namespace wander;

namespace {

TruncatedCarlemanSet synthetic(std::vector<RegionPrimitive> prims) {
    TruncatedCarlemanSet s;
    s.kind = SetKind::Example3;
    s.n = 1;
    s.t = 2.0;
    s.components.push_back(
        {{ComponentId::Family::Synthetic, 1}, std::move(prims), std::nullopt});
    return s;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("example-3 truncation lists the expected components") {
    TruncatedCarlemanSet set = build_set(SetKind::Example3, 1, 5.0);
    REQUIRE(set.components.size() == 5);
    CHECK(set.components[0].id.str() == "G0");
    CHECK(set.components[1].id.str() == "G1");
    CHECK(set.components[2].id.str() == "B1");
    CHECK(set.components[3].id.str() == "L1");
    CHECK(set.components[4].id.str() == "M1");
    CHECK(set.components[0].symbol == DomainSymbol::core());
    CHECK(set.components[1].symbol == DomainSymbol::g(1));
    CHECK(set.components[2].symbol == DomainSymbol::b(1));
    CHECK(set.components[3].symbol == DomainSymbol::core());

    TruncatedCarlemanSet two = build_set(SetKind::Example3, 2, 3.0);
    const auto* g2 = two.find({ComponentId::Family::Gk, 2});
    REQUIRE(g2);
    const auto* disk = std::get_if<Disk>(&g2->primitives[0]);
    REQUIRE(disk);
    CHECK(disk->center == complex{10.0, 0.0});
    const auto* b2 = two.find({ComponentId::Family::Bk, 2});
    REQUIRE(b2);
    CHECK(std::get<Disk>(b2->primitives[0]).center == complex{-10.0, 0.0});

    CHECK_THROWS_AS(build_set(SetKind::Example3, 0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(build_set(SetKind::Example3, 1, 1.0), std::invalid_argument);
}

TEST_CASE("example-3 components sit at unit distance") {
    CHECK(min_pairwise_distance(build_set(SetKind::Example3, 1, 2.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(min_pairwise_distance(build_set(SetKind::Example3, 2, 4.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("membership locates points boundary-inclusively") {
    TruncatedCarlemanSet set = build_set(SetKind::Example3, 1, 2.0);
    CHECK(membership(set, {2.0, 0.0}) == ComponentId{ComponentId::Family::G0, 0});
    CHECK(membership(set, {-6.0, 0.0}) == ComponentId{ComponentId::Family::Bk, 1});
    CHECK(membership(set, {4.0, 0.5}) == ComponentId{ComponentId::Family::Lk, 1});
    CHECK(membership(set, {3.0, 0.0}) == ComponentId{ComponentId::Family::G0, 0});
    CHECK(membership(set, {6.0, 1.5}) == ComponentId{ComponentId::Family::Gk, 1});
    CHECK(!membership(set, {0.0, 0.0}));
    CHECK(!membership(set, {6.0, 3.0}));  // above the truncation height
}

TEST_CASE("example-1 membership honors the strict inequalities") {
    TruncatedCarlemanSet set = build_set(SetKind::Example1, 3, 3.0);
    REQUIRE(set.components.size() == 5);  // arc, axis, rays m = 3,4,5
    CHECK(set.components[4].id == ComponentId{ComponentId::Family::Ray, 5});
    // base points of axis and rays lie on the arc, not in the open pieces
    CHECK(membership(set, {1.0, 0.0}) == ComponentId{ComponentId::Family::Arc, 0});
    CHECK(membership(set, std::polar(1.0, std::numbers::pi / 3)) ==
          ComponentId{ComponentId::Family::Arc, 0});
    CHECK(membership(set, {1.5, 0.0}) == ComponentId{ComponentId::Family::Axis, 0});
    CHECK(membership(set, std::polar(2.0, std::numbers::pi / 4)) ==
          ComponentId{ComponentId::Family::Ray, 4});
    // arc endpoints are excluded (Re z > 0 is strict)
    CHECK(!membership(set, {0.0, 1.0}));
    CHECK(!membership(set, {0.0, -1.0}));
    CHECK(!membership(set, {-1.0, 0.0}));
}

TEST_CASE("sampling is consistent with membership and covers components") {
    for (auto [kind, n, t] : {std::tuple{SetKind::Example3, std::int64_t{2}, 3.0},
                              std::tuple{SetKind::Example1, std::int64_t{3}, 3.0}}) {
        TruncatedCarlemanSet set = build_set(kind, n, t);
        for (double phase : {0.0, 0.5}) {
            auto samples = sample_points(set, 0.25, phase);
            for (const auto& s : samples) {
                auto hit = membership(set, s.z);
                REQUIRE(hit.has_value());
                REQUIRE(*hit == s.id);
            }
        }
    }

    auto coarse = sample_points(build_set(SetKind::Example3, 1, 2.0), 0.5);
    std::set<std::string> ids;
    for (const auto& s : coarse) ids.insert(s.id.str());
    CHECK(ids == std::set<std::string>{"G0", "G1", "B1", "L1", "M1"});
}

TEST_CASE("segment sampling follows the arithmetic-progression count") {
    auto set = synthetic({VerticalSegment{0.0, -2.0, 2.0}});
    CHECK(sample_points(set, 0.1).size() == 41);

    // refinement keeps the per-component minimum for tiny pieces
    auto tiny = synthetic({VerticalSegment{0.0, 0.0, 0.01}});
    CHECK(sample_points(tiny, 0.1).size() >= 10);
}

TEST_CASE("phase-shifted samples avoid the training lattice") {
    TruncatedCarlemanSet set = build_set(SetKind::Example3, 1, 2.0);
    auto train = sample_points(set, 0.25, 0.0);
    auto fresh = sample_points(set, 0.125, 0.5);
    for (const auto& f : fresh)
        for (const auto& tr : train)
            CHECK(std::abs(f.z - tr.z) > 1e-9);
}

TEST_CASE("truncations grow monotonically") {
    TruncatedCarlemanSet small = build_set(SetKind::Example3, 1, 2.0);
    TruncatedCarlemanSet large = build_set(SetKind::Example3, 2, 2.0);
    for (const auto& c : small.components) {
        const auto* big = large.find(c.id);
        REQUIRE(big);
        CHECK(big->primitives.size() == c.primitives.size());
        // same truncation height: identical geometry on shared components
        for (std::size_t i = 0; i < c.primitives.size(); ++i)
            CHECK(primitive_distance(big->primitives[i], complex{0.123, 0.456}) ==
                  primitive_distance(c.primitives[i], complex{0.123, 0.456}));
    }
    TruncatedCarlemanSet taller = build_set(SetKind::Example3, 2, 4.0);
    for (const auto& c : small.components) CHECK(taller.find(c.id) != nullptr);
}

TEST_CASE("set bounds cover all primitives") {
    BoundingBox b = set_bounds(build_set(SetKind::Example3, 1, 2.0));
    CHECK(b.x0 == doctest::Approx(-7.0));
    CHECK(b.x1 == doctest::Approx(7.0));
    CHECK(b.y0 == doctest::Approx(-2.0));
    CHECK(b.y1 == doctest::Approx(2.0));
}

TEST_CASE("complement connectivity holds for the example sets") {
    TruncatedCarlemanSet ex3 = build_set(SetKind::Example3, 2, 4.0);
    BoundingBox b3{-12.0, 12.0, -5.0, 5.0};
    CHECK(complement_connected(ex3, b3, 20.0));

    TruncatedCarlemanSet ex1 = build_set(SetKind::Example1, 3, 3.0);
    BoundingBox b1{-3.0, 4.0, -2.0, 3.0};
    CHECK(complement_connected(ex1, b1, 20.0));

    auto ring = synthetic({Annulus{{0.0, 0.0}, 1.0, 1.5}});
    BoundingBox br{-3.0, 3.0, -3.0, 3.0};
    CHECK(!complement_connected(ring, br, 20.0));
}

TEST_CASE("connectivity verdicts are stable under refinement") {
    TruncatedCarlemanSet ex3 = build_set(SetKind::Example3, 1, 2.0);
    BoundingBox b{-8.0, 8.0, -3.0, 3.0};
    CHECK(complement_connected(ex3, b, 5.0));
    CHECK(complement_connected(ex3, b, 10.0));
    CHECK(complement_connected(ex3, b, 20.0));

    auto ring = synthetic({Annulus{{0.0, 0.0}, 1.0, 1.5}});
    BoundingBox br{-3.0, 3.0, -3.0, 3.0};
    CHECK(!complement_connected(ring, br, 20.0));
    CHECK(!complement_connected(ring, br, 40.0));
}

TEST_CASE("connectivity guards reject unusable configurations") {
    TruncatedCarlemanSet ex3 = build_set(SetKind::Example3, 1, 2.0);
    BoundingBox inside{-6.0, 6.0, -3.0, 3.0};  // does not contain the B1 disk
    CHECK_THROWS_AS(complement_connected(ex3, inside, 20.0), std::invalid_argument);
    BoundingBox b{-8.0, 8.0, -3.0, 3.0};
    CHECK_THROWS_AS(complement_connected(ex3, b, 1.0), std::invalid_argument);
    auto speck = synthetic({Disk{{0.0, 0.0}, 0.05}});
    BoundingBox bs{-1.0, 1.0, -1.0, 1.0};
    CHECK_THROWS_AS(complement_connected(speck, bs, 5.0), std::invalid_argument);
}

TEST_CASE("raster drawing is deterministic and covers the set") {
    TruncatedCarlemanSet set = build_set(SetKind::Example3, 1, 2.0);
    BoundingBox b{-8.0, 8.0, -3.0, 3.0};
    Raster r = rasterize(set, b, 10.0);
    CHECK(r.width == 160);
    CHECK(r.height == 60);
    // pixel at z = 2 carries the G0 label (component 0)
    auto px = static_cast<std::int64_t>((2.0 - b.x0) * 10.0);
    auto py = static_cast<std::int64_t>((b.y1 - 0.0) * 10.0);
    CHECK(r.at(px, py) == 0);

    std::string p1 = "raster_a.ppm", p2 = "raster_b.ppm";
    write_raster_ppm(r, p1);
    write_raster_ppm(rasterize(set, b, 10.0), p2);
    std::string bytes1 = slurp(p1), bytes2 = slurp(p2);
    CHECK(bytes1 == bytes2);
    CHECK(bytes1.substr(0, 2) == "P6");
    CHECK(bytes1.size() > static_cast<std::size_t>(160 * 60 * 3));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("set description serializes") {
    ordered_json j = set_to_json(build_set(SetKind::Example3, 1, 2.0));
    CHECK(j["kind"] == "Example3");
    CHECK(j["N"] == 1);
    CHECK(j["T"] == 2.0);
    CHECK(j["components"].size() == 5);
    CHECK(j["components"][0]["id"] == "G0");
    CHECK(j["components"][0]["symbol"] == "Core");
    CHECK(j["components"][0]["primitives"][0]["type"] == "disk");
    CHECK(j["components"][1]["primitives"].size() == 3);

    ordered_json e1 = set_to_json(build_set(SetKind::Example1, 1, 2.0));
    CHECK(e1["kind"] == "Example1");
    CHECK(e1["components"][0]["symbol"].is_null());
    CHECK(e1["components"][0]["primitives"][0]["type"] == "arc");
}
