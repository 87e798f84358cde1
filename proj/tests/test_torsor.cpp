#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "torsor.hpp"

using namespace mnd5;

namespace {

u64 prefix(const std::vector<u64>& hist, u64 B) {
    u64 s = 0;
    for (u64 h = 0; h <= B && h < hist.size(); ++h) s += hist[h];
    return s;
}

}  // namespace

TEST_CASE("torsor membership") {
    TorsorPoint ok{{1, 1, 1, 1}, {1, -1, 1, 1, -2}};
    CHECK(is_torsor_point(ok));

    TorsorPoint bad_eq{{1, 1, 1, 1}, {1, -1, 1, 1, 2}};
    CHECK(!is_torsor_point(bad_eq));

    TorsorPoint zero_y4{{1, 1, 1, 1}, {1, 1, 1, 1, 0}};
    CHECK(!is_torsor_point(zero_y4));

    // equation holds but v0 v2 v3 = 4 is not squarefree
    TorsorPoint sq{{2, 1, 2, 1}, {1, 1, 1, 2, -1}};
    CHECK(!is_torsor_point(sq));
}

TEST_CASE("lift and height") {
    TorsorPoint t{{1, 1, 1, 1}, {1, 2, 1, 3, -1}};
    REQUIRE(is_torsor_point(t));
    CHECK(lift(t) == Coords{1, 4, 2, 3, -1});
    CHECK(psi_height(t) == 4);

    TorsorPoint t2{{1, 1, 1, 1}, {1, -1, 1, 1, -2}};
    CHECK(lift(t2) == Coords{1, 1, -1, 1, -2});
    CHECK(psi_height(t2) == 2);
}

TEST_CASE("region bounds") {
    auto r = region_bounds(64, {1, 1, 1, 1}, 1, 1);
    CHECK(r.V1 == doctest::Approx(2.0));
    CHECK(r.Y1 == doctest::Approx(4.0));
    CHECK(r.Y2 == doctest::Approx(8.0));
    CHECK(r.Y3 == doctest::Approx(8.0));
    auto r2 = region_bounds(1'000'000, {1, 2, 1, 1}, 1, 1);
    CHECK(r2.Y2 == doctest::Approx(125.0));
}

TEST_CASE("enumerated points are torsor points inside the region") {
    const u64 B = 500;
    auto pts = torsor_points(B);
    CHECK(!pts.empty());
    size_t stride = std::max<size_t>(1, pts.size() / 100);
    for (size_t i = 0; i < pts.size(); i += stride) {
        const auto& tp = pts[i];
        REQUIRE(is_torsor_point(tp));
        REQUIRE(psi_height(tp) <= B);
        Coords x = lift(tp);
        CHECK(is_on_surface(x));
        CHECK(is_primitive(x));
        CHECK(height(x) == psi_height(tp));
        auto rb = region_bounds(B, tp.v, u64(tp.y[0]), u64(tp.y[2]));
        CHECK(double(tp.v[1]) <= rb.V1 * (1 + 1e-9));
        CHECK(double(tp.y[2]) <= rb.Y2 * (1 + 1e-9));
        CHECK(double(tp.y[1]) > -rb.Y1 * (1 + 1e-9));
        CHECK(double(tp.y[1]) <= rb.V1 * rb.Y1 / double(tp.v[1]) * (1 + 1e-9));
        double u = double(tp.y[1]) / rb.Y1;
        double vv = double(tp.v[1]) / rb.V1;
        double fplus = std::min(std::sqrt(u * u * u + 1.0), 1.0 / (vv * vv * vv));
        CHECK(double(tp.y[3]) <= rb.Y3 * fplus * (1 + 1e-9));
    }
}

TEST_CASE("torsor lift is a bijection onto direct points") {
    const u64 B = 200;
    auto tpts = torsor_points(B);
    std::vector<Coords> lifted;
    lifted.reserve(tpts.size());
    for (const auto& tp : tpts) lifted.push_back(lift(tp));
    std::set<Coords> dedup(lifted.begin(), lifted.end());
    REQUIRE(dedup.size() == lifted.size());  // no collisions

    auto dpts = direct_points(B);
    std::sort(lifted.begin(), lifted.end());
    std::sort(dpts.begin(), dpts.end());
    REQUIRE(lifted == dpts);
}

TEST_CASE("reduction inverts the lift") {
    for (const auto& x : direct_points(200)) {
        auto t = reduce_to_torsor(x);
        REQUIRE(t.has_value());
        REQUIRE(is_torsor_point(*t));
        REQUIRE(lift(*t) == x);
    }
    CHECK(!reduce_to_torsor({1, 0, 0, 0, 0}).has_value());
    CHECK(!reduce_to_torsor({1, 1, 1, 1, 1}).has_value());
}

TEST_CASE("torsor count equals direct count") {
    CHECK(count_torsor(1).count == 0);
    for (u64 B : {10ull, 50ull, 200ull, 600ull})
        REQUIRE(count_torsor(B).count == count_direct(B).count);
    // heights agree bucket by bucket
    auto th = torsor_histogram(300);
    auto dh = direct_histogram(300);
    REQUIRE(th == dh);
    for (u64 B : {10ull, 60ull}) CHECK(prefix(th, B) == count_direct(B).count);
}

TEST_CASE("count_U through the torsor") {
    for (u64 B : {10ull, 25ull, 60ull})
        CHECK(count_U(B, CountMethod::torsor).count == count_U(B, CountMethod::naive).count);
}

TEST_CASE("torsor threading determinism") {
    CHECK(count_torsor(800, 1).count == count_torsor(800, 4).count);
    CHECK(torsor_histogram(400, 1) == torsor_histogram(400, 4));
}
