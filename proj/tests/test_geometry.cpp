#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uavnet/errors.hpp"
#include "uavnet/geometry.hpp"

#include <cmath>
#include <random>

using namespace uavnet;

TEST_CASE("distances") {
    auto d = distances({0, 0, 0, "a"}, {0, 0, 40, "b"});
    CHECK(d.horizontal == 0.0);
    CHECK(d.vertical == 40.0);
    CHECK(d.total == 40.0);
    d = distances({0, 0, 0, "a"}, {3, 4, 0, "b"});
    CHECK(d.horizontal == 5.0);
    CHECK(d.vertical == 0.0);
    CHECK(d.total == 5.0);
    d = distances({0, 0, 0, "a"}, {30, 40, 40, "b"});
    CHECK(d.horizontal == doctest::Approx(50.0));
    CHECK(d.vertical == doctest::Approx(40.0));
    CHECK(d.total == doctest::Approx(64.03124237).epsilon(1e-10));
}

TEST_CASE("distances satisfy d^2 = dh^2 + dv^2") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-500, 500);
    for (int i = 0; i < 1000; ++i) {
        const NodePosition a{u(rng), u(rng), std::abs(u(rng)), "a"};
        const NodePosition b{u(rng), u(rng), std::abs(u(rng)), "b"};
        const auto d = distances(a, b);
        CHECK(d.total * d.total == doctest::Approx(d.horizontal * d.horizontal + d.vertical * d.vertical).epsilon(1e-12));
    }
}

TEST_CASE("p_los equal-height branch") {
    Environment env;
    env.zeta = 20;
    env.v = 3e-4;
    env.mu_env = 0.5;
    CHECK(p_los({5, 5, 20, "a"}, {5, 5, 20, "b"}, env) == 1.0);
    const double expect = std::pow(1.0 - std::exp(-0.5), 100.0 * std::sqrt(1.5e-4));
    CHECK(p_los({0, 0, 20, "a"}, {100, 0, 20, "b"}, env) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(0.319).epsilon(1e-3));
}

TEST_CASE("p_los unequal heights") {
    Environment env;
    // A purely vertical link has a zero exponent.
    CHECK(p_los({0, 0, 0, "a"}, {0, 0, 40, "b"}, env) == 1.0);
    // Both heights far above zeta: the two Q terms underflow to the same value.
    Environment low = env;
    low.zeta = 1.0;
    CHECK(p_los({0, 0, 100, "a"}, {60, 0, 200, "b"}, low) == 1.0);
}

TEST_CASE("p_los stays in [0, 1] over random geometries") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> xy(0, 1000);
    std::uniform_real_distribution<double> z(0, 300);
    std::uniform_real_distribution<double> zeta(1, 100);
    std::uniform_real_distribution<double> v(1e-6, 1e-2);
    for (int i = 0; i < 200000; ++i) {
        Environment env;
        env.zeta = zeta(rng);
        env.v = v(rng);
        env.mu_env = 0.5;
        const double p = p_los({xy(rng), xy(rng), z(rng), "a"}, {xy(rng), xy(rng), z(rng), "b"}, env);
        REQUIRE(p >= 0.0);
        REQUIRE(p <= 1.0);
    }
}

TEST_CASE("p_los with equal heights is non-increasing in distance") {
    Environment env;
    double prev = 1.0;
    for (double d = 0.0; d < 2000.0; d += 5.0) {
        const double p = p_los({0, 0, 10, "a"}, {d, 0, 10, "b"}, env);
        CHECK(p <= prev);
        prev = p;
    }
}

TEST_CASE("place_nodes") {
    Environment env;
    const auto one = place_nodes(1, env, 3, {{50, 50, 40, "uav"}});
    REQUIRE(one.size() == 1);
    CHECK(one[0].x == 50);
    CHECK(one[0].z == 40);
    CHECK(one[0].node_id == "uav");

    const auto a = place_nodes(10, env, 7);
    const auto b = place_nodes(10, env, 7);
    REQUIRE(a.size() == 10);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].x >= 0.0);
        CHECK(a[i].x <= env.area_side);
        CHECK(a[i].y >= 0.0);
        CHECK(a[i].y <= env.area_side);
        CHECK(a[i].z == 0.0);
    }
    const auto c = place_nodes(10, env, 8);
    CHECK(c[0].x != a[0].x);
}

TEST_CASE("validation") {
    Environment env;
    env.zeta = 0;
    CHECK_THROWS_AS(env.validate(), ValidationError);
    NodePosition p{0, 0, -1, "x"};
    CHECK_THROWS_AS(p.validate(), ValidationError);
}
