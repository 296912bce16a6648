#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sirtax/grid.hpp"
#include "sirtax/kinetics.hpp"

using namespace sirtax;

namespace {

ModelParams table_params() {
    ModelParams p;
    p.K = 15.0;
    p.lambda_S = 0.5;
    p.lambda_I = 0.5;
    p.mu_S = 0.01;
    p.mu_I = 0.05;
    return p;
}

} // namespace

TEST_CASE("chi vanishes at the packed state and equals K at zero") {
    CHECK(chi(1.0, 15.0) == 0.0);
    CHECK(chi(0.0, 15.0) == 15.0);
    CHECK(chi(0.5, 15.0) == 7.5);
    CHECK(chi(0.5, 15.0, ChiLaw::constant_chi) == 15.0);
}

TEST_CASE("chi is affine decreasing in S") {
    const double K = 15.0;
    double prev = chi(0.0, K);
    for (int i = 1; i <= 100; ++i) {
        const double cur = chi(i / 100.0, K);
        REQUIRE(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("reaction_f follows the kinetics with the zero-extension") {
    const ModelParams p = table_params();
    CHECK(reaction_f(0.0, 0.7, p) == 0.0);
    CHECK(reaction_f(1.0, 0.0, p) == 0.0);
    // -0.5 * 0.25/1 + 0.01 * 0.25
    CHECK(reaction_f(0.5, 0.5, p) == Catch::Approx(-0.1225).margin(1e-15));
}

TEST_CASE("reaction_g follows the kinetics with the zero-extension") {
    const ModelParams p = table_params();
    CHECK(reaction_g(0.0, 1.0, p) == Catch::Approx(-0.05).margin(1e-15));
    CHECK(reaction_g(1.0, 0.0, p) == 0.0);
    CHECK(reaction_g(0.5, 0.5, p) == Catch::Approx(0.1).margin(1e-15));
}

TEST_CASE("S=0 is invariant for f, I=0 is invariant for g") {
    const ModelParams p = table_params();
    for (int i = 0; i <= 20; ++i) {
        const double v = i / 20.0 * 2.0;
        REQUIRE(reaction_f(0.0, v, p) == 0.0);
        REQUIRE(reaction_g(v, 0.0, p) == 0.0);
    }
}

TEST_CASE("|f(s,I)| is bounded by (lambda_S + mu_S) s on [0,1]^2") {
    const ModelParams p = table_params();
    for (int i = 0; i <= 32; ++i)
        for (int j = 0; j <= 32; ++j) {
            const double s = i / 32.0, v = j / 32.0;
            REQUIRE(std::abs(reaction_f(s, v, p)) <= (p.lambda_S + p.mu_S) * s + 1e-15);
        }
}

TEST_CASE("removed_update integrates R forward and never decreases it") {
    const Grid g = build_grid(1, {10.0, 0.0}, {5, 1});

    SECTION("I = 0 leaves R unchanged") {
        const Field R(g, 0.3), I(g, 0.0);
        CHECK(removed_update(R, I, 0.05, 0.1) == R);
    }
    SECTION("one Euler step by hand") {
        const Field R(g, 0.0), I(g, 1.0);
        const Field out = removed_update(R, I, 0.05, 0.1);
        for (std::size_t k = 0; k < out.size(); ++k) REQUIRE(out[k] == Catch::Approx(0.005));
    }
    SECTION("mu_I = 0 leaves R unchanged") {
        const Field R(g, 0.2), I(g, 5.0);
        CHECK(removed_update(R, I, 0.0, 0.1) == R);
    }
    SECTION("monotone for nonnegative I") {
        Field R(g, 0.0), I(g, 0.0);
        for (std::size_t k = 0; k < I.size(); ++k) I[k] = 0.1 * static_cast<double>(k);
        const Field out = removed_update(R, I, 0.05, 0.25);
        for (std::size_t k = 0; k < out.size(); ++k) REQUIRE(out[k] >= R[k]);
    }
}

TEST_CASE("validate_params rejects negatives and eps above one") {
    ModelParams p = table_params();
    p.lambda_S = -1.0;
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
    p = table_params();
    p.eps_reg = 1.5;
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
    p = table_params();
    p.eps_reg = 1.0;
    CHECK_NOTHROW(validate_params(p));
}
