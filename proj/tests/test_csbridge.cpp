#include <cmath>

#include "doctest.h"

#include "braidlab/csbridge.hpp"
#include "braidlab/errors.hpp"
#include "braidlab/scde.hpp"

using namespace braidlab;

TEST_CASE("phase transition agrees with the coupled beta threshold") {
    // tau plays the role of eps, so the same point must come out of both doors
    const double tau = 0.3;
    const auto pts = phase_transition(6, 16, 3, {tau}, 5e-4);
    REQUIRE(pts.size() == 1);
    REQUIRE(pts[0].ok);
    const double direct = beta_bp_coupled(6, tau, 16, 3, 5e-4);
    CHECK(pts[0].beta_th == doctest::Approx(direct).epsilon(1e-3));
}

TEST_CASE("closed-form bounds") {
    CHECK(dense_bound(0.25) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(dense_bound(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sparse_bound(0.5) == doctest::Approx(1.0 / (2.0 * std::log(2.0))).epsilon(1e-15));
    CHECK_THROWS_AS(sparse_bound(0.0), param_error);
    CHECK_THROWS_AS(dense_bound(-0.1), param_error);
}

TEST_CASE("phase transition: monotone in tau") {
    // the dense-bound comparison needs long chains and lives in the
    // acceptance suite; this checks the sweep machinery on a small config
    const auto pts = phase_transition(6, 16, 3, {0.08, 0.15, 0.3}, 5e-4);
    REQUIRE(pts.size() == 3);
    double prev = 0.0;
    for (const auto& p : pts) {
        REQUIRE(p.ok);
        CHECK(p.beta_th >= prev - 1e-6);
        CHECK(p.beta_th > 0.0);
        CHECK(p.beta_th < 1.0);
        CHECK(p.gamma_star > 0.0);
        prev = p.beta_th;
    }
}

TEST_CASE("phase transition: bad tau reported per point, sweep continues") {
    const auto pts = phase_transition(6, 8, 3, {-0.5, 0.2}, 1e-3);
    REQUIRE(pts.size() == 2);
    CHECK_FALSE(pts[0].ok);
    CHECK(pts[1].ok);
}
