#include <cmath>

#include "doctest.h"

#include "braidlab/de.hpp"
#include "braidlab/errors.hpp"
#include "braidlab/scde.hpp"

using namespace braidlab;

TEST_CASE("coupling matrix rows sum to one over the window") {
    for (int w : {1, 3, 5}) {
        for (int p = 1; p <= 6; ++p) {
            double s = 0.0;
            for (int q = 1; q <= 6 + w; ++q) s += coupling_entry(p, q, w);
            CHECK(s == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("coupled step: w=1 is the uncoupled map, zero stays zero") {
    CoupledParams p{3, 4.233585, 0.4, 4, 1};
    CoupledState s = CoupledState::initial(p);
    s.x = {0.9, 0.5, 0.2, 0.7};
    const auto next = coupled_de_step(s);
    for (int i = 0; i < 4; ++i) {
        const double expect = p.eps * std::pow(g_func(s.x[i], p.k, p.gamma), p.k - 1);
        CHECK(next.x[i] == doctest::Approx(expect).epsilon(1e-12));
    }
    CoupledState z = CoupledState::initial(CoupledParams{3, 4.0, 0.5, 6, 3});
    std::fill(z.x.begin(), z.x.end(), 0.0);
    const auto nz = coupled_de_step(z);
    for (double v : nz.x) CHECK(v == 0.0);
}

TEST_CASE("decoding wave: boundaries collapse before the bulk") {
    // just above the coupled threshold the surviving profile keeps a live
    // bulk while the terminated boundaries have mostly decoded
    const double th = eps_bp_coupled(3, 4.233585, 8, 5, 1e-5);
    CoupledParams p{3, 4.233585, th + 0.02, 8, 5};
    const auto fp = coupled_fixed_point(p, 1e-13);
    REQUIRE(!fp.died);
    const int M = p.M();
    CHECK(fp.x[0] < 0.2 * fp.x[M / 2]);
    CHECK(fp.x[M - 1] < 0.2 * fp.x[M / 2]);
    // below the coupled threshold the wave clears the whole chain
    CoupledParams pd{3, 4.233585, th - 0.02, 8, 5};
    CHECK(coupled_fixed_point(pd, 1e-13).died);
}

TEST_CASE("fixed points are symmetric about the chain center") {
    CoupledParams p{3, 4.233585, 0.47, 16, 3};  // above the coupled threshold
    const auto fp = coupled_fixed_point(p, 1e-13);
    REQUIRE(!fp.died);
    const int M = p.M();
    for (int i = 0; i < M; ++i) CHECK(fp.x[i] == doctest::Approx(fp.x[M - 1 - i]).epsilon(1e-9));
}

TEST_CASE("w=1 coupled threshold equals the uncoupled threshold") {
    const double c = eps_bp_coupled(3, 4.233585, 8, 1, 1e-6);
    const double u = eps_bp(3, 4.233585, 1e-6);
    CHECK(c == doctest::Approx(u).epsilon(1e-4));
}

TEST_CASE("coupling helps: coupled threshold above uncoupled, below potential") {
    const int k = 6;
    const double gam = 12.0;  // beta = 0.5
    const double u = eps_bp(k, gam, 1e-6);
    const double c = eps_bp_coupled(k, gam, 16, 3, 1e-5);
    const double pot = potential_threshold(k, gam, 1e-6);
    CHECK(c >= u - 1e-4);
    CHECK(c > u + 0.01);          // strict improvement
    CHECK(c < pot - 10.0 * 1e-5); // but no saturation
}

TEST_CASE("design rate reductions") {
    // uncoupled chain: exactly d*k/gamma
    CHECK(design_rate(3, 6.0, 1, 1, 8) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(beta_c(3, 6.0, 1, 1) == doctest::Approx(0.5).epsilon(1e-12));
    // termination loss shrinks with N
    const int k = 6;
    const double gam = 10.0;
    double prev = 1e9;
    for (int N : {8, 32, 128}) {
        const double diff = beta_c(k, gam, N, 5) - k / gam;
        CHECK(diff > 0.0);
        CHECK(diff < prev);
        prev = diff;
    }
    CHECK(beta_c(k, gam, 128, 5) - k / gam < 0.02);
    // inversion round-trips
    const double gstar = gamma_for_beta_c(6, 0.7, 16, 5);
    CHECK(beta_c(6, gstar, 16, 5) == doctest::Approx(0.7).epsilon(1e-8));
}

TEST_CASE("coupled EBP point: trivial fixed point and w=1 reduction") {
    CoupledParams p{3, 4.233585, 0.0, 4, 1};
    std::vector<double> zero(static_cast<std::size_t>(p.M()), 0.0);
    const auto z = coupled_ebp_point(p, zero, 2);
    CHECK(z.h == doctest::Approx(0.0));

    // w=1: the point must match the uncoupled parametric curve
    const double x = 0.37;
    std::vector<double> xs(static_cast<std::size_t>(p.M()), x);
    const auto pt = coupled_ebp_point(p, xs, 2);
    CHECK(pt.eps == doctest::Approx(eps_of_x(x, p.k, p.gamma)).epsilon(1e-12));
    CHECK(pt.h == doctest::Approx(std::pow(g_func(x, p.k, p.gamma), p.k)).epsilon(1e-12));
}

TEST_CASE("anchored continuation traces a fold near the coupled threshold") {
    const int k = 3, N = 32, w = 5;
    const double gam = 4.233585;
    std::vector<double> grid;
    for (int i = 1; i <= 36; ++i) grid.push_back(0.02 + (0.85 - 0.02) * i / 36.0);
    const auto curve = coupled_ebp_curve(k, gam, N, w, (N + w - 1) / 2, grid, 40000, 1e-10);
    double eps_min = 1e99;
    int conv = 0;
    for (const auto& s : curve) {
        if (!s.converged) continue;
        ++conv;
        eps_min = std::min(eps_min, s.eps);
    }
    CHECK(conv > 25);
    const double threshold = eps_bp_coupled(k, gam, N, w, 1e-5);
    CHECK(eps_min == doctest::Approx(threshold).epsilon(0.05));
    // folded: the eps sequence along the branch is not monotone
    int changes = 0;
    for (std::size_t i = 2; i < curve.size(); ++i) {
        const double d1 = curve[i - 1].eps - curve[i - 2].eps;
        const double d2 = curve[i].eps - curve[i - 1].eps;
        if ((d1 < 0) != (d2 < 0)) ++changes;
    }
    CHECK(changes >= 1);
}

TEST_CASE("modified recursion: w=1 equals the uncoupled threshold") {
    const double m = eps_bp_modified(3, 4.233585, 8, 1, 1e-6);
    const double u = eps_bp(3, 4.233585, 1e-6);
    CHECK(m == doctest::Approx(u).epsilon(1e-4));
}

TEST_CASE("modified recursion dominates the plain coupled recursion") {
    for (auto [N, w] : {std::pair<int, int>{8, 3}, std::pair<int, int>{16, 5}}) {
        const double plain = eps_bp_coupled(6, 12.0, N, w, 1e-5);
        const double mod = eps_bp_modified(6, 12.0, N, w, 1e-5);
        CHECK(mod >= plain - 1e-4);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(coupled_fixed_point(CoupledParams{3, 4.0, 0.3, 4, 7}), param_error);
    CHECK_THROWS_AS(coupled_fixed_point(CoupledParams{1, 4.0, 0.3, 4, 2}), param_error);
    CoupledParams p{3, 4.0, 0.3, 4, 2};
    std::vector<double> wrong(3, 0.0);
    CHECK_THROWS_AS(coupled_ebp_point(p, wrong, 1), param_error);
    CHECK_THROWS_AS(coupled_ebp_point(p, std::vector<double>(5, 0.0), 5), param_error);
}
