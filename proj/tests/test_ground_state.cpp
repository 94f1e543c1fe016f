#include <doctest.h>

#include <cmath>

#include "nlslab/ground_state.hpp"
#include "nlslab/spectral.hpp"
#include "oracles.hpp"

using namespace nlslab;

TEST_CASE("closed form 1d profile: algebraic identities") {
    // Q'' - Q + Q^5 = 0 with Q = 3^{1/4} sech^{1/2}(2x): check pointwise
    // with finite differences of the oracle itself.
    for (double x : {0.0, 0.3, 1.0, 2.5}) {
        double h = 1e-5;
        double qpp = (oracles::q1d(x + h) - 2.0 * oracles::q1d(x) + oracles::q1d(x - h)) / (h * h);
        double q = oracles::q1d(x);
        CHECK(std::abs(qpp - q + std::pow(q, 5.0)) < 1e-5);
    }
    CHECK(oracles::q1d(0.0) == doctest::Approx(oracles::kQ1dPeak).epsilon(1e-14));
}

TEST_CASE("closed form 1d on the grid: mass, gradient, residual, energy") {
    Grid g(1, 30.0, 1024);
    GroundState gs = closed_form_q_1d(g);
    // periodization images of Q contribute ~1e-11 to the boxed mass
    CHECK(gs.mass == doctest::Approx(oracles::kQ1dMass).epsilon(1e-10));
    CHECK(gs.grad_norm_sq == doctest::Approx(oracles::kQ1dGradSq).epsilon(1e-10));
    CHECK(gs.peak == doctest::Approx(oracles::kQ1dPeak).epsilon(1e-12));
    CHECK(gs.residual < 1e-9);
    CHECK(std::abs(gs.energy) < 1e-6 * gs.grad_norm_sq);  // Pohozaev: E(Q) = 0
}

TEST_CASE("petviashvili solver reproduces the closed form in d=1") {
    Grid g(1, 30.0, 1024);
    GroundState solved = solve_ground_state(g, 1e-12);
    GroundState exact = closed_form_q_1d(g);
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
        err = std::max(err, std::abs(solved.q.v[j] - exact.q.v[j]));
    CHECK(err < 1e-8);
    CHECK(solved.residual < 1e-9);
    CHECK(solved.iterations > 0);
}

TEST_CASE("solver is insensitive to the seed") {
    Grid g(1, 30.0, 512);
    GroundState a = solve_ground_state(g, 1e-11, 1.0);
    GroundState b = solve_ground_state(g, 1e-11, 3.0);
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
        err = std::max(err, std::abs(a.q.v[j] - b.q.v[j]));
    CHECK(err < 1e-9);
}

TEST_CASE("townes profile in d=2 matches the shooting oracle") {
    static const oracles::Townes ref = oracles::townes_profile();
    CHECK(ref.b == doctest::Approx(2.2062).epsilon(1e-3));
    Grid g(2, 20.0, 128);
    GroundState gs = solve_ground_state(g, 1e-10);
    CHECK(gs.mass == doctest::Approx(ref.mass).epsilon(1e-6));
    CHECK(gs.peak == doctest::Approx(ref.b).epsilon(1e-6));
    CHECK(gs.residual < 1e-7);
    CHECK(std::abs(gs.energy) < 1e-6 * gs.grad_norm_sq);
}

TEST_CASE("refinement stability in d=2") {
    Grid coarse(2, 20.0, 128), fine(2, 20.0, 256);
    GroundState a = solve_ground_state(coarse, 1e-10);
    GroundState b = solve_ground_state(fine, 1e-10);
    CHECK(a.mass == doctest::Approx(b.mass).epsilon(1e-8));
    CHECK(a.grad_norm_sq == doctest::Approx(b.grad_norm_sq).epsilon(1e-7));
}

TEST_CASE("solver validation") {
    Grid g(1, 30.0, 256);
    CHECK_THROWS_AS(solve_ground_state(g, 0.0), ConfigError);
    CHECK_THROWS_AS(solve_ground_state(g, 1e-3), ConfigError);  // tol too loose
    CHECK_THROWS_AS(solve_ground_state(g, 1e-10, 2.0, 3), ConvergenceError);
    try {
        solve_ground_state(g, 1e-10, 2.0, 3);
    } catch (const ConvergenceError& e) {
        CHECK(e.residual > 0.0);
    }
}
