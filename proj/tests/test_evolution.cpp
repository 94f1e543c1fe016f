#include <doctest.h>

#include <cmath>

#include "nlslab/diagnostics.hpp"
#include "nlslab/evolution.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/spectral.hpp"
#include "nlslab/symmetry.hpp"
#include "oracles.hpp"

using namespace nlslab;

namespace {

Field gaussian_1d(const Grid& g, double a, double amp = 1.0) {
    Field f(g);
    for (std::size_t j = 0; j < g.size(); ++j)
        f.v[j] = amp * std::exp(-a * g.coord(j) * g.coord(j));
    return f;
}

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

Field run_fixed_steps(Field u, double dt, int n) {
    for (int i = 0; i < n; ++i) u = step(u, dt);
    return u;
}

}  // namespace

TEST_CASE("free propagator matches the Gaussian closed form") {
    Grid g(1, 40.0, 1024);
    double a = 0.5, t = 0.7;
    Field u = free_propagator(gaussian_1d(g, a), t);
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
        err = std::max(err, std::abs(u.v[j] - oracles::free_gaussian_1d(a, t, g.coord(j))));
    CHECK(err < 1e-10);
    CHECK(std::abs(l2_norm(u) - l2_norm(gaussian_1d(g, a))) < 1e-13);
}

TEST_CASE("free propagator in d=2 is a tensor product") {
    Grid g(2, 24.0, 128);
    double a = 0.5, t = 0.4;
    Field u0(g);
    std::size_t N = g.points_per_axis();
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            u0.v[i * N + j] =
                std::exp(-a * (g.coord(i) * g.coord(i) + g.coord(j) * g.coord(j)));
    Field u = free_propagator(u0, t);
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            cplx want = oracles::free_gaussian_1d(a, t, g.coord(i)) *
                        oracles::free_gaussian_1d(a, t, g.coord(j));
            err = std::max(err, std::abs(u.v[i * N + j] - want));
        }
    CHECK(err < 1e-10);
}

TEST_CASE("zero-dt step is the identity; mass is conserved per step") {
    Grid g(1, 30.0, 512);
    Field u = gaussian_1d(g, 0.4, 1.2);
    CHECK(max_diff(step(u, 0.0), u) == 0.0);
    Field v = run_fixed_steps(u, 1e-2, 50);
    CHECK(std::abs(l2_norm(v) - l2_norm(u)) < 1e-13);
}

TEST_CASE("soliton rotates as Q e^{it}") {
    Grid g(1, 30.0, 1024);
    GroundState q = closed_form_q_1d(g);
    double dt = 1e-4, T = 1.0;
    Field u = run_fixed_steps(q.q, dt, static_cast<int>(std::lround(T / dt)));
    cplx rot(std::cos(T), std::sin(T));
    double mod_err = 0.0, full_err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        mod_err = std::max(mod_err, std::abs(std::abs(u.v[j]) - std::abs(q.q.v[j])));
        full_err = std::max(full_err, std::abs(u.v[j] - rot * q.q.v[j]));
    }
    CHECK(mod_err < 5e-7);
    CHECK(full_err < 1e-6);
}

TEST_CASE("strang step is second order") {
    Grid g(1, 30.0, 512);
    Field u0 = gaussian_1d(g, 0.5, 1.1);
    double T = 0.1;
    Field ref = run_fixed_steps(u0, T / 1024, 1024);
    double e1 = max_diff(run_fixed_steps(u0, T / 32, 32), ref);
    double e2 = max_diff(run_fixed_steps(u0, T / 64, 64), ref);
    double order = std::log2(e1 / e2);  // global error ~ dt^2
    CHECK(order > 1.9);
    CHECK(order < 2.3);
}

TEST_CASE("step reverses") {
    Grid g(1, 30.0, 512);
    Field u0 = gaussian_1d(g, 0.5, 1.1);
    Field u = step(step(u0, 1e-2), -1e-2);
    CHECK(max_diff(u, u0) < 1e-10);
}

TEST_CASE("evolve: conservation and record schedule") {
    Grid g(1, 30.0, 512);
    SolverConfig cfg;
    cfg.dt0 = 1e-3;
    cfg.t_end = 0.5;
    DiagnosticsSchedule sched{0.1, 0.25};
    TrajectoryRecord tr = evolve(gaussian_1d(g, 0.5, 1.2), cfg, sched);
    CHECK(tr.termination == Termination::reached_t_end);
    REQUIRE(tr.rows.size() >= 6);
    CHECK(tr.rows.front().t == doctest::Approx(0.0));
    CHECK(tr.rows.back().t == doctest::Approx(0.5));
    // recorded rows land on the uniform grid
    for (std::size_t i = 0; i < tr.rows.size(); ++i)
        CHECK(tr.rows[i].t == doctest::Approx(0.1 * static_cast<double>(i)).epsilon(1e-12));
    double m0 = tr.rows.front().mass, e0 = tr.rows.front().energy;
    for (const auto& r : tr.rows) {
        CHECK(std::abs(r.mass - m0) < 1e-12 * m0);
        CHECK(std::abs(r.energy - e0) < 1e-5 * std::max(std::abs(e0), 1.0));
        CHECK(std::abs(r.momentum_x) < 1e-10);
    }
    REQUIRE(tr.snapshots.size() == 3);  // t = 0, 0.25, 0.5
    CHECK(tr.snapshots[1].t == doctest::Approx(0.25));
}

TEST_CASE("evolve validation") {
    Grid g(1, 30.0, 512);
    Field u = gaussian_1d(g, 0.5);
    SolverConfig cfg;
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(evolve(u, cfg), ConfigError);
    SolverConfig cfg2;
    cfg2.adapt_c = 0.0;
    CHECK_THROWS_AS(evolve(u, cfg2), ConfigError);
    SolverConfig cfg3;
    cfg3.grad_max = 1e-9;  // already exceeded at t=0
    CHECK_THROWS_AS(evolve(u, cfg3), ConfigError);
}

TEST_CASE("evolution commutes with phase and translation") {
    Grid g(1, 30.0, 512);
    Field u0 = gaussian_1d(g, 0.5, 1.3);
    double T = 0.2, dt = 1e-3;
    int n = static_cast<int>(std::lround(T / dt));
    Field evolved = run_fixed_steps(u0, dt, n);
    SUBCASE("phase") {
        Field a = run_fixed_steps(phase_sym(u0, 0.9), dt, n);
        Field b = phase_sym(evolved, 0.9);
        CHECK(max_diff(a, b) < 1e-12);
    }
    SUBCASE("translation") {
        Field a = run_fixed_steps(translate_sym(u0, {1.7, 0.0}), dt, n);
        Field b = translate_sym(evolved, {1.7, 0.0});
        CHECK(max_diff(a, b) < 1e-10);
    }
    SUBCASE("galilean covariance") {
        double xi = 0.8;
        Field a = run_fixed_steps(galilean(u0, 0.0, {xi, 0.0}), dt, n);
        Field b = galilean(evolved, T, {xi, 0.0});
        CHECK(max_diff(a, b) < 1e-8);
    }
}

TEST_CASE("focusing gaussian above threshold triggers adaptive refinement") {
    Grid g(1, 30.0, 1024);
    SolverConfig cfg;
    cfg.dt0 = 1e-3;
    cfg.adapt_c = 0.05;
    cfg.t_end = 2.0;
    cfg.grad_max = 50.0;
    TrajectoryRecord tr = evolve(gaussian_1d(g, 0.5, 2.2), cfg);
    CHECK(tr.termination == Termination::blowup_detected);
    CHECK((tr.detail == "grad_max" || tr.detail == "resolution_stop"));
    // dt shrank as the gradient grew (row 0 is the initial record, dt = 0)
    CHECK(tr.rows.back().dt < tr.rows[1].dt);
    CHECK(tr.rows.back().grad_norm_sq > tr.rows.front().grad_norm_sq);
}
