#include "nlslab/ground_state.hpp"

#include <cmath>

#include "nlslab/spectral.hpp"

namespace nlslab {

namespace {

double nonlinearity_power(int d) { return 1.0 + 4.0 / d; }

Field power_p(const Field& f, double p) {
    Field out(f.grid);
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        double a = f.v[i].real();
        out.v[i] = cplx(a <= 0.0 ? 0.0 : std::pow(a, p), 0.0);
    }
    return out;
}

GroundState finalize(Field q, const Grid& grid, int iters) {
    GroundState gs{std::move(q), grid.dim(), 0.0, 0.0, 0.0, 0.0, 0.0, iters};
    double n2 = l2_norm(gs.q);
    gs.mass = n2 * n2;
    gs.grad_norm_sq = gradient_norm_sq(gs.q);
    gs.residual = ground_state_residual(gs.q);
    gs.energy = ground_state_energy(gs.q);
    std::size_t N = grid.points_per_axis();
    std::size_t center = grid.dim() == 1 ? N / 2 : (N / 2) * N + N / 2;
    gs.peak = gs.q.v[center].real();
    return gs;
}

}  // namespace

double ground_state_residual(const Field& q) {
    const double p = nonlinearity_power(q.grid.dim());
    Field lap = laplacian(q);
    double sup = 0.0;
    for (std::size_t i = 0; i < q.v.size(); ++i) {
        double a = q.v[i].real();
        double r = -lap.v[i].real() + a - (a <= 0.0 ? 0.0 : std::pow(a, p));
        sup = std::max(sup, std::abs(r));
    }
    return sup;
}

double ground_state_energy(const Field& q) {
    const double pe = 2.0 + 4.0 / q.grid.dim();
    double pot = 0.0;
    for (const auto& z : q.v) pot += std::pow(std::abs(z), pe);
    pot *= q.grid.cell_volume();
    return 0.5 * gradient_norm_sq(q) - pot / pe;
}

GroundState closed_form_q_1d(const Grid& grid) {
    if (grid.dim() != 1) throw DimensionError("closed_form_q_1d requires a d=1 grid");
    const double L = grid.extent();
    const double amp = std::pow(3.0, 0.25);
    Field q(grid);
    for (std::size_t j = 0; j < grid.points_per_axis(); ++j) {
        double x = grid.coord(j);
        double s = 0.0;
        for (int n = -3; n <= 3; ++n) {
            double y = 2.0 * (x + n * L);
            s += amp * std::sqrt(1.0 / std::cosh(y));
        }
        q.v[j] = cplx(s, 0.0);
    }
    return finalize(std::move(q), grid, 0);
}

GroundState solve_ground_state(const Grid& grid, double tol, double seed_width,
                               int max_iter) {
    if (!(tol > 0.0) || tol > 1e-6)
        throw ConfigError("solve_ground_state: tol must lie in (0, 1e-6]");
    const int d = grid.dim();
    const double p = nonlinearity_power(d);
    const double gamma = p / (p - 1.0);
    const std::size_t N = grid.points_per_axis();

    Field v(grid);
    for (std::size_t i = 0; i < v.v.size(); ++i) {
        double x = grid.coord(d == 1 ? i : i / N);
        double y = d == 1 ? 0.0 : grid.coord(i % N);
        v.v[i] = cplx(std::exp(-(x * x + y * y) / (seed_width * seed_width)), 0.0);
    }

    double diff = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        Field vp = power_p(v, p);

        // Petviashvili factor <(1-Lap)v, v> / <v^p, v>.
        SpectralField V = forward_transform(v);
        apply_real_multiplier(
            V, [](double x1, double x2) { return 1.0 + x1 * x1 + x2 * x2; });
        double num = inner_product(inverse_transform(V), v).real();
        double den = inner_product(vp, v).real();
        double factor = std::pow(num / den, gamma);

        SpectralField W = forward_transform(vp);
        apply_real_multiplier(
            W, [](double x1, double x2) { return 1.0 / (1.0 + x1 * x1 + x2 * x2); });
        Field next = inverse_transform(W);
        for (auto& z : next.v) z = cplx(factor * z.real(), 0.0);

        Field delta(grid);
        for (std::size_t i = 0; i < delta.v.size(); ++i) delta.v[i] = next.v[i] - v.v[i];
        diff = l2_norm(delta);
        v = std::move(next);
        if (diff < tol) return finalize(std::move(v), grid, it);
    }
    throw ConvergenceError("spectral renormalization did not converge", diff);
}

}  // namespace nlslab
