#include "nlslab/symmetry.hpp"

#include <cmath>

#include "nlslab/evolution.hpp"
#include "nlslab/spectral.hpp"

namespace nlslab {

namespace {

void check_resolution(Field& out) {
    if (spectral_tail_fraction(out) > 1e-6)
        throw ResolutionError("transformed field is unresolved in frequency");
    if (boundary_mass_fraction(out) > 1e-10) out.warn_unresolved = true;
}

}  // namespace

Field apply_group(const GroupElement& g, const Field& f) {
    if (!(g.lambda0 > 0.0) || !std::isfinite(g.lambda0))
        throw DomainError("apply_group: lambda0 must be positive and finite");
    const int d = f.grid.dim();

    Field w = g.t0 != 0.0 ? free_propagator(f, -g.t0 / (g.lambda0 * g.lambda0)) : f;
    Field out = affine_resample(w, 1.0 / g.lambda0, -g.x0[0] / g.lambda0,
                                -g.x0[1] / g.lambda0);
    const double amp = std::pow(g.lambda0, -0.5 * d);
    const Grid& grid = out.grid;
    const std::size_t N = grid.points_per_axis();
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        double x = grid.coord(d == 1 ? i : i / N);
        double y = d == 1 ? 0.0 : grid.coord(i % N);
        double ph = x * g.xi0[0] + y * g.xi0[1];
        out.v[i] *= amp * cplx(std::cos(ph), std::sin(ph));
    }
    check_resolution(out);
    return out;
}

ComposedElement compose(const GroupElement& g2, const GroupElement& g1) {
    const double s2 = g2.t0 / (g2.lambda0 * g2.lambda0);
    GroupElement g;
    g.lambda0 = g1.lambda0 * g2.lambda0;
    g.t0 = g2.lambda0 * g2.lambda0 * g1.t0 + g2.t0;
    double xi1sq = 0.0, x2xi1 = 0.0;
    for (int a = 0; a < 2; ++a) {
        g.xi0[a] = g2.xi0[a] + g1.xi0[a] / g2.lambda0;
        g.x0[a] = g2.x0[a] + g2.lambda0 * (g1.x0[a] - 2.0 * s2 * g1.xi0[a]);
        xi1sq += g1.xi0[a] * g1.xi0[a];
        x2xi1 += g2.x0[a] * g1.xi0[a];
    }
    return ComposedElement{g, s2 * xi1sq - x2xi1 / g2.lambda0};
}

Field galilean(const Field& u, double t, const Vec2& xi) {
    const int d = u.grid.dim();
    Field out = spectral_shift(u, xi[0] * t, xi[1] * t);  // u(x - xi t)
    const Grid& grid = out.grid;
    const std::size_t N = grid.points_per_axis();
    const double xisq = xi[0] * xi[0] + (d == 2 ? xi[1] * xi[1] : 0.0);
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        double x = grid.coord(d == 1 ? i : i / N);
        double y = d == 1 ? 0.0 : grid.coord(i % N);
        // exp(i (xi/2) . (x - (xi/2) t))
        double ph = 0.5 * (xi[0] * x + (d == 2 ? xi[1] * y : 0.0)) - 0.25 * xisq * t;
        out.v[i] *= cplx(std::cos(ph), std::sin(ph));
    }
    check_resolution(out);
    return out;
}

Field scale_sym(const Field& u, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("scale_sym: lambda must be positive");
    Field out = affine_resample(u, 1.0 / lambda, 0.0, 0.0);
    const double amp = std::pow(lambda, -0.5 * u.grid.dim());
    for (auto& z : out.v) z *= amp;
    check_resolution(out);
    return out;
}

Field phase_sym(const Field& u, double theta) {
    Field out = u;
    cplx ph(std::cos(theta), std::sin(theta));
    for (auto& z : out.v) z *= ph;
    return out;
}

Field translate_sym(const Field& u, const Vec2& x0) {
    Field out = spectral_shift(u, x0[0], x0[1]);
    check_resolution(out);
    return out;
}

Field pseudo_conformal(const Field& u_at_t, double t) {
    if (t == 0.0) throw DomainError("pseudo_conformal: t must be nonzero");
    const int d = u_at_t.grid.dim();
    // v(1/t, y) = |t|^{d/2} conj(u(t, y t)) exp(i |y|^2 t / 4)
    Field out = affine_resample(u_at_t, t, 0.0, 0.0);
    const double amp = std::pow(std::abs(t), 0.5 * d);
    const Grid& grid = out.grid;
    const std::size_t N = grid.points_per_axis();
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        double x = grid.coord(d == 1 ? i : i / N);
        double y = d == 1 ? 0.0 : grid.coord(i % N);
        double ph = 0.25 * (x * x + y * y) * t;
        out.v[i] = amp * std::conj(out.v[i]) * cplx(std::cos(ph), std::sin(ph));
    }
    check_resolution(out);
    return out;
}

Field analytic_minimal_blowup_1d(const Grid& grid, double t) {
    if (grid.dim() != 1) throw DimensionError("analytic_minimal_blowup_1d: d=1 only");
    if (t == 0.0) throw DomainError("analytic_minimal_blowup_1d: t must be nonzero");
    const double amp = std::pow(3.0, 0.25) / std::sqrt(std::abs(t));
    Field out(grid);
    for (std::size_t j = 0; j < grid.points_per_axis(); ++j) {
        double x = grid.coord(j);
        double q = std::sqrt(1.0 / std::cosh(2.0 * x / t));
        double ph = 0.25 * x * x / t - 1.0 / t;
        out.v[j] = amp * q * cplx(std::cos(ph), std::sin(ph));
    }
    return out;
}

}  // namespace nlslab
