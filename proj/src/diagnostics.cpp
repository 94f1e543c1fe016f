#include "nlslab/diagnostics.hpp"

#include <cmath>

#include "nlslab/spectral.hpp"

namespace nlslab {

namespace {

double smooth_step(double s) {
    // C-infinity transition, 0 for s <= 0 and 1 for s >= 1.
    auto phi = [](double r) { return r > 0.0 ? std::exp(-1.0 / r) : 0.0; };
    double a = phi(s), b = phi(1.0 - s);
    return a / (a + b);
}

Field abs_pow_times(const Field& u, double q, bool negate) {
    // F(v) = -|v|^q v (negate) or |v|^q v.
    Field out(u.grid);
    for (std::size_t i = 0; i < u.v.size(); ++i) {
        double a = std::pow(std::norm(u.v[i]), 0.5 * q);
        out.v[i] = (negate ? -a : a) * u.v[i];
    }
    return out;
}

}  // namespace

ConservedSet conserved(const Field& u) {
    const Grid& g = u.grid;
    SpectralField F = forward_transform(u);
    const std::size_t N = g.points_per_axis();
    double mass = 0.0, px = 0.0, py = 0.0, gradsq = 0.0;
    if (g.dim() == 1) {
        for (std::size_t i = 0; i < N; ++i) {
            double m = std::norm(F.c[i]);
            double xi = g.freq(i);
            mass += m;
            px += xi * m;
            gradsq += xi * xi * m;
        }
    } else {
        for (std::size_t i1 = 0; i1 < N; ++i1)
            for (std::size_t i2 = 0; i2 < N; ++i2) {
                double m = std::norm(F.c[i1 * N + i2]);
                double xi1 = g.freq(i1), xi2 = g.freq(i2);
                mass += m;
                px += xi1 * m;
                py += xi2 * m;
                gradsq += (xi1 * xi1 + xi2 * xi2) * m;
            }
    }
    const double w = g.cell_volume();
    const double pe = 2.0 + 4.0 / g.dim();
    double pot = 0.0;
    for (const auto& z : u.v) pot += std::pow(std::norm(z), 0.5 * pe);
    return ConservedSet{w * mass, 0.5 * w * gradsq - w * pot / pe, w * px, w * py};
}

EnergyTensor energy_tensor(const Field& u) {
    const int d = u.grid.dim();
    const double p = 1.0 + 4.0 / d;
    EnergyTensor T{Field(u.grid), {}, {}};
    for (std::size_t i = 0; i < u.v.size(); ++i)
        T.t00.v[i] = cplx(std::norm(u.v[i]), 0.0);

    std::vector<Field> du;
    for (int a = 0; a < d; ++a) du.push_back(derivative(u, a));

    for (int a = 0; a < d; ++a) {
        Field t0(u.grid);
        for (std::size_t i = 0; i < u.v.size(); ++i)
            t0.v[i] = cplx(2.0 * std::imag(du[a].v[i] * std::conj(u.v[i])), 0.0);
        T.t0j.push_back(std::move(t0));
    }

    Field lap_abs2 = laplacian(T.t00);
    T.tjk.assign(d, std::vector<Field>());
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            Field t(u.grid);
            for (std::size_t i = 0; i < u.v.size(); ++i) {
                double val = 4.0 * std::real(std::conj(du[a].v[i]) * du[b].v[i]);
                if (a == b)
                    val -= lap_abs2.v[i].real() +
                           2.0 * (p - 1.0) / (p + 1.0) *
                               std::pow(std::norm(u.v[i]), 0.5 * (p + 1.0));
                t.v[i] = cplx(val, 0.0);
            }
            T.tjk[a].push_back(std::move(t));
        }
    return T;
}

double variance(const Field& u) {
    const Grid& g = u.grid;
    const std::size_t N = g.points_per_axis();
    double s = 0.0;
    for (std::size_t i = 0; i < u.v.size(); ++i) {
        double x = g.coord(g.dim() == 1 ? i : i / N);
        double y = g.dim() == 1 ? 0.0 : g.coord(i % N);
        s += (x * x + y * y) * std::norm(u.v[i]);
    }
    return g.cell_volume() * s;
}

VirialReport virial_check(const std::vector<DiagRow>& rows) {
    if (rows.size() < 3) throw InsufficientDataError("virial_check: need >= 3 rows");
    const double dt = rows[1].t - rows[0].t;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (std::abs(rows[i].t - rows[i - 1].t - dt) > 1e-9 * std::max(1.0, dt))
            throw InsufficientDataError("virial_check: rows not on a uniform time grid");
    const double target = 16.0 * rows.front().energy;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        double d2 = (rows[i + 1].variance - 2.0 * rows[i].variance +
                     rows[i - 1].variance) / (dt * dt);
        worst = std::max(worst, std::abs(d2 - target) / std::abs(target));
    }
    return VirialReport{worst, rows.front().energy};
}

double chi_bump_value(double r, double R) {
    return 1.0 - smooth_step((r - 0.9 * R) / (0.1 * R));
}

Field chi_bump_field(const Grid& grid, double R) {
    const std::size_t N = grid.points_per_axis();
    Field out(grid);
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        double x = grid.coord(grid.dim() == 1 ? i : i / N);
        double y = grid.dim() == 1 ? 0.0 : grid.coord(i % N);
        out.v[i] = cplx(chi_bump_value(std::hypot(x, y), R), 0.0);
    }
    return out;
}

double virial_psi_value(double s) {
    // psi(s) = theta(s)/s with theta(s) = s up to s = 1, capped at 1 + T/2
    // across a short collar. theta' = 1 - smoothstep >= 0, so s psi(s) is
    // exactly nondecreasing (the radial eigenvalue of the weight Jacobian
    // stays nonnegative), and psi matches 1/s far out to within T/2.
    const double T = 0.01;
    if (s <= 1.0) return 1.0;
    double x = std::min((s - 1.0) / T, 1.0);
    // integral of the quintic smoothstep 6x^5 - 15x^4 + 10x^3
    double theta = 1.0 + T * (x - x * x * x * x * (x * x - 3.0 * x + 2.5));
    return theta / s;
}

std::vector<Field> virial_weight(const Grid& grid, double R) {
    const int d = grid.dim();
    const std::size_t N = grid.points_per_axis();
    std::vector<Field> w;
    for (int a = 0; a < d; ++a) w.emplace_back(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double x = grid.coord(d == 1 ? i : i / N);
        double y = d == 1 ? 0.0 : grid.coord(i % N);
        double psi = virial_psi_value(std::hypot(x, y) / R);
        w[0].v[i] = cplx(psi * x, 0.0);
        if (d == 2) w[1].v[i] = cplx(psi * y, 0.0);
    }
    return w;
}

Field lp_project(const Field& u, double Ncut, ProjectSide side) {
    if (!(Ncut > 0.0)) throw DomainError("lp_project: cutoff must be positive");
    SpectralField F = forward_transform(u);
    apply_real_multiplier(F, [Ncut, side](double x1, double x2) {
        double s = std::hypot(x1, x2) / Ncut;
        double low = 1.0 - smooth_step(s - 1.0);
        return side == ProjectSide::low ? low : 1.0 - low;
    });
    return inverse_transform(F);
}

double sharp_gn_defect(const Field& u, double qmass) {
    ConservedSet c = conserved(u);
    double gn = gradient_norm_sq(u);
    double ratio = std::sqrt(c.mass / qmass);
    return c.energy - 0.5 * gn * (1.0 - std::pow(ratio, 4.0 / u.grid.dim()));
}

double sharp_gn_defect_alt(const Field& u, double qmass) {
    ConservedSet c = conserved(u);
    double gn = gradient_norm_sq(u);
    double inner = 1.0 - c.mass / qmass;
    double pw = inner > 0.0 ? std::pow(inner, 4.0 / u.grid.dim()) : 0.0;
    return c.energy - 0.5 * gn * (1.0 - pw);
}

double morawetz_action(const Field& u, const TruncationParams& trunc) {
    Field iu = lp_project(u, trunc.C * trunc.K, ProjectSide::low);
    auto w = virial_weight(u.grid, trunc.R);
    double s = 0.0;
    for (int a = 0; a < u.grid.dim(); ++a) {
        Field da = derivative(iu, a);
        for (std::size_t i = 0; i < iu.v.size(); ++i)
            s += w[a].v[i].real() * std::imag(da.v[i] * std::conj(iu.v[i]));
    }
    return u.grid.cell_volume() * s;
}

namespace {
Field masked_truncation(const Field& u, const TruncationParams& trunc) {
    Field iu = lp_project(u, trunc.C * trunc.K, ProjectSide::low);
    Field chi = chi_bump_field(u.grid, trunc.R);
    for (std::size_t i = 0; i < iu.v.size(); ++i) iu.v[i] *= chi.v[i].real();
    return iu;
}
}  // namespace

double truncated_energy(const Field& u, const TruncationParams& trunc) {
    return conserved(masked_truncation(u, trunc)).energy;
}

double truncated_grad_norm_sq(const Field& u, const TruncationParams& trunc) {
    return gradient_norm_sq(masked_truncation(u, trunc));
}

double commutator_error(const Field& u, const TruncationParams& trunc) {
    const double q = 4.0 / u.grid.dim();
    Field fu = abs_pow_times(u, q, true);
    Field ifu = lp_project(fu, trunc.C * trunc.K, ProjectSide::low);
    Field iu = lp_project(u, trunc.C * trunc.K, ProjectSide::low);
    Field fiu = abs_pow_times(iu, q, true);
    for (std::size_t i = 0; i < ifu.v.size(); ++i) ifu.v[i] -= fiu.v[i];
    return l2_norm(ifu);
}

double strichartz_norm(const std::vector<StoredSnapshot>& snaps) {
    if (snaps.size() < 2)
        throw InsufficientDataError("strichartz_norm: need >= 2 snapshots");
    const int d = snaps.front().field.grid.dim();
    const double pw = 2.0 * (d + 2.0) / d;
    std::vector<double> space(snaps.size());
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const Field& u = snaps[i].field;
        double s = 0.0;
        for (const auto& z : u.v) s += std::pow(std::norm(z), 0.5 * pw);
        space[i] = u.grid.cell_volume() * s;
    }
    double total = 0.0;
    for (std::size_t i = 1; i < snaps.size(); ++i)
        total += 0.5 * (space[i] + space[i - 1]) * (snaps[i].t - snaps[i - 1].t);
    return std::pow(total, 1.0 / pw);
}

}  // namespace nlslab
