#include "nlslab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlslab/spectral.hpp"

namespace nlslab {

namespace {

void kinetic_phase(SpectralField& F, double t) {
    apply_multiplier(F, [t](double x1, double x2) {
        double ph = -t * (x1 * x1 + x2 * x2);
        return cplx(std::cos(ph), std::sin(ph));
    });
}

void nonlinear_phase(Field& u, double dt) {
    const double q = 4.0 / u.grid.dim();
    for (auto& z : u.v) {
        double a = std::norm(z);  // |u|^2
        double ph = dt * std::pow(a, 0.5 * q);
        z *= cplx(std::cos(ph), std::sin(ph));
    }
}

DiagRow diagnostics_row(const Field& u, const SpectralField& F, double t, double dt,
                        double grad_ref) {
    const Grid& g = u.grid;
    const std::size_t N = g.points_per_axis();
    const double w = g.cell_volume();
    DiagRow r{};
    r.t = t;
    r.dt = dt;

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
    r.mass = w * mass;
    r.momentum_x = w * px;
    r.momentum_y = w * py;
    r.grad_norm_sq = w * gradsq;

    const double pe = 2.0 + 4.0 / g.dim();
    double pot = 0.0, var = 0.0, linf = 0.0;
    for (std::size_t i = 0; i < u.v.size(); ++i) {
        double a2 = std::norm(u.v[i]);
        pot += std::pow(a2, 0.5 * pe);
        double x = g.coord(g.dim() == 1 ? i : i / N);
        double y = g.dim() == 1 ? 0.0 : g.coord(i % N);
        var += (x * x + y * y) * a2;
        linf = std::max(linf, a2);
    }
    r.energy = 0.5 * r.grad_norm_sq - w * pot / pe;
    r.variance = w * var;
    r.linf = std::sqrt(linf);
    r.lambda = grad_ref > 0.0 && r.grad_norm_sq > 0.0
                   ? grad_ref / std::sqrt(r.grad_norm_sq)
                   : 0.0;
    return r;
}

}  // namespace

const char* to_string(Termination t) {
    switch (t) {
        case Termination::reached_t_end: return "reached_t_end";
        case Termination::blowup_detected: return "blowup_detected";
        case Termination::dt_underflow: return "dt_underflow";
    }
    return "?";
}

Field free_propagator(const Field& u, double t) {
    SpectralField F = forward_transform(u);
    kinetic_phase(F, t);
    return inverse_transform(F);
}

Field step(const Field& u, double dt, bool use_dealias) {
    if (dt == 0.0) return u;
    SpectralField F = forward_transform(u);
    kinetic_phase(F, 0.5 * dt);
    Field mid = inverse_transform(F);
    nonlinear_phase(mid, dt);
    SpectralField G = forward_transform(mid);
    if (use_dealias) dealias(G);
    kinetic_phase(G, 0.5 * dt);
    Field out = inverse_transform(G);
    if (!all_finite(out)) throw NumericalBlowupError("step produced non-finite samples");
    return out;
}

TrajectoryRecord evolve(const Field& u0, const SolverConfig& cfg,
                        const DiagnosticsSchedule& sched) {
    if (!(cfg.dt_min > 0.0) || !(cfg.dt_min < cfg.dt0))
        throw ConfigError("evolve: need 0 < dt_min < dt0");
    if (!(cfg.adapt_c > 0.0) || cfg.adapt_c > 1.0)
        throw ConfigError("evolve: adapt_c must lie in (0, 1]");
    if (!(cfg.t_end > cfg.t_start)) throw ConfigError("evolve: t_end must exceed t_start");
    if (!all_finite(u0)) throw ConfigError("evolve: initial data is not finite");

    const Grid& g = u0.grid;
    const double eps = 1e-12 * std::max(1.0, std::abs(cfg.t_end - cfg.t_start));

    TrajectoryRecord traj;
    Field u = u0;
    double t = cfg.t_start;

    SpectralField F = forward_transform(u);
    double gradsq = gradient_norm_sq(F);
    if (!(cfg.grad_max > std::sqrt(gradsq)))
        throw ConfigError("evolve: grad_max must exceed ||grad u0||");

    // Next uniform boundaries for rows and snapshots; stepping is clipped to
    // them so recorded times form exact uniform grids.
    long krec = 1, ksnap = 1;
    auto next_record = [&] {
        return sched.record_every > 0.0 ? cfg.t_start + krec * sched.record_every
                                        : std::numeric_limits<double>::infinity();
    };
    auto next_snap = [&] {
        return sched.snap_every > 0.0 ? cfg.t_start + ksnap * sched.snap_every
                                      : std::numeric_limits<double>::infinity();
    };

    traj.rows.push_back(diagnostics_row(u, F, t, 0.0, cfg.grad_ref));
    traj.snapshots.push_back({t, u});

    bool first = true;
    while (true) {
        if (t >= cfg.t_end - eps) {
            traj.termination = Termination::reached_t_end;
            break;
        }
        double gradn = std::sqrt(gradsq);
        if (gradn > cfg.grad_max) {
            traj.termination = Termination::blowup_detected;
            traj.detail = "grad_max";
            break;
        }
        double mass = 0.0;
        for (const auto& c : F.c) mass += std::norm(c);
        mass *= g.cell_volume();
        if (gradn > 0.0 && std::sqrt(mass) / gradn < 8.0 * g.spacing()) {
            traj.termination = Termination::blowup_detected;
            traj.detail = "resolution_stop";
            break;
        }

        double dt_adapt = cfg.dt0;
        if (gradsq > 0.0) dt_adapt = std::min(cfg.dt0, cfg.adapt_c / gradsq);
        if (dt_adapt < cfg.dt_min) {
            if (first) throw ConfigError("evolve: dt underflow before any step");
            traj.termination = Termination::dt_underflow;
            traj.detail = "dt_underflow";
            break;
        }
        double dt = std::min({dt_adapt, cfg.t_end - t,
                              next_record() - t, next_snap() - t});
        dt = std::max(dt, 1e-15);

        try {
            u = step(u, dt, cfg.dealias);
        } catch (const NumericalBlowupError&) {
            traj.termination = Termination::blowup_detected;
            traj.detail = "non_finite";
            break;
        }
        t += dt;
        first = false;
        F = forward_transform(u);
        gradsq = gradient_norm_sq(F);

        bool rec_due = sched.record_every <= 0.0 || t >= next_record() - eps;
        if (t >= next_record() - eps) ++krec;
        if (rec_due) traj.rows.push_back(diagnostics_row(u, F, t, dt, cfg.grad_ref));
        if (t >= next_snap() - eps) {
            traj.snapshots.push_back({t, u});
            ++ksnap;
        }
    }

    // Final state always recorded.
    if (traj.rows.empty() || traj.rows.back().t < t - eps)
        traj.rows.push_back(diagnostics_row(u, F, t, 0.0, cfg.grad_ref));
    if (traj.snapshots.back().t < t - eps) traj.snapshots.push_back({t, u});
    return traj;
}

}  // namespace nlslab
