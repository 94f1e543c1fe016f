#include "nlslab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nlslab/snapshot.hpp"
#include "nlslab/spectral.hpp"
#include "nlslab/symmetry.hpp"

namespace nlslab {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentSpec parse_spec_text(const std::string& text, const std::string& origin) {
    ExperimentSpec spec;
    bool have_initial = false;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ": expected key = value at line " +
                              std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        auto num = [&] {
            try {
                return std::stod(val);
            } catch (...) {
                throw ConfigError(origin + ": bad numeric value for " + key);
            }
        };
        if (key == "name") spec.name = val;
        else if (key == "dim") spec.dim = static_cast<int>(num());
        else if (key == "grid_L") spec.grid_L = num();
        else if (key == "grid_N") spec.grid_N = static_cast<std::size_t>(num());
        else if (key == "initial") {
            if (have_initial) throw ConfigError(origin + ": multiple initial descriptors");
            have_initial = true;
            if (val == "ground_state") spec.initial = InitialKind::ground_state;
            else if (val == "scaled_ground_state")
                spec.initial = InitialKind::scaled_ground_state;
            else if (val == "gaussian") spec.initial = InitialKind::gaussian;
            else if (val == "pconf_blowup") spec.initial = InitialKind::pconf_blowup;
            else if (val == "snapshot") spec.initial = InitialKind::snapshot;
            else throw ConfigError(origin + ": unknown initial descriptor " + val);
        }
        else if (key == "alpha") spec.alpha = num();
        else if (key == "amplitude") spec.amplitude = num();
        else if (key == "width_len") spec.width_len = num();
        else if (key == "t_start_s") spec.pconf_t_start = num();
        else if (key == "snapshot_path") spec.snapshot_path = val;
        else if (key == "t_end_s") spec.solver.t_end = num();
        else if (key == "dt0_s") spec.solver.dt0 = num();
        else if (key == "dt_min_s") spec.solver.dt_min = num();
        else if (key == "adapt_c") spec.solver.adapt_c = num();
        else if (key == "dealias") spec.solver.dealias = (val == "on" || val == "true");
        else if (key == "grad_max") spec.solver.grad_max = num();
        else if (key == "record_every_s") spec.record_every_s = num();
        else if (key == "snap_every_s") spec.snap_every_s = num();
        else if (key == "diag_R_len") spec.trunc.R = num();
        else if (key == "diag_K") spec.trunc.K = num();
        else if (key == "diag_C") spec.trunc.C = num();
        else if (key == "fit_last") spec.fit_last = static_cast<int>(num());
        else if (key == "seed") spec.seed = static_cast<std::uint64_t>(num());
        else if (key == "out_dir") spec.out_dir = val;
        else throw ConfigError(origin + ": unknown key " + key);
    }
    if (!have_initial) throw ConfigError(origin + ": missing initial descriptor");
    if (spec.initial == InitialKind::scaled_ground_state &&
        !(spec.alpha > -0.5 && spec.alpha < 0.5))
        throw ConfigError(origin + ": alpha must lie in (-0.5, 0.5)");
    if (spec.initial == InitialKind::snapshot && spec.snapshot_path.empty())
        throw ConfigError(origin + ": snapshot initial requires snapshot_path");
    return spec;
}

ExperimentSpec parse_spec_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open spec file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_spec_text(ss.str(), path);
}

ScaleSeries scale_series(const std::vector<DiagRow>& rows) {
    ScaleSeries s;
    for (const auto& r : rows)
        if (r.lambda > 0.0) {
            s.t.push_back(r.t);
            s.lambda.push_back(r.lambda);
        }
    return s;
}

namespace {

// Indices of the final decade of focusing: lambda within a factor 10 of the
// series minimum, which must sit at the tail.
std::vector<std::size_t> final_decade(const ScaleSeries& s) {
    if (s.t.size() < 10) throw NotApplicableError("scale series too short");
    double lmin = *std::min_element(s.lambda.begin(), s.lambda.end());
    double lmax = *std::max_element(s.lambda.begin(), s.lambda.end());
    if (!(lmin < 0.75 * lmax))
        throw NotApplicableError("series is not focusing");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < s.t.size(); ++i)
        if (s.lambda[i] <= 10.0 * lmin) idx.push_back(i);
    if (idx.size() < 5) throw NotApplicableError("too few rows in the final decade");
    // lambda must decrease over the selected window.
    if (s.lambda[idx.front()] <= s.lambda[idx.back()])
        throw NotApplicableError("lambda not decreasing over the final decade");
    return idx;
}

}  // namespace

double estimate_blowup_time(const ScaleSeries& series) {
    auto idx = final_decade(series);
    // Least-squares fit of the scaling-law ansatz lambda^2 = a (T - t),
    // written as lambda^2 = alpha + beta t with T = -alpha/beta.  Residuals
    // are weighted by 1/lambda^4 (relative error in lambda^2): the deepest
    // rows carry the information about T, and unweighted residuals would let
    // the shallow end of the decade bias T by a multiple of the smallest
    // remaining T - t, which is fatal to any later log(T - t) analysis.
    double sw = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (auto i : idx) {
        double y = series.lambda[i] * series.lambda[i];
        double w = 1.0 / (y * y);
        sw += w;
        st += w * series.t[i];
        sy += w * y;
        stt += w * series.t[i] * series.t[i];
        sty += w * series.t[i] * y;
    }
    double beta = (sw * sty - st * sy) / (sw * stt - st * st);
    double alpha = (sy - beta * st) / sw;
    if (!(beta < 0.0)) throw NotApplicableError("scaling-law fit is not focusing");
    return -alpha / beta;
}

LogLogReport loglog_fit(const ScaleSeries& series, double T) {
    auto idx = final_decade(series);
    std::vector<double> lx, ly, corr;
    for (auto i : idx) {
        double dt = T - series.t[i];
        if (!(dt > 0.0)) continue;
        double lnln = std::log(std::abs(std::log(dt)));
        lx.push_back(std::log(dt));
        ly.push_back(std::log(series.lambda[i]));
        corr.push_back(lnln > 0.1 ? 0.5 * (std::log(dt) - std::log(lnln))
                                  : std::numeric_limits<double>::quiet_NaN());
    }
    if (lx.size() < 5) throw NotApplicableError("loglog_fit: too few usable rows");
    double n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    LogLogReport rep{};
    rep.beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double a = (sy - rep.beta * sx) / n;
    double pr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double r = ly[i] - (a + rep.beta * lx[i]);
        pr += r * r;
    }
    rep.power_residual = std::sqrt(pr / n);

    // Corrected model: power law in the corrected abscissa,
    // lambda ~ ((T-t)/ln|ln(T-t)|)^beta, fitted with the same two degrees of
    // freedom as the pure power law so the residual comparison is fair.
    std::vector<double> cx, cy;
    for (std::size_t i = 0; i < lx.size(); ++i)
        if (std::isfinite(corr[i])) {
            cx.push_back(2.0 * corr[i]);  // log((T-t)/lnln)
            cy.push_back(ly[i]);
        }
    if (cx.size() < 5) {
        rep.corrected_residual = std::numeric_limits<double>::infinity();
    } else {
        double cn = static_cast<double>(cx.size());
        double csx = 0.0, csy = 0.0, csxx = 0.0, csxy = 0.0;
        for (std::size_t i = 0; i < cx.size(); ++i) {
            csx += cx[i];
            csy += cy[i];
            csxx += cx[i] * cx[i];
            csxy += cx[i] * cy[i];
        }
        double cb = (cn * csxy - csx * csy) / (cn * csxx - csx * csx);
        double ca = (csy - cb * csx) / cn;
        double cr = 0.0;
        for (std::size_t i = 0; i < cx.size(); ++i) {
            double r = cy[i] - (ca + cb * cx[i]);
            cr += r * r;
        }
        rep.corrected_residual = std::sqrt(cr / cn);
    }
    rep.loglog_consistent = rep.beta >= 0.45 && rep.beta <= 0.55 &&
                            rep.corrected_residual < rep.power_residual;
    return rep;
}

void write_csv(const std::string& path, const std::vector<DiagRow>& rows, int dim) {
    std::ofstream os(path);
    if (!os) throw IOError("cannot open csv for writing: " + path);
    os << "t,dt,mass,energy,momentum_x";
    if (dim == 2) os << ",momentum_y";
    os << ",grad_norm_sq,variance,lambda,linf\n";
    char buf[64];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g%c", v, sep);
        os << buf;
    };
    for (const auto& r : rows) {
        put(r.t, ','); put(r.dt, ','); put(r.mass, ','); put(r.energy, ',');
        put(r.momentum_x, ',');
        if (dim == 2) put(r.momentum_y, ',');
        put(r.grad_norm_sq, ','); put(r.variance, ','); put(r.lambda, ',');
        put(r.linf, '\n');
    }
}

std::string RunReport::to_json() const {
    nlohmann::json j;
    j["schema"] = "nlslab.run_report/1";
    j["name"] = name;
    j["termination"] = termination;
    j["detail"] = detail;
    j["mass_drift"] = mass_drift;
    j["energy_drift"] = energy_drift;
    j["momentum_max"] = momentum_max;
    j["initial_energy"] = initial_energy;
    j["lambda_first"] = lambda_first;
    j["lambda_min"] = lambda_min;
    if (T_est) j["T_est"] = *T_est;
    if (loglog) {
        j["loglog"] = {{"beta", loglog->beta},
                       {"power_residual", loglog->power_residual},
                       {"corrected_residual", loglog->corrected_residual},
                       {"consistent", loglog->loglog_consistent}};
    }
    j["fit_times"] = fit_times;
    j["fit_distances"] = fit_distances;
    j["seed"] = seed;
    j["wall_time_s"] = wall_time_s;
    return j.dump(2);
}

RunResult run_experiment(const ExperimentSpec& spec, bool write_outputs) {
    auto t_begin = std::chrono::steady_clock::now();
    Grid grid(spec.dim, spec.grid_L, spec.grid_N);

    GroundState qref = spec.dim == 1 ? closed_form_q_1d(grid)
                                     : solve_ground_state(grid, 1e-10);

    SolverConfig cfg = spec.solver;
    cfg.grad_ref = std::sqrt(qref.grad_norm_sq);

    Field u0(grid);
    switch (spec.initial) {
        case InitialKind::ground_state:
            u0 = qref.q;
            break;
        case InitialKind::scaled_ground_state: {
            u0 = qref.q;
            for (auto& z : u0.v) z *= 1.0 + spec.alpha;
            break;
        }
        case InitialKind::gaussian: {
            const std::size_t N = grid.points_per_axis();
            for (std::size_t i = 0; i < u0.v.size(); ++i) {
                double x = grid.coord(spec.dim == 1 ? i : i / N);
                double y = spec.dim == 1 ? 0.0 : grid.coord(i % N);
                u0.v[i] = cplx(spec.amplitude *
                                   std::exp(-(x * x + y * y) /
                                            (spec.width_len * spec.width_len)),
                               0.0);
            }
            break;
        }
        case InitialKind::pconf_blowup:
            if (spec.dim != 1)
                throw ConfigError("pconf_blowup initial data requires dim = 1");
            u0 = analytic_minimal_blowup_1d(grid, spec.pconf_t_start);
            cfg.t_start = spec.pconf_t_start;
            break;
        case InitialKind::snapshot: {
            Snapshot snap = read_snapshot(spec.snapshot_path);
            if (snap.field.grid != grid)
                throw ConfigError("snapshot grid does not match spec grid");
            u0 = snap.field;
            cfg.t_start = snap.t;
            break;
        }
    }

    DiagnosticsSchedule sched{spec.record_every_s, spec.snap_every_s};
    TrajectoryRecord traj = evolve(u0, cfg, sched);

    RunReport rep;
    rep.name = spec.name;
    rep.seed = spec.seed;
    rep.termination = to_string(traj.termination);
    rep.detail = traj.detail;

    const DiagRow& r0 = traj.rows.front();
    rep.initial_energy = r0.energy;
    double eref = std::max(std::abs(r0.energy), 1e-6 * std::max(r0.grad_norm_sq, 1.0));
    for (const auto& r : traj.rows) {
        rep.mass_drift = std::max(rep.mass_drift,
                                  std::abs(r.mass - r0.mass) / r0.mass);
        rep.energy_drift = std::max(rep.energy_drift,
                                    std::abs(r.energy - r0.energy) / eref);
        rep.momentum_max = std::max({rep.momentum_max, std::abs(r.momentum_x),
                                     std::abs(r.momentum_y)});
    }
    ScaleSeries series = scale_series(traj.rows);
    if (!series.lambda.empty()) {
        rep.lambda_first = series.lambda.front();
        rep.lambda_min = *std::min_element(series.lambda.begin(), series.lambda.end());
    }
    if (traj.termination == Termination::blowup_detected) {
        try {
            double T = estimate_blowup_time(series);
            rep.T_est = T;
            rep.loglog = loglog_fit(series, T);
        } catch (const NotApplicableError&) {
        }
    }
    int nfit = std::min<int>(spec.fit_last, static_cast<int>(traj.snapshots.size()));
    for (int i = static_cast<int>(traj.snapshots.size()) - nfit;
         i < static_cast<int>(traj.snapshots.size()); ++i) {
        if (i < 0) continue;
        const auto& s = traj.snapshots[i];
        if (l2_norm(s.field) <= 0.0) continue;
        BubbleFit fit = fit_bubble(s.field, qref);
        rep.fit_times.push_back(s.t);
        rep.fit_distances.push_back(fit.distance);
    }

    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
            .count();

    if (write_outputs) {
        namespace fs = std::filesystem;
        fs::path dir(spec.out_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        write_csv((dir / (spec.name + ".csv")).string(), traj.rows, spec.dim);
        for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
            char fname[64];
            std::snprintf(fname, sizeof fname, "%s.%04zu.nlsf", spec.name.c_str(), i);
            write_snapshot((dir / fname).string(), traj.snapshots[i].field,
                           traj.snapshots[i].t);
        }
        std::ofstream os(dir / (spec.name + ".report.json"));
        if (!os) throw IOError("cannot write report json");
        os << rep.to_json() << "\n";
    }
    return RunResult{std::move(rep), std::move(traj)};
}

std::vector<RunReport> run_batch(const std::vector<std::string>& spec_paths) {
    std::size_t workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("NLSLAB_THREADS")) {
        long v = std::atol(env);
        if (v > 0) workers = static_cast<std::size_t>(v);
    }
    workers = std::max<std::size_t>(1, std::min(workers, spec_paths.size()));

    std::vector<RunReport> reports(spec_paths.size());
    std::vector<std::exception_ptr> errors(spec_paths.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= spec_paths.size()) return;
            try {
                reports[i] = run_experiment(parse_spec_file(spec_paths[i])).report;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return reports;
}

}  // namespace nlslab
