#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nlslab/diagnostics.hpp"
#include "nlslab/evolution.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/lab.hpp"
#include "nlslab/profile_fit.hpp"
#include "nlslab/snapshot.hpp"
#include "nlslab/spectral.hpp"
#include "nlslab/symmetry.hpp"

using nlohmann::json;
using namespace nlslab;

namespace {

GroundState reference_q(const Grid& grid) {
    return grid.dim() == 1 ? closed_form_q_1d(grid) : solve_ground_state(grid, 1e-10);
}

int cmd_ground_state(int dim, double L, unsigned N, double tol,
                     const std::string& out) {
    Grid grid(dim, L, N);
    GroundState gs = dim == 1 && tol <= 0.0 ? closed_form_q_1d(grid)
                                            : solve_ground_state(grid, tol > 0.0 ? tol : 1e-10);
    if (!out.empty()) write_snapshot(out, gs.q, 0.0);
    json j{{"mass", gs.mass},
           {"grad_norm_sq", gs.grad_norm_sq},
           {"residual", gs.residual},
           {"energy", gs.energy},
           {"peak", gs.peak},
           {"iterations", gs.iterations}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_evolve(const std::string& in, double t_end, double dt0, double adapt_c,
               double grad_max, const std::string& csv, double snap_every,
               double record_every, bool use_dealias, const std::string& out_dir) {
    Snapshot snap = read_snapshot(in);
    GroundState qref = reference_q(snap.field.grid);
    SolverConfig cfg;
    cfg.t_start = snap.t;
    cfg.t_end = t_end;
    cfg.dt0 = dt0;
    cfg.adapt_c = adapt_c;
    cfg.grad_max = grad_max;
    cfg.dealias = use_dealias;
    cfg.grad_ref = std::sqrt(qref.grad_norm_sq);
    DiagnosticsSchedule sched{record_every, snap_every};
    TrajectoryRecord traj = evolve(snap.field, cfg, sched);
    if (!csv.empty()) write_csv(csv, traj.rows, snap.field.grid.dim());
    namespace fs = std::filesystem;
    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "evolve.%04zu.nlsf", i);
            write_snapshot((fs::path(out_dir) / name).string(),
                           traj.snapshots[i].field, traj.snapshots[i].t);
        }
    }
    json j{{"termination", to_string(traj.termination)},
           {"detail", traj.detail},
           {"steps", traj.rows.size()},
           {"t_final", traj.rows.back().t}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_symmetry_check(const std::string& in, const std::string& op,
                       std::vector<double> x0, std::vector<double> xi0,
                       double lambda, double t0, double theta, double t) {
    Snapshot snap = read_snapshot(in);
    const Field& u = snap.field;
    x0.resize(2, 0.0);
    xi0.resize(2, 0.0);
    double n0 = l2_norm(u);
    Field fwd(u.grid), back(u.grid);
    if (op == "group") {
        GroupElement g{{x0[0], x0[1]}, {xi0[0], xi0[1]}, lambda, t0};
        fwd = apply_group(g, u);
        // inverse element, up to the global phase of the composition law
        GroupElement ginv;
        ginv.lambda0 = 1.0 / lambda;
        ginv.t0 = -t0 / (lambda * lambda);
        for (int a = 0; a < 2; ++a) {
            ginv.xi0[a] = -lambda * xi0[a];
            ginv.x0[a] = -(x0[a] - 2.0 * (t0 / (lambda * lambda)) * (-lambda * xi0[a])) / lambda;
        }
        auto comp = compose(ginv, GroupElement{{x0[0], x0[1]}, {xi0[0], xi0[1]}, lambda, t0});
        back = apply_group(ginv, fwd);
        cplx ph(std::cos(comp.phase), std::sin(comp.phase));
        for (auto& z : back.v) z *= std::conj(ph);
    } else if (op == "galilean") {
        fwd = galilean(u, t, {xi0[0], xi0[1]});
        back = galilean(fwd, t, {-xi0[0], -xi0[1]});
    } else if (op == "scale") {
        fwd = scale_sym(u, lambda);
        back = scale_sym(fwd, 1.0 / lambda);
    } else if (op == "phase") {
        fwd = phase_sym(u, theta);
        back = phase_sym(fwd, -theta);
    } else if (op == "pconf") {
        fwd = pseudo_conformal(u, t);
        back = pseudo_conformal(fwd, 1.0 / t);
    } else {
        throw ConfigError("unknown symmetry op: " + op);
    }
    double unitarity = std::abs(l2_norm(fwd) - n0);
    Field diff(u.grid);
    for (std::size_t i = 0; i < u.v.size(); ++i) diff.v[i] = back.v[i] - u.v[i];
    double roundtrip = l2_norm(diff);
    json j{{"op", op}, {"unitarity_defect", unitarity}, {"roundtrip_defect", roundtrip}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_diagnose(const std::string& in, const std::string& op, double R, double K,
                 double C) {
    Snapshot snap = read_snapshot(in);
    const Field& u = snap.field;
    TruncationParams trunc{R, K, C};
    GroundState qref = reference_q(u.grid);
    json j;
    auto want = [&](const char* name) { return op == "all" || op == name; };
    if (want("conserved")) {
        ConservedSet c = conserved(u);
        j["mass"] = c.mass;
        j["energy"] = c.energy;
        j["momentum_x"] = c.momentum_x;
        if (u.grid.dim() == 2) j["momentum_y"] = c.momentum_y;
    }
    if (want("variance")) j["variance"] = variance(u);
    if (want("grad_norm_sq")) j["grad_norm_sq"] = gradient_norm_sq(u);
    if (want("sharp_gn_defect")) j["sharp_gn_defect"] = sharp_gn_defect(u, qref.mass);
    if (want("morawetz_action")) j["morawetz_action"] = morawetz_action(u, trunc);
    if (want("truncated_energy")) {
        j["truncated_energy"] = truncated_energy(u, trunc);
        j["truncated_grad_norm_sq"] = truncated_grad_norm_sq(u, trunc);
    }
    if (want("commutator_error")) j["commutator_error"] = commutator_error(u, trunc);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_fit_profile(const std::string& in, const std::string& qpath) {
    Snapshot snap = read_snapshot(in);
    GroundState qref = [&] {
        if (qpath.empty()) return reference_q(snap.field.grid);
        Snapshot qs = read_snapshot(qpath);
        double n = l2_norm(qs.field);
        GroundState g{qs.field, qs.field.grid.dim(), n * n,
                      gradient_norm_sq(qs.field), 0.0, 0.0, 0.0, 0};
        return g;
    }();
    BubbleFit fit = fit_bubble(snap.field, qref);
    json j{{"lambda", fit.lambda},
           {"gamma", fit.gamma},
           {"x0", {fit.x0[0], fit.x0[1]}},
           {"distance", fit.distance},
           {"converged", fit.converged}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_concentration(const std::string& prefix, double T, double exponent,
                      double eps) {
    namespace fs = std::filesystem;
    std::vector<StoredSnapshot> snaps;
    for (int i = 0; i < 100000; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, ".%04d.nlsf", i);
        std::string path = prefix + name;
        if (!fs::exists(path)) break;
        Snapshot s = read_snapshot(path);
        snaps.push_back({s.t, std::move(s.field)});
    }
    if (snaps.empty()) throw ConfigError("no snapshots found at prefix " + prefix);
    GroundState qref = reference_q(snaps.front().field.grid);
    ConcentrationTable table =
        concentration_scan(snaps, true, T, exponent, eps, qref.mass);
    std::cout << "t,center_x,center_y,radius,mass\n";
    for (const auto& r : table.rows)
        std::printf("%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.center[0], r.center[1],
                    r.radius, r.mass);
    std::cout << "# flag: " << (table.flag ? "true" : "false") << "\n";
    return 0;
}

int cmd_report(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open report: " + path);
    json j = json::parse(is);
    std::cout << "| key | value |\n|---|---|\n";
    for (auto it = j.begin(); it != j.end(); ++it)
        std::cout << "| " << it.key() << " | " << it.value().dump() << " |\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nlslab: pseudospectral laboratory for the mass-critical NLS"};
    app.require_subcommand(1);

    // ground-state
    int gs_dim = 1;
    double gs_L = 30.0, gs_tol = 1e-10;
    unsigned gs_N = 1024;
    std::string gs_out;
    auto* gs = app.add_subcommand("ground-state", "compute the ground state Q");
    gs->add_option("--dim", gs_dim)->check(CLI::IsMember({1, 2}));
    gs->add_option("--L", gs_L);
    gs->add_option("--N", gs_N);
    gs->add_option("--tol", gs_tol);
    gs->add_option("--out", gs_out);

    // evolve
    std::string ev_in, ev_csv, ev_outdir;
    double ev_tend = 1.0, ev_dt0 = 1e-3, ev_adapt = 0.1, ev_gmax = 1e6;
    double ev_snap = 0.0, ev_rec = 0.0;
    bool ev_dealias = false;
    auto* ev = app.add_subcommand("evolve", "integrate the equation from a snapshot");
    ev->add_option("--in", ev_in)->required();
    ev->add_option("--t-end", ev_tend)->required();
    ev->add_option("--dt0", ev_dt0);
    ev->add_option("--adapt-c", ev_adapt);
    ev->add_option("--grad-max", ev_gmax);
    ev->add_option("--csv", ev_csv);
    ev->add_option("--snap-every", ev_snap);
    ev->add_option("--record-every", ev_rec);
    ev->add_option("--out-dir", ev_outdir);
    ev->add_flag("--dealias", ev_dealias);

    // blowup (experiment spec files)
    std::vector<std::string> bl_specs;
    auto* bl = app.add_subcommand("blowup", "run experiment spec files");
    bl->add_option("specs", bl_specs)->required();

    // fit-profile
    std::string fp_in, fp_q;
    auto* fp = app.add_subcommand("fit-profile", "fit (lambda, gamma, x0) against Q");
    fp->add_option("--in", fp_in)->required();
    fp->add_option("--q", fp_q);

    // concentration
    std::string co_prefix;
    double co_T = 0.0, co_exp = 2.0 / 3.0, co_eps = 0.05;
    auto* co = app.add_subcommand("concentration", "mass-in-window scan over snapshots");
    co->add_option("--traj", co_prefix)->required();
    co->add_option("--T", co_T)->required();
    co->add_option("--exp", co_exp);
    co->add_option("--eps", co_eps);

    // symmetry-check
    std::string sy_in, sy_op;
    std::vector<double> sy_x0, sy_xi0;
    double sy_lambda = 1.0, sy_t0 = 0.0, sy_theta = 0.0, sy_t = 1.0;
    auto* sy = app.add_subcommand("symmetry-check", "unitarity/roundtrip defects");
    sy->add_option("--in", sy_in)->required();
    sy->add_option("--op", sy_op)
        ->required()
        ->check(CLI::IsMember({"group", "galilean", "scale", "phase", "pconf"}));
    sy->add_option("--x0", sy_x0);
    sy->add_option("--xi0", sy_xi0);
    sy->add_option("--lambda", sy_lambda);
    sy->add_option("--t0", sy_t0);
    sy->add_option("--theta", sy_theta);
    sy->add_option("--t", sy_t);

    // diagnose
    std::string di_in, di_op = "all";
    double di_R = 10.0, di_K = 10.0, di_C = 8.0;
    auto* di = app.add_subcommand("diagnose", "evaluate functionals on a snapshot");
    di->add_option("--in", di_in)->required();
    di->add_option("--op", di_op);
    di->add_option("--R", di_R);
    di->add_option("--K", di_K);
    di->add_option("--C", di_C);

    // report
    std::string rp_path;
    auto* rp = app.add_subcommand("report", "re-render a report JSON as markdown");
    rp->add_option("json", rp_path)->required();

    try {
        app.parse(argc, argv);
        if (gs->parsed()) return cmd_ground_state(gs_dim, gs_L, gs_N, gs_tol, gs_out);
        if (ev->parsed())
            return cmd_evolve(ev_in, ev_tend, ev_dt0, ev_adapt, ev_gmax, ev_csv,
                              ev_snap, ev_rec, ev_dealias, ev_outdir);
        if (bl->parsed()) {
            for (const auto& rep : run_batch(bl_specs))
                std::cout << rep.to_json() << "\n";
            return 0;
        }
        if (fp->parsed()) return cmd_fit_profile(fp_in, fp_q);
        if (co->parsed()) return cmd_concentration(co_prefix, co_T, co_exp, co_eps);
        if (sy->parsed())
            return cmd_symmetry_check(sy_in, sy_op, sy_x0, sy_xi0, sy_lambda, sy_t0,
                                      sy_theta, sy_t);
        if (di->parsed()) return cmd_diagnose(di_in, di_op, di_R, di_K, di_C);
        if (rp->parsed()) return cmd_report(rp_path);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const GridMismatchError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const IOError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
