// Command-line driver: every subcommand is a thin wrapper over the library
// and writes plot-ready CSV / key=value reports with a reproducible manifest
// header. Exit codes: 0 success, 1 validation, 2 numerical failure, 3 I/O.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rabipiston/rabipiston.hpp"

namespace rp = rabipiston;

namespace {

struct CommonArgs {
    std::string config;
    std::vector<std::string> sets;
    std::string out = ".";
    unsigned jobs = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "configuration file (key = value lines)");
    cmd->add_option("--set", args.sets, "override a configuration key, e.g. --set mass_ratio=250");
    cmd->add_option("--out", args.out, "output directory (created if missing)");
    cmd->add_option("--jobs", args.jobs, "worker threads for surface builds and scans (0 = auto)");
}

rp::SystemParams load_params(const CommonArgs& args) {
    rp::SystemParams p;
    if (!args.config.empty()) p = rp::load_config(args.config);
    for (const auto& s : args.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw rp::ValidationError("--set expects key=value, got '" + s + "'");
        rp::apply_override(p, rp::detail::trim(s.substr(0, eq)),
                           rp::detail::trim(s.substr(eq + 1)));
    }
    p.validate();
    return p;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(args.out, ec);
    if (ec) throw rp::IoError("cannot create output directory '" + args.out + "'");
    return (std::filesystem::path(args.out) / name).string();
}

std::string fmt(double v) { return rp::detail::fmt12(v); }

rp::ControlSchedule make_schedule(const std::string& kind, double tf, double c1, double c2) {
    if (kind == "reference") return rp::ControlSchedule::reference(tf);
    if (kind == "quintic") return rp::ControlSchedule::quintic(tf, c1, c2);
    throw rp::ValidationError("unknown schedule kind '" + kind + "'");
}

void write_eval_log(const std::string& path, const std::vector<rp::EvalRecord>& log,
                    const std::vector<std::string>& header) {
    std::ofstream out(path);
    if (!out) throw rp::IoError("cannot write '" + path + "'");
    for (const auto& h : header) out << h << "\n";
    out << "stage,c1,c2,xi2,evaluations\n";
    long count1 = 0, count2 = 0;
    for (const auto& e : log) {
        const long idx = e.stage == 1 ? ++count1 : ++count2;
        out << e.stage << "," << fmt(e.c1) << "," << fmt(e.c2) << "," << fmt(e.xi2) << "," << idx
            << "\n";
    }
}

int cmd_ground_state(const CommonArgs& common, double a, double phi) {
    const auto params = load_params(common);
    rp::GroundStateOptions opt;
    const auto gs = rp::ground_state(a, phi, params, opt);
    const double pressure = rp::pressure_exact(gs.field, params, a);
    const auto manifest = rp::manifest_lines("ground-state", params, common.sets,
                                             {{"a", fmt(a)}, {"phi", fmt(phi)}});
    rp::write_field_csv(out_path(common, "ground_state_field.csv"), gs.field, manifest);
    rp::write_kv(out_path(common, "ground_state.txt"),
                 {{"a", fmt(a)},
                  {"phi", fmt(phi)},
                  {"energy", fmt(gs.energy)},
                  {"pressure", fmt(pressure)},
                  {"magnetization", fmt(rp::magnetization(gs.field))},
                  {"iterations", std::to_string(gs.iterations)},
                  {"residual", fmt(gs.residual)}},
                 manifest);
    std::cout << "E_gs = " << gs.energy << "  P_st = " << pressure
              << "  S = " << rp::magnetization(gs.field) << "\n";
    return 0;
}

int cmd_surface(const CommonArgs& common, double a_min, double a_max, int na, double phi_min,
                double phi_max, int nphi) {
    const auto params = load_params(common);
    rp::SurfaceBuildOptions opt;
    opt.jobs = common.jobs;
    const auto surf = rp::build_surface(a_min, a_max, na, phi_min, phi_max, nphi, params, opt);
    const auto manifest = rp::manifest_lines(
        "surface", params, common.sets,
        {{"a_range", fmt(a_min) + " " + fmt(a_max) + " x " + std::to_string(na)},
         {"phi_range", fmt(phi_min) + " " + fmt(phi_max) + " x " + std::to_string(nphi)}});
    rp::save_surface(out_path(common, "surface.txt"), surf, manifest);
    rp::SurfaceInterpolator it(surf);
    std::cout << "surface " << na << "x" << nphi << " written; a_eq(0) = "
              << rp::equilibrium_position(it, params.spring_k, 0.0) << ", a_eq(pi/2) = "
              << rp::equilibrium_position(it, params.spring_k, std::numbers::pi / 2) << "\n";
    return 0;
}

int cmd_simulate(const CommonArgs& common, const std::string& schedule_kind, double tf, double c1,
                 double c2, const std::string& mode, const std::string& surface_path) {
    const auto params = load_params(common);
    const auto schedule = make_schedule(schedule_kind, tf, c1, c2);

    std::optional<rp::StationarySurface> surface;
    std::optional<rp::SurfaceInterpolator> interp;
    if (!surface_path.empty()) {
        surface = rp::load_surface(surface_path);
        interp.emplace(*surface);
    }

    const auto manifest = rp::manifest_lines("simulate", params, common.sets,
                                             {{"schedule", schedule.describe()},
                                              {"tf", fmt(tf)},
                                              {"mode", mode}});

    rp::PistonTrajectory traj;
    double a0 = 0, a_final = 0, v_final = 0;
    if (mode == "exact") {
        rp::ExactSimOptions opt;
        if (interp) a0 = rp::equilibrium_position(*interp, params.spring_k, schedule.phi(0.0));
        else a0 = rp::equilibrium_position_exact(params, schedule.phi(0.0));
        opt.a0 = a0;
        auto run = rp::simulate_exact(schedule, tf, params, opt);
        traj = std::move(run.trajectory);
        a_final = run.a_final;
        v_final = run.v_final;
    } else if (mode == "surrogate") {
        if (!interp)
            throw rp::ValidationError("surrogate mode requires --surface with a tabulated "
                                      "stationary-pressure file");
        rp::SurrogateSimOptions opt;
        auto run = rp::simulate_surrogate(schedule, tf, *interp, params, opt);
        traj = std::move(run.trajectory);
        a0 = run.a0;
        a_final = run.a_final;
        v_final = run.v_final;
    } else {
        throw rp::ValidationError("unknown mode '" + mode + "' (use exact or surrogate)");
    }

    rp::write_trajectory_csv(out_path(common, "trajectory.csv"), traj, manifest);

    std::vector<std::pair<std::string, std::string>> summary{
        {"schedule", schedule.describe()}, {"tf", fmt(tf)},       {"mode", mode},
        {"a_start", fmt(a0)},              {"a_final", fmt(a_final)}, {"v_final", fmt(v_final)}};
    if (interp) {
        const double target =
            rp::equilibrium_position(*interp, params.spring_k, std::numbers::pi / 2);
        summary.emplace_back("a_target", fmt(target));
        summary.emplace_back("xi2", fmt(rp::terminal_error(a_final, v_final, target)));
    }
    rp::write_kv(out_path(common, "simulate.txt"), summary, manifest);

    if (mode == "exact" && interp) {
        const auto ledger = rp::work_report(traj, *interp);
        rp::write_kv(out_path(common, "work_report.txt"),
                     {{"w_p", fmt(ledger.w_p)},
                      {"w_p_st", fmt(ledger.w_p_st)},
                      {"dw_p", fmt(ledger.dw_p)},
                      {"e_st", fmt(ledger.e_st)},
                      {"w_phi_st", fmt(ledger.w_phi_st)}},
                     rp::manifest_lines("work-report", params, common.sets,
                                        {{"closure_residual", fmt(ledger.closure_residual())}}));
    }
    std::cout << "a(tf) = " << a_final << ", v(tf) = " << v_final << "\n";
    return 0;
}

int cmd_optimize(const CommonArgs& common, double tf, const std::string& surface_path) {
    const auto params = load_params(common);
    const auto surface = rp::load_surface(surface_path);
    rp::SurfaceInterpolator interp(surface);

    std::vector<rp::EvalRecord> log;
    rp::OptimizeOptions opt;
    opt.jobs = common.jobs;
    opt.log = &log;

    const auto stage1 = rp::optimize_stage1(tf, interp, params, opt);
    std::cout << "stage 1: c = (" << stage1.c1 << ", " << stage1.c2 << "), xi2 = " << stage1.xi2
              << " [" << stage1.evaluations << " surrogate runs]\n";

    std::vector<std::pair<std::string, std::string>> result{
        {"tf", fmt(tf)},
        {"stage1_c1", fmt(stage1.c1)},
        {"stage1_c2", fmt(stage1.c2)},
        {"stage1_xi2", fmt(stage1.xi2)},
        {"stage1_evaluations", std::to_string(stage1.evaluations)}};

    if (stage1.xi2 < rp::kXiThreshold) {
        const auto stage2 = rp::optimize_stage2(stage1.c1, stage1.c2, tf, params, interp, opt);
        std::cout << "stage 2: c = (" << stage2.c1 << ", " << stage2.c2
                  << "), xi2 = " << stage2.xi2 << " [" << stage2.evaluations << " exact runs]\n";
        result.insert(result.end(), {{"stage2_c1", fmt(stage2.c1)},
                                     {"stage2_c2", fmt(stage2.c2)},
                                     {"stage2_xi2", fmt(stage2.xi2)},
                                     {"stage2_evaluations", std::to_string(stage2.evaluations)}});
    } else {
        std::cout << "stage 2 skipped: stage-1 error " << stage1.xi2
                  << " is above the 1e-4 threshold (tf below the speed limit)\n";
        result.emplace_back("stage2_skipped", "true");
        result.emplace_back("stage2_skip_reason", "stage-1 error above threshold");
    }

    const auto manifest =
        rp::manifest_lines("optimize", params, common.sets, {{"tf", fmt(tf)}});
    write_eval_log(out_path(common, "optimize_log.csv"), log, manifest);
    rp::write_kv(out_path(common, "optimize_result.txt"), result, manifest);
    return 0;
}

int cmd_speed_limit(const CommonArgs& common, double tf_min, double tf_max, double tf_step,
                    const std::string& surface_path) {
    if (!(tf_min > 0) || !(tf_max > tf_min) || !(tf_step > 0))
        throw rp::ValidationError("speed-limit: need 0 < tf-min < tf-max and tf-step > 0");
    const auto params = load_params(common);
    const auto surface = rp::load_surface(surface_path);
    rp::SurfaceInterpolator interp(surface);

    std::vector<double> tfs;
    for (double tf = tf_min; tf <= tf_max + 1e-9; tf += tf_step) tfs.push_back(tf);

    rp::OptimizeOptions opt;
    opt.jobs = common.jobs;
    const auto res = rp::speed_limit_scan(tfs, params, interp, opt);

    const auto manifest = rp::manifest_lines(
        "speed-limit", params, common.sets,
        {{"tf_range", fmt(tf_min) + " " + fmt(tf_max) + " step " + fmt(tf_step)}});
    std::ofstream csv(out_path(common, "speed_limit.csv"));
    if (!csv) throw rp::IoError("cannot write speed_limit.csv");
    for (const auto& h : manifest) csv << h << "\n";
    csv << "tf,xi2\n";
    for (const auto& pt : res.points) csv << fmt(pt.t_f) << "," << fmt(pt.xi2) << "\n";

    rp::write_kv(out_path(common, "speed_limit.txt"),
                 {{"t_f_c", fmt(res.t_f_c)}}, manifest);
    std::cout << "t_f_c = " << res.t_f_c << "\n";
    return 0;
}

int cmd_trial(const CommonArgs& common, std::vector<double> deltas, double a_min, double a_max,
              int na, bool numeric) {
    if (deltas.empty()) deltas = {1.0, 2.0, 5.0};
    if (!(a_min > 0) || !(a_max > a_min) || na < 2)
        throw rp::ValidationError("trial: need 0 < a-min < a-max and na >= 2");
    const auto params = load_params(common);
    const auto manifest = rp::manifest_lines(
        "trial", params, common.sets,
        {{"a_range", fmt(a_min) + " " + fmt(a_max) + " x " + std::to_string(na)},
         {"numeric", numeric ? "yes" : "no"}});

    std::ofstream csv(out_path(common, "trial.csv"));
    if (!csv) throw rp::IoError("cannot write trial.csv");
    for (const auto& h : manifest) csv << h << "\n";
    csv << (numeric ? "a,delta,shift,shift_numeric\n" : "a,delta,shift\n");
    for (double delta : deltas) {
        for (int i = 0; i < na; ++i) {
            const double a = a_min + (a_max - a_min) * i / (na - 1);
            const rp::TrialParams tp{params.g_s, delta, a};
            csv << fmt(a) << "," << fmt(delta) << "," << fmt(rp::trial_pressure_shift(tp));
            if (numeric) {
                auto with = params, without = params;
                with.delta = delta;
                without.delta = 0.0;
                const double shift = rp::pressure_stationary(a, 0.0, with).first -
                                     rp::pressure_stationary(a, 0.0, without).first;
                csv << "," << fmt(shift);
            }
            csv << "\n";
        }
    }
    std::cout << "trial sweep written (" << deltas.size() << " deltas x " << na << " lengths)\n";
    return 0;
}

int cmd_work_report(const CommonArgs& common, const std::string& traj_path,
                    const std::string& surface_path) {
    const auto params = load_params(common);
    const auto traj = rp::load_trajectory_csv(traj_path);
    const auto surface = rp::load_surface(surface_path);
    const auto ledger = rp::work_report(traj, surface);
    rp::write_kv(out_path(common, "work_report.txt"),
                 {{"w_p", fmt(ledger.w_p)},
                  {"w_p_st", fmt(ledger.w_p_st)},
                  {"dw_p", fmt(ledger.dw_p)},
                  {"e_st", fmt(ledger.e_st)},
                  {"w_phi_st", fmt(ledger.w_phi_st)}},
                 rp::manifest_lines("work-report", params, common.sets,
                                    {{"trajectory", traj_path},
                                     {"closure_residual", fmt(ledger.closure_residual())}}));
    std::cout << "W_p = " << ledger.w_p << ", dW_p = " << ledger.dw_p
              << ", E_st = " << ledger.e_st << ", W_phi_st = " << ledger.w_phi_st << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Piston-driven Rabi-coupled condensate simulator"};
    app.require_subcommand(1);

    CommonArgs common;

    auto* gs = app.add_subcommand("ground-state", "imaginary-time ground state at fixed (a, phi)");
    double gs_a = 1.8, gs_phi = 0.0;
    add_common(gs, common);
    gs->add_option("--a", gs_a, "piston position")->required();
    gs->add_option("--phi", gs_phi, "Rabi angle");

    auto* surf = app.add_subcommand("surface", "tabulate E_gs and P_st over an (a, phi) grid");
    double s_amin = 1.55, s_amax = 1.90, s_pmin = -0.2 * std::numbers::pi,
           s_pmax = 0.7 * std::numbers::pi;
    int s_na = 71, s_nphi = 91;
    add_common(surf, common);
    surf->add_option("--a-min", s_amin, "lower piston position");
    surf->add_option("--a-max", s_amax, "upper piston position");
    surf->add_option("--na", s_na, "piston-position nodes (>= 8)");
    surf->add_option("--phi-min", s_pmin, "lower Rabi angle");
    surf->add_option("--phi-max", s_pmax, "upper Rabi angle");
    surf->add_option("--nphi", s_nphi, "angle nodes (>= 8)");

    auto* sim = app.add_subcommand("simulate", "run one piston trajectory");
    std::string sim_schedule = "reference", sim_mode = "exact", sim_surface;
    double sim_tf = 60.0, sim_c1 = 0.0, sim_c2 = 0.0;
    add_common(sim, common);
    sim->add_option("--schedule", sim_schedule, "reference | quintic");
    sim->add_option("--tf", sim_tf, "final time")->required();
    sim->add_option("--c1", sim_c1, "quintic control parameter c1");
    sim->add_option("--c2", sim_c2, "quintic control parameter c2");
    sim->add_option("--mode", sim_mode, "exact | surrogate");
    sim->add_option("--surface", sim_surface, "surface file (required for surrogate mode)");

    auto* optc = app.add_subcommand("optimize", "two-stage control optimization");
    double opt_tf = 60.0;
    std::string opt_surface;
    add_common(optc, common);
    optc->add_option("--tf", opt_tf, "final time")->required();
    optc->add_option("--surface", opt_surface, "surface file")->required();

    auto* spd = app.add_subcommand("speed-limit", "stage-1 error versus final time");
    double spd_min = 40.0, spd_max = 70.0, spd_step = 5.0;
    std::string spd_surface;
    add_common(spd, common);
    spd->add_option("--tf-min", spd_min, "scan start");
    spd->add_option("--tf-max", spd_max, "scan end");
    spd->add_option("--tf-step", spd_step, "scan step");
    spd->add_option("--surface", spd_surface, "surface file")->required();

    auto* tri = app.add_subcommand("trial", "closed-form pressure-shift sweep");
    std::vector<double> tri_deltas;
    double tri_amin = 0.2, tri_amax = 3.0;
    int tri_na = 141;
    bool tri_numeric = false;
    add_common(tri, common);
    tri->add_option("--delta", tri_deltas, "Rabi strengths (default 1 2 5)");
    tri->add_option("--a-min", tri_amin, "smallest box length");
    tri->add_option("--a-max", tri_amax, "largest box length");
    tri->add_option("--na", tri_na, "number of lengths");
    tri->add_flag("--numeric", tri_numeric, "add ground-state-solver shifts (slow)");

    auto* wrk = app.add_subcommand("work-report", "work ledger from a stored trajectory");
    std::string wrk_traj, wrk_surface;
    add_common(wrk, common);
    wrk->add_option("--trajectory", wrk_traj, "trajectory CSV")->required();
    wrk->add_option("--surface", wrk_surface, "surface file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (*gs) return cmd_ground_state(common, gs_a, gs_phi);
        if (*surf) return cmd_surface(common, s_amin, s_amax, s_na, s_pmin, s_pmax, s_nphi);
        if (*sim)
            return cmd_simulate(common, sim_schedule, sim_tf, sim_c1, sim_c2, sim_mode,
                                sim_surface);
        if (*optc) return cmd_optimize(common, opt_tf, opt_surface);
        if (*spd) return cmd_speed_limit(common, spd_min, spd_max, spd_step, spd_surface);
        if (*tri) return cmd_trial(common, tri_deltas, tri_amin, tri_amax, tri_na, tri_numeric);
        if (*wrk) return cmd_work_report(common, wrk_traj, wrk_surface);
    } catch (const rp::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const rp::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const rp::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
