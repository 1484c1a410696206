// tfstar: command-line front end for the two-fluid star solvers.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "output.hpp"
#include "tfstar/atmosphere.hpp"
#include "tfstar/energy.hpp"
#include "tfstar/error.hpp"
#include "tfstar/io.hpp"
#include "tfstar/relativity.hpp"
#include "tfstar/shoot.hpp"
#include "tfstar/special.hpp"

using namespace tfstar;
using tfcli::Chart;
using tfcli::RunOutput;
using tfcli::Series;
using nlohmann::json;

namespace {

struct Params {
    std::string constants_path;
    std::string out_dir = "tfstar_out";
    std::optional<double> tol;
    int workers = 1;

    double alpha = 1.0;
    std::optional<double> beta;
    double ne = 0.0, np = 0.0;
    std::optional<double> beta_min, beta_max;
    int points = 41;
    std::string profile_path;
    double y0 = 2.0;
    double ratio = 1.0;
    double rho_e = 0.0, rho_p = 0.0;
    double r0 = 1.0, a = 1.0;
    std::optional<double> b;
    std::string species = "p";
    std::optional<double> r_min, r_max;
    bool bulk_only = false;
};

ConstantSet resolve_constants(const Params& p, std::string& source) {
    std::string path = p.constants_path;
    if (path.empty()) {
        if (const char* env = std::getenv("TFSTAR_CONSTANTS")) path = env;
    }
    if (path.empty()) {
        source = "desk";
        return ConstantSet::desk();
    }
    source = path;
    return load_constants(path);
}

ShootOptions shoot_options(const Params& p) {
    ShootOptions o;
    if (p.tol) {
        o.bulk.tol.rtol = *p.tol;
        o.bulk.tol.atol = *p.tol * 1e-2;
        o.atm.tol.rtol = *p.tol;
        o.atm.tol.atol = *p.tol * 1e-3;
    }
    return o;
}

json counts_json(const ParticleCounts& n) {
    return {{"N_e", n.N_e}, {"N_p", n.N_p}, {"ratio", n.ratio}, {"error_e", n.error_e}, {"error_p", n.error_p}};
}

json solution_json(const FullSolution& s) {
    return {{"alpha", s.alpha},
            {"beta", s.beta},
            {"kind", to_string(s.kind)},
            {"closure", to_string(s.closure)},
            {"R0", s.R0},
            {"R1", std::isfinite(s.R1) ? json(s.R1) : json("inf")},
            {"tail_mass", s.tail_mass},
            {"counts", counts_json(s.counts)}};
}

void write_solution(RunOutput& out, const FullSolution& s, const std::string& title) {
    out.profile_csv("profile.csv", s.profile);
    tfcli::emit_plot_data(out, s.profile, title);
    out.summary() = solution_json(s);
    out.json("summary.json", out.summary(), "summary");
}

std::string run_solve(const Params& p, const ConstantSet& c, RunOutput& out) {
    if (!p.beta) throw CLI::ValidationError("--beta", "required");
    const FullSolution s = solve_profile(p.alpha, *p.beta, c, shoot_options(p));
    write_solution(out, s, "solve");
    char line[256];
    std::snprintf(line, sizeof line, "solve: %s/%s R0=%.10g N_e=%.10g N_p=%.10g", to_string(s.kind),
                  to_string(s.closure), s.R0, s.counts.N_e, s.counts.N_p);
    return line;
}

std::string run_invert(const Params& p, const ConstantSet& c, RunOutput& out) {
    InvertOptions o;
    o.shoot = shoot_options(p);
    const InvertResult r = invert_counts(p.ne, p.np, c, o);
    write_solution(out, r.solution, "invert");
    out.summary()["lambda"] = r.lambda;
    out.summary()["beta_canonical"] = r.beta_canonical;
    out.summary()["boundary"] = r.boundary;
    out.summary()["monotone"] = r.monotone;
    out.summary()["solves"] = r.solves;
    char line[256];
    std::snprintf(line, sizeof line, "invert: alpha=%.12g beta=%.12g (%d solves)", r.alpha, r.beta, r.solves);
    return line;
}

int regime_code(SweepStatus s) {
    switch (s) {
        case SweepStatus::Inadmissible: return 0;
        case SweepStatus::NonIntegrable: return 1;
        case SweepStatus::Compact: return 2;
        case SweepStatus::Critical: return 3;
        case SweepStatus::Failed: return -1;
    }
    return -1;
}

std::string run_sweep(const Params& p, const ConstantSet& c, RunOutput& out, Exec exec) {
    // default range: the central window, which bounds alpha / beta
    const AdmissibilityWindows cw = ratio_window(c);
    const double lo = p.beta_min.value_or(p.alpha / cw.central_hi);
    const double hi = p.beta_max.value_or(p.alpha / cw.central_lo);
    if (!(hi > lo) || p.points < 2) throw CLI::ValidationError("--beta-min/--beta-max/--points", "empty sweep range");
    std::vector<double> betas;
    for (int i = 0; i < p.points; ++i) betas.push_back(lo + (hi - lo) * i / (p.points - 1));
    const SweepResult res = regime_sweep(p.alpha, betas, c, shoot_options(p), exec);

    Table t;
    t.header = {"beta", "status", "regime", "kind", "R0", "R1", "N_e", "N_p", "ratio"};
    Series s{"regime", {}, {}, "#2ca02c"};
    int compact = 0;
    for (const SweepRow& r : res.rows) {
        const bool has_counts = r.status == SweepStatus::Compact || r.status == SweepStatus::Critical;
        compact += has_counts;
        auto num = [&](double v) { return has_counts ? format_number(v) : std::string(); };
        t.add({format_number(r.beta), to_string(r.status), std::to_string(regime_code(r.status)),
               r.kind ? to_string(*r.kind) : "", format_number(r.R0), has_counts ? format_number(r.R1) : "",
               num(r.counts.N_e), num(r.counts.N_p), num(r.counts.ratio)});
        s.x.push_back(r.beta);
        s.y.push_back(regime_code(r.status));
    }
    out.table("sweep.csv", t, "sweep");
    out.svg("sweep.svg", Chart{"regime vs beta (0 inadmissible, 1 non-integrable, 2 compact, 3 critical)", "beta",
                               "regime", false, {s}},
            "plot");

    const WindowEdges& e = res.edges;
    Table et;
    et.header = {"edge", "beta", "beta_outside", "kind", "closure", "N_e", "N_p", "ratio"};
    et.add({"lo", format_number(e.beta_lo), format_number(e.beta_lo_out), to_string(e.lo.kind),
            to_string(e.lo.closure), format_number(e.lo.counts.N_e), format_number(e.lo.counts.N_p),
            format_number(e.lo.counts.ratio)});
    et.add({"hi", format_number(e.beta_hi), format_number(e.beta_hi_out), to_string(e.hi.kind),
            to_string(e.hi.closure), format_number(e.hi.counts.N_e), format_number(e.hi.counts.N_p),
            format_number(e.hi.counts.ratio)});
    out.table("edges.csv", et, "window-edges");

    const AdmissibilityWindows w = ratio_window(c);
    out.summary() = {{"alpha", p.alpha},
                     {"points", p.points},
                     {"integrable_points", compact},
                     {"beta_special", e.beta_special},
                     {"beta_lo", e.beta_lo},
                     {"beta_hi", e.beta_hi},
                     {"ratio_at_lo", e.lo.counts.ratio},
                     {"ratio_at_hi", e.hi.counts.ratio},
                     {"ratio_lo_closed", w.ratio_lo},
                     {"ratio_hi_closed", w.ratio_hi}};
    char line[256];
    std::snprintf(line, sizeof line, "sweep: %d/%d integrable, window beta=[%.12g, %.12g], ratios [%.8g, %.8g]",
                  compact, p.points, e.beta_lo, e.beta_hi, e.lo.counts.ratio, e.hi.counts.ratio);
    return line;
}

std::string run_special(const Params& p, const ConstantSet& c, RunOutput& out) {
    const SpecialSolution s = special_profile(p.alpha, derive_coefficients(c));
    out.profile_csv("profile.csv", s.profile);
    tfcli::emit_plot_data(out, s.profile, "special solution");
    out.summary() = {{"alpha", s.alpha}, {"beta", s.beta},         {"k", s.k},
                     {"xi1", s.xi1},     {"radius", s.radius},     {"curvature", s.curvature},
                     {"index", s.index}, {"radial_scale", s.radial_scale}};
    out.json("summary.json", out.summary(), "summary");
    char line[256];
    std::snprintf(line, sizeof line, "special: k=%.15g beta=%.15g radius=%.12g", s.k, s.beta, s.radius);
    return line;
}

std::string run_atmosphere(const Params& p, const ConstantSet& c, RunOutput& out) {
    const CoefficientSet k = derive_coefficients(c);
    if (p.species != "e" && p.species != "p") throw CLI::ValidationError("--species", "must be e or p");
    const double D = p.species == "e" ? k.D_e() : k.D_p();
    AtmosphereOptions o;
    if (p.tol) {
        o.tol.rtol = *p.tol;
        o.tol.atol = *p.tol * 1e-3;
    }
    const double b = p.b ? *p.b : manifold_slope(p.r0, p.a, D, o);
    const AtmosphereOutcome res = integrate_atmosphere(p.r0, p.a, b, D, o);
    Table t;
    t.header = {"r", "u", "du"};
    Series s{"u", {}, {}, "#1f77b4"};
    for (std::size_t i = 0; i < res.profile.r.size(); ++i) {
        t.add_numbers({res.profile.r[i], res.profile.u[i], res.profile.du[i]});
        s.x.push_back(res.profile.r[i]);
        s.y.push_back(res.profile.u[i]);
    }
    out.table("atmosphere.csv", t, "atmosphere");
    out.svg("atmosphere.svg", Chart{"atmosphere", "r", "u", true, {s}}, "plot");
    out.summary() = {{"species", p.species}, {"D", D},
                     {"R0", p.r0},           {"a", p.a},
                     {"b", b},               {"b_hat", res.b_hat},
                     {"kind", to_string(res.kind)}, {"outer_radius", res.outer_radius},
                     {"envelope_c", res.envelope_c}, {"tail_mass", res.tail_mass},
                     {"diagnostic", res.diagnostic}};
    char line[256];
    std::snprintf(line, sizeof line, "atmosphere: %s b=%.15g b_hat=%.15g", to_string(res.kind), b, res.b_hat);
    return line;
}

std::string run_energy(const Params& p, const ConstantSet& c, RunOutput& out, Exec exec) {
    RadialProfile prof;
    if (!p.profile_path.empty()) {
        prof = read_profile_csv(p.profile_path);
        out.summary()["profile"] = p.profile_path;
    } else {
        if (!p.beta) throw CLI::ValidationError("--beta", "required unless --profile is given");
        const FullSolution s = solve_profile(p.alpha, *p.beta, c, shoot_options(p));
        prof = s.profile;
        out.summary()["solution"] = solution_json(s);
    }
    const EnergyBreakdown e = evaluate_energy(prof, c, 1e-8, exec);
    const MultiplierEstimate m = el_residual(prof, c);
    const VirialCheck v = virial_check(prof, c);
    out.summary()["energy"] = {{"kinetic_e", e.kinetic_e},
                               {"kinetic_p", e.kinetic_p},
                               {"electric", e.electric},
                               {"gravitational", e.gravitational},
                               {"total", e.total},
                               {"electric_field_form", e.electric_field_form},
                               {"gravitational_field_form", e.gravitational_field_form}};
    out.summary()["multipliers"] = {
        {"mean_e", m.mean_e}, {"mean_p", m.mean_p}, {"rel_std_e", m.rel_std_e}, {"rel_std_p", m.rel_std_p}};
    out.summary()["virial"] = {
        {"kinetic", v.kinetic}, {"potential", v.potential}, {"direct", v.direct}, {"numeric", v.numeric}};

    const std::vector<double> lambdas{0.5, 0.8, 1.0, 1.25, 2.0};
    const auto scan = dilation_scan(prof, lambdas, c, exec);
    Table t;
    t.header = {"lambda", "kinetic", "electric", "gravitational", "total"};
    for (std::size_t i = 0; i < scan.size(); ++i) {
        t.add_numbers({lambdas[i], scan[i].kinetic(), scan[i].electric, scan[i].gravitational, scan[i].total});
    }
    out.table("dilation.csv", t, "dilation-scan");
    out.json("energy.json", out.summary(), "summary");
    char line[256];
    std::snprintf(line, sizeof line, "energy: total=%.12g kinetic=%.12g electric=%.12g gravitational=%.12g", e.total,
                  e.kinetic(), e.electric, e.gravitational);
    return line;
}

std::string run_rel_solve(const Params& p, const ConstantSet& c, RunOutput& out) {
    RelOptions o;
    o.bulk_only = p.bulk_only;
    if (p.tol) {
        o.tol.rtol = *p.tol;
        o.tol.atol = *p.tol * 1e-2;
    }
    const RelSolution s = integrate_rel_profile(p.rho_p, p.rho_e, c, o);
    Table t;
    t.header = {"r", "y_e_minus_1", "y_p_minus_1", "dy_e", "dy_p", "rho_e", "rho_p"};
    for (std::size_t i = 0; i < s.r.size(); ++i) {
        t.add_numbers({s.r[i], s.v_e[i], s.v_p[i], s.dv_e[i], s.dv_p[i], pow32(s.profile.u_e[i]),
                       pow32(s.profile.u_p[i])});
    }
    out.table("rel_profile.csv", t, "relativistic-profile");
    tfcli::emit_plot_data(out, s.profile, "relativistic profile");
    const double ke = rel_kinetic_energy(s.profile, Species::Electron, c);
    const double kp = rel_kinetic_energy(s.profile, Species::Proton, c);
    out.summary() = {{"rho_e0", s.rho_e0}, {"rho_p0", s.rho_p0}, {"outcome", to_string(s.outcome)},
                     {"R0", s.R0},         {"R1", s.R1},         {"N_e", s.N_e},
                     {"N_p", s.N_p},       {"kinetic_e", ke},    {"kinetic_p", kp}};
    char line[256];
    std::snprintf(line, sizeof line, "rel-solve: %s R0=%.10g R1=%.10g N_e=%.10g N_p=%.10g", to_string(s.outcome), s.R0,
                  s.R1, s.N_e, s.N_p);
    return line;
}

std::string run_chandra(const Params& p, const ConstantSet&, RunOutput& out) {
    ode::Tolerances tol{1e-12, 1e-14};
    if (p.tol) {
        tol.rtol = *p.tol;
        tol.atol = *p.tol * 1e-2;
    }
    const ChandraSolution s = chandra_single_fluid(p.y0, tol);
    Table t;
    t.header = {"eta", "y", "dy"};
    for (std::size_t i = 0; i < s.eta.size(); ++i) t.add_numbers({s.eta[i], s.y[i], s.dy[i]});
    out.table("chandra.csv", t, "chandrasekhar-profile");
    out.svg("chandra.svg", Chart{"single-fluid profile", "eta", "y", false, {Series{"y", s.eta, s.y}}}, "plot");
    out.summary() = {{"y0", s.y0}, {"eta1", s.eta1}, {"dy1", s.dy1}};
    char line[160];
    std::snprintf(line, sizeof line, "chandra: y0=%.10g first zero eta1=%.12g", s.y0, s.eta1);
    return line;
}

std::vector<double> radius_grid(const Params& p) {
    if (!p.r_min && !p.r_max) return {};
    if (!p.r_min || !p.r_max || !(*p.r_max > *p.r_min) || *p.r_min <= 0.0 || p.points < 3) {
        throw CLI::ValidationError("--r-min/--r-max", "need 0 < r-min < r-max and at least 3 points");
    }
    std::vector<double> g;
    for (int i = 0; i < p.points; ++i) {
        g.push_back(*p.r_min * std::pow(*p.r_max / *p.r_min, double(i) / (p.points - 1)));
    }
    return g;
}

json ball_json(const BallEnergyReport& r) {
    return {{"N_e", r.N_e},
            {"N_p", r.N_p},
            {"verdict", to_string(r.verdict)},
            {"fitted_slope", r.fitted_slope},
            {"exact_slope", r.exact_slope},
            {"fitted_const", r.fitted_const},
            {"fitted_linear", r.fitted_linear}};
}

void ball_table(RunOutput& out, const std::string& name, const BallEnergyReport& r) {
    Table t;
    t.header = {"R", "energy", "energy_times_R"};
    for (std::size_t i = 0; i < r.R.size(); ++i) t.add_numbers({r.R[i], r.energy[i], r.energy[i] * r.R[i]});
    out.table(name, t, "ball-scan");
}

std::string run_critical_mass(const Params& p, const ConstantSet& c, RunOutput& out, Exec exec) {
    const CriticalMassReport r = critical_mass_scan(p.ratio, c, radius_grid(p), 0.5, 2.0, exec);
    ball_table(out, "ball_below.csv", r.below);
    ball_table(out, "ball_above.csv", r.above);
    out.summary() = {{"ratio_np_over_ne", r.ratio},
                     {"threshold_N_e", r.threshold},
                     {"threshold_closed", r.threshold_closed},
                     {"below", ball_json(r.below)},
                     {"above", ball_json(r.above)}};
    char line[200];
    std::snprintf(line, sizeof line, "critical-mass: N_e*=%.12g (below: %s, above: %s)", r.threshold,
                  to_string(r.below.verdict), to_string(r.above.verdict));
    return line;
}

std::string run_ball_scan(const Params& p, const ConstantSet& c, RunOutput& out, Exec exec) {
    const BallEnergyReport r = ball_scan(p.ne, p.np, c, radius_grid(p), exec);
    ball_table(out, "ball.csv", r);
    std::vector<double> er;
    for (std::size_t i = 0; i < r.R.size(); ++i) er.push_back(r.energy[i] * r.R[i]);
    out.svg("ball.svg", Chart{"uniform ball: E(R) R", "R", "E R", true, {Series{"E R", r.R, er}}}, "plot");
    out.summary() = ball_json(r);
    char line[200];
    std::snprintf(line, sizeof line, "ball-scan: %s, 1/R slope fitted %.10g exact %.10g", to_string(r.verdict),
                  r.fitted_slope, r.exact_slope);
    return line;
}

int exit_code_for(const SolverError& e) {
    switch (e.code()) {
        case ErrorCode::Inadmissible:
        case ErrorCode::NonIntegrable:
        case ErrorCode::InadmissibleRatio:
            return 2;
        default:
            return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-fluid Thomas-Fermi star solvers"};
    app.require_subcommand(1);
    app.fallthrough();
    Params p;
    app.add_option("--constants", p.constants_path, "constants JSON (falls back to $TFSTAR_CONSTANTS, then desk units)");
    app.add_option("--out", p.out_dir, "output directory")->capture_default_str();
    app.add_option("--tol", p.tol, "relative ODE tolerance")->check(CLI::PositiveNumber);
    app.add_option("--workers", p.workers, "OpenMP worker count")->check(CLI::Range(1, 4096))->capture_default_str();

    auto* solve = app.add_subcommand("solve", "solve the profile for central values (alpha, beta)");
    solve->add_option("--alpha", p.alpha, "central proton value u_p(0)")->check(CLI::PositiveNumber);
    solve->add_option("--beta", p.beta, "central electron value u_e(0)")->required();

    auto* invert = app.add_subcommand("invert", "recover central values from particle counts");
    invert->add_option("--ne", p.ne, "electron count")->required();
    invert->add_option("--np", p.np, "proton count")->required();

    auto* sweep = app.add_subcommand("sweep", "classify a range of beta at fixed alpha");
    sweep->add_option("--alpha", p.alpha)->check(CLI::PositiveNumber);
    sweep->add_option("--beta-min", p.beta_min);
    sweep->add_option("--beta-max", p.beta_max);
    sweep->add_option("--points", p.points)->capture_default_str();

    auto* special = app.add_subcommand("special", "proportional-density solution");
    special->add_option("--alpha", p.alpha)->check(CLI::PositiveNumber);

    auto* atm = app.add_subcommand("atmosphere", "single-species atmosphere from a hand-off point");
    atm->add_option("--species", p.species, "surviving species, e or p")->capture_default_str();
    atm->add_option("--r0", p.r0, "hand-off radius")->check(CLI::PositiveNumber);
    atm->add_option("--a", p.a, "hand-off value")->check(CLI::PositiveNumber);
    atm->add_option("--b", p.b, "hand-off slope (default: the critical slope)");

    auto* energy = app.add_subcommand("energy", "energy breakdown, multipliers and virial check");
    energy->add_option("--alpha", p.alpha)->check(CLI::PositiveNumber);
    energy->add_option("--beta", p.beta);
    energy->add_option("--profile", p.profile_path, "profile CSV written by solve")->check(CLI::ExistingFile);

    auto* rel = app.add_subcommand("rel-solve", "relativistic two-species profile");
    rel->add_option("--rho-p", p.rho_p, "central proton density")->required();
    rel->add_option("--rho-e", p.rho_e, "central electron density")->required();
    rel->add_flag("--bulk-only", p.bulk_only, "stop where the first species vanishes");

    auto* chandra = app.add_subcommand("chandra", "single-fluid relativistic reference equation");
    chandra->add_option("--y0", p.y0)->capture_default_str();

    auto* crit = app.add_subcommand("critical-mass", "threshold count for a fixed composition");
    crit->add_option("--ratio", p.ratio, "N_p / N_e")->capture_default_str();
    crit->add_option("--r-min", p.r_min);
    crit->add_option("--r-max", p.r_max);
    crit->add_option("--points", p.points);

    auto* ball = app.add_subcommand("ball-scan", "uniform-ball energy versus radius");
    ball->add_option("--ne", p.ne)->required();
    ball->add_option("--np", p.np)->required();
    ball->add_option("--r-min", p.r_min);
    ball->add_option("--r-max", p.r_max);
    ball->add_option("--points", p.points);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const std::string command = app.get_subcommands().front()->get_name();
    set_worker_count(p.workers);
    const Exec exec = p.workers > 1 ? Exec::Parallel : Exec::Serial;
    try {
        std::string source;
        const ConstantSet c = resolve_constants(p, source);
        json config = {{"constants_source", source},
                       {"constants", constants_to_json(c)},
                       {"tol", p.tol ? json(*p.tol) : json(nullptr)},
                       {"workers", p.workers},
                       {"arguments", std::vector<std::string>(argv + 1, argv + argc)}};
        RunOutput out(p.out_dir, command, config);
        std::string line;
        try {
            if (command == "solve") line = run_solve(p, c, out);
            else if (command == "invert") line = run_invert(p, c, out);
            else if (command == "sweep") line = run_sweep(p, c, out, exec);
            else if (command == "special") line = run_special(p, c, out);
            else if (command == "atmosphere") line = run_atmosphere(p, c, out);
            else if (command == "energy") line = run_energy(p, c, out, exec);
            else if (command == "rel-solve") line = run_rel_solve(p, c, out);
            else if (command == "chandra") line = run_chandra(p, c, out);
            else if (command == "critical-mass") line = run_critical_mass(p, c, out, exec);
            else line = run_ball_scan(p, c, out, exec);
        } catch (const SolverError& e) {
            out.summary() = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
            out.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(),
                       std::string(to_string(e.code())));
            throw;
        }
        out.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), "ok");
        std::cout << line << "\n";
        return 0;
    } catch (const CLI::ValidationError& e) {
        std::cerr << command << ": " << e.what() << "\n" << app.help();
        return 1;
    } catch (const SolverError& e) {
        std::cerr << command << ": " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << command << ": internal error: " << e.what() << "\n";
        return 1;
    }
}
