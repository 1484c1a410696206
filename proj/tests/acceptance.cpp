// Acceptance checks at desk scale. One PASS/FAIL line per criterion; the
// exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "tfstar/atmosphere.hpp"
#include "tfstar/bulk.hpp"
#include "tfstar/energy.hpp"
#include "tfstar/error.hpp"
#include "tfstar/ode.hpp"
#include "tfstar/relativity.hpp"
#include "tfstar/shoot.hpp"
#include "tfstar/special.hpp"

using namespace tfstar;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

const ConstantSet desk = ConstantSet::desk();

// Shared between criteria 6, 7 and 8: the grid of solved compact profiles.
std::vector<FullSolution> grid_solutions;

Outcome lane_emden_check() {
    const LaneEmdenSolution s1 = lane_emden(1.0);
    const double err1 = std::abs(s1.xi1 - std::numbers::pi);
    LaneEmdenOptions o;
    o.xi_max = 3.0;
    const LaneEmdenSolution s5 = lane_emden(5.0, o);
    double err5 = 0.0;
    for (std::size_t i = 0; i < s5.xi.size(); ++i) {
        err5 = std::max(err5, std::abs(s5.theta[i] - 1.0 / std::sqrt(1.0 + s5.xi[i] * s5.xi[i] / 3.0)));
    }
    return {s1.has_zero && err1 < 1e-8 && err5 < 1e-8 && s5.xi.back() >= 3.0,
            fmt("|xi1(n=1) - pi| = %.2e, sup|theta5 - exact| on [0,3] = %.2e (tol 1e-8)", err1, err5)};
}

Outcome special_closure() {
    const CoefficientSet k = derive_coefficients(desk);
    const SpecialSolution s = special_profile(1.0, k);
    const BulkOutcome b = integrate_bulk(s.alpha, s.beta, k);
    const double re = b.event_radius;
    // the event radius against the other species' extrapolated vanishing radius
    const double gap = std::abs(re - b.other_vanish_radius) / re;
    double worst = 0.0;
    for (std::size_t i = 0; i < b.profile.size(); ++i) {
        if (b.profile.r[i] > 0.95 * re) break;
        const double ratio = pow32(b.profile.u_e[i]) / pow32(b.profile.u_p[i]);
        worst = std::max(worst, std::abs(ratio / s.k - 1.0));
    }
    return {b.event == BulkEvent::SimultaneousVanish && gap < 1e-5 && worst < 1e-6,
            std::string("event=") + to_string(b.event) +
                fmt(", |R_e - R_p|/R_e = %.2e (tol 1e-5), sup|rho_e/rho_p / k_d - 1| = %.2e (tol 1e-6), R = %.10g",
                    gap, worst, re)};
}

Outcome exact_atmosphere() {
    const CoefficientSet k = derive_coefficients(desk);
    const double D = k.D_p(), R0 = 1.0;
    const double C = decaying_constant(D);
    const double a = C / std::pow(R0, 4), b = -4.0 * C / std::pow(R0, 5);
    const AtmosphereOutcome o = integrate_atmosphere(R0, a, b, D);
    double worst = 0.0;
    for (std::size_t i = 0; i < o.profile.r.size() && o.profile.r[i] <= 10.0 * R0; ++i) {
        worst = std::max(worst, std::abs(o.profile.u[i] * std::pow(o.profile.r[i], 4) * D * D / 144.0 - 1.0));
    }
    const bool covers = !o.profile.r.empty() && o.profile.r.back() >= 10.0 * R0;

    // plain forward integration of the same initial value problem
    using Y = ode::Vec<2>;
    double fwd = 0.0;
    ode::integrate<2>(
        [D](double r, const Y& y) { return Y{y[1], -2.0 / r * y[1] + D * pow32(y[0])}; }, R0, Y{a, b}, 10.0 * R0,
        ode::Tolerances{1e-13, 1e-16}, [&](const ode::DenseStep<2>& st) {
            fwd = std::max(fwd, std::abs(st.y1[0] * std::pow(st.x1, 4) * D * D / 144.0 - 1.0));
            return ode::Control::Continue;
        });
    return {o.kind == AtmosphereKind::CriticalDecay && covers && worst < 1e-4 && fwd < 1e-4,
            std::string("kind=") + to_string(o.kind) +
                fmt(", sup|u r^4 D^2/144 - 1| over [R0, 10 R0] = %.2e (classifier), %.2e (forward IVP) (tol 1e-4)",
                    worst, fwd)};
}

Outcome trichotomy() {
    const CoefficientSet k = derive_coefficients(desk);
    std::mt19937 gen(20240917);
    std::uniform_real_distribution<double> R(0.3, 5.0), A(0.01, 3.0);
    int good = 0;
    double worst_margin = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double R0 = R(gen), a = A(gen);
        const double D = i % 2 ? k.D_e() : k.D_p();
        const double bh = manifold_slope(R0, a, D);
        const double delta = 1e-6 * std::abs(bh);
        const AtmosphereKind lo = integrate_atmosphere(R0, a, bh - delta, D).kind;
        const AtmosphereKind hi = integrate_atmosphere(R0, a, bh + delta, D).kind;
        // the bisection slope cross-checks the manifold one
        const double bb = critical_slope(R0, a, D);
        worst_margin = std::max(worst_margin, std::abs(bb - bh) / std::abs(bh));
        good += lo == AtmosphereKind::Compact && hi == AtmosphereKind::Unbounded;
    }
    return {good == 10, fmt("%.0f/10 cases split Compact/Unbounded at delta = 1e-6 |b_hat|; "
                            "manifold vs bisection slope max rel diff %.2e", good, worst_margin)};
}

Outcome scaling() {
    const FullSolution s = solve_profile(1.0, 0.9086, desk);
    bool ok = true;
    std::string d;
    for (double lambda : {0.5, 2.0, 10.0}) {
        const FullSolution t = apply_scaling(s, lambda);
        const double res = bulk_residual(t.profile, t.coeffs);
        const double dratio = std::abs(t.counts.ratio / s.counts.ratio - 1.0);
        const double fe = t.counts.N_e / s.counts.N_e, fp = t.counts.N_p / s.counts.N_p;
        const double oracle = count_scale_factor(lambda);
        const double ferr = std::max(std::abs(fe / oracle - 1.0), std::abs(fp / oracle - 1.0));
        ok = ok && t.kind == s.kind && t.closure == s.closure && res < 1e-6 && dratio < 1e-10 && ferr < 1e-8;
        d += fmt("lambda=%g: residual %.1e, ratio drift %.1e, factor err %.1e; ", lambda, res, dratio, ferr);
    }
    return {ok, d + "(tol 1e-6, 1e-10, 1e-8)"};
}

Outcome round_trip() {
    const WindowEdges e = window_edges(1.0, desk);
    int good = 0, total = 0;
    double worst = 0.0;
    for (double alpha : {0.5, 0.8, 1.0, 1.5, 2.0}) {
        for (int j = 1; j <= 9; j += 2) {
            const double f = 0.1 * j;
            const double beta = alpha * (e.beta_lo + f * (e.beta_hi - e.beta_lo));
            const FullSolution s = solve_profile(alpha, beta, desk);
            grid_solutions.push_back(s);
            const InvertResult r = invert_counts(s.counts.N_e, s.counts.N_p, desk);
            const double err = std::max(std::abs(r.solution.counts.N_e / s.counts.N_e - 1.0),
                                        std::abs(r.solution.counts.N_p / s.counts.N_p - 1.0));
            worst = std::max(worst, err);
            good += err < 1e-6;
            ++total;
        }
    }
    return {good == total && total == 25,
            fmt("%.0f/%.0f grid points reproduce counts; worst relative error %.2e (tol 1e-6)", good, total, worst)};
}

Outcome euler_lagrange() {
    if (grid_solutions.empty()) return {false, "no solved profiles (criterion 6 failed to run)"};
    double worst = 0.0, max_mean = -INFINITY;
    int compact = 0;
    for (const FullSolution& s : grid_solutions) {
        if (s.closure != Closure::Compact) continue;
        ++compact;
        const MultiplierEstimate m = el_residual(s.profile, desk);
        worst = std::max({worst, m.rel_std_e, m.rel_std_p});
        max_mean = std::max({max_mean, m.mean_e, m.mean_p});
    }
    // control: perturb the electron profile of one solution
    RadialProfile bent = grid_solutions[12].profile;
    for (std::size_t i = 0; i < bent.size(); ++i) {
        const double f = 1.0 + 0.05 * std::sin(3.0 * bent.r[i]);
        bent.du_e[i] = bent.du_e[i] * f + bent.u_e[i] * 0.15 * std::cos(3.0 * bent.r[i]);
        bent.u_e[i] *= f;
    }
    bent.d2u_e.clear();
    bent.d2u_p.clear();
    const MultiplierEstimate c = el_residual(bent, desk);
    const double control = std::max(c.rel_std_e, c.rel_std_p);
    return {compact > 0 && worst < 1e-5 && max_mean < 0.0 && control > 1e-2,
            fmt("%.0f compact profiles: max rel std %.2e (tol 1e-5), largest mean %.4g (< 0); "
                "perturbed control rel std %.3g (> 1e-2)",
                compact, worst, max_mean, control)};
}

Outcome energy_signs() {
    if (grid_solutions.empty()) return {false, "no solved profiles (criterion 6 failed to run)"};
    const ConstantSet nograv = desk.with_gravity(0.0);
    bool signs = true, zero_g = true;
    double worst_dil = 0.0;
    const std::vector<double> lambdas{0.5, 0.7, 1.0, 1.3, 2.0};
    for (const FullSolution& s : grid_solutions) {
        const EnergyBreakdown e = evaluate_energy(s.profile, desk);
        signs = signs && e.total < 0.0 && e.electric >= 0.0;
        zero_g = zero_g && evaluate_energy(s.profile, nograv).total > 0.0;
        const auto scan = dilation_scan(s.profile, lambdas, desk);
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            const double l = lambdas[i];
            worst_dil = std::max({worst_dil, std::abs(scan[i].kinetic() * l * l / scan[2].kinetic() - 1.0),
                                  std::abs(scan[i].potential() * l / scan[2].potential() - 1.0)});
        }
    }
    // a pair that is not a solution: a charged ball
    RadialProfile ball;
    for (int i = 0; i <= 8; ++i) ball.push(0.125 * i, 0.3, 0.5, 0, 0, 0, 0);
    zero_g = zero_g && evaluate_energy(ball, nograv).total > 0.0;
    return {signs && zero_g && worst_dil < 1e-8,
            fmt("%.0f profiles; total < 0 and electric >= 0: ", double(grid_solutions.size())) +
                (signs ? "yes" : "no") + "; zero-G total > 0: " + (zero_g ? "yes" : "no") +
                fmt("; dilation law error %.2e (tol 1e-8)", worst_dil)};
}

Outcome window_correspondence() {
    const AdmissibilityWindows w = ratio_window(desk);
    std::vector<double> betas;
    for (int i = 0; i <= 20; ++i) betas.push_back(1.0 / w.central_hi + (1.0 / w.central_lo - 1.0 / w.central_hi) * i / 20.0);
    const SweepResult s = regime_sweep(1.0, betas, desk, {}, Exec::Parallel);
    const double lo = s.edges.lo.counts.ratio, hi = s.edges.hi.counts.ratio;
    const double elo = std::abs(lo / w.ratio_lo - 1.0), ehi = std::abs(hi / w.ratio_hi - 1.0);
    return {elo < 1e-2 && ehi < 1e-2,
            fmt("endpoint ratios %.10g, %.10g vs closed form %.10g, %.10g", lo, hi, w.ratio_lo, w.ratio_hi) +
                fmt(" (rel err %.1e, %.1e; tol 1e-2)", elo, ehi)};
}

Outcome relativistic_limits() {
    const double big = chandrasekhar_A(1e3) / std::pow(1e3, 4);
    const double small = chandrasekhar_A(1e-3) / std::pow(1e-3, 5);
    const bool limits = std::abs(big / 6.0 - 1.0) < 1e-2 && std::abs(small / 2.4 - 1.0) < 1e-2;

    const CoefficientSet k = derive_coefficients(desk);
    const double kd = solve_kd(5.0, k);
    const double beta = std::cbrt(kd * kd);
    RelOptions o;
    o.bulk_only = true;
    std::vector<double> gaps;
    for (double s : {1.0, 0.1, 0.01}) {
        const RelSolution r = integrate_rel_profile(s, s * std::pow(beta, 1.5), desk, o);
        const double lam = std::cbrt(s * s);
        const BulkOutcome nr = integrate_bulk(lam, lam * beta, k);
        double gap = 0.0;
        for (std::size_t i = 0; i < r.r.size() && r.r[i] <= 0.5 * nr.event_radius; ++i) {
            const ProfileSample m = sample(nr.profile, r.r[i]);
            gap = std::max({gap, std::abs(r.profile.u_e[i] - m.u_e) / lam, std::abs(r.profile.u_p[i] - m.u_p) / lam});
        }
        gaps.push_back(gap);
    }
    const bool monotone = gaps[1] < gaps[0] && gaps[2] < gaps[1];
    return {limits && monotone, fmt("A(1e3)/z^4 = %.6g, A(1e-3)/z^5 = %.8g; ", big, small) +
                                    fmt("sup gap on r <= R/2 for scale 1, 0.1, 0.01: %.3e, %.3e, %.3e", gaps[0],
                                        gaps[1], gaps[2])};
}

Outcome critical_mass() {
    const CriticalMassReport r = critical_mass_scan(1.0, desk);
    const CriticalMassReport g = critical_mass_scan(1.0, desk.with_gravity(desk.G / 4));
    const double law = g.threshold / r.threshold;
    const double law_off = critical_mass_scan(1.01, desk.with_gravity(desk.G / 4)).threshold /
                           critical_mass_scan(1.01, desk).threshold;
    const CriticalMassReport near = critical_mass_scan(1.0, desk, {}, 0.9, 1.1);
    const bool flips = r.below.verdict == BallVerdict::BoundedBelow && r.above.verdict == BallVerdict::UnboundedBelow &&
                       near.below.verdict == BallVerdict::BoundedBelow &&
                       near.above.verdict == BallVerdict::UnboundedBelow;
    return {flips && std::abs(law / 8.0 - 1.0) < 2e-2 && std::abs(law_off / 8.0 - 1.0) < 2e-2,
            fmt("N_e* = %.8g; verdicts flip at 0.5/2 and 0.9/1.1 N_e*: ", r.threshold) + (flips ? "yes" : "no") +
                fmt("; G/4 factor %.10g (ratio 1), %.6g (ratio 1.01), tol 2%%", law, law_off)};
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double budget;  // seconds
    };
    const std::vector<Entry> entries{
        {1, "Lane-Emden analytic", lane_emden_check, 1.0},
        {2, "special-solution closure", special_closure, 5.0},
        {3, "atmosphere exact solution", exact_atmosphere, 5.0},
        {4, "critical-slope trichotomy", trichotomy, 30.0},
        {5, "scaling law", scaling, 0.0},
        {6, "round-trip bijection", round_trip, 300.0},
        {7, "Euler-Lagrange certification", euler_lagrange, 0.0},
        {8, "energy signs and dilation", energy_signs, 0.0},
        {9, "window correspondence", window_correspondence, 600.0},
        {10, "relativistic limits", relativistic_limits, 0.0},
        {11, "critical-mass scan", critical_mass, 0.0},
    };
    int failures = 0;
    for (const Entry& e : entries) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string timing = fmt(" [%.2fs", dt);
        if (e.budget > 0.0) {
            timing += fmt(", budget %.0fs]", e.budget);
            if (dt > e.budget) {
                o.pass = false;
                o.detail += " (over time budget)";
            }
        } else {
            timing += "]";
        }
        if (!o.pass) ++failures;
        std::printf("%s criterion %2d %s: %s%s\n", o.pass ? "PASS" : "FAIL", e.id, e.name, o.detail.c_str(),
                    timing.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(entries.size()) - failures, entries.size());
    return failures;
}
