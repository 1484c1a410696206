#include "tfstar/shoot.hpp"

#include <algorithm>
#include <cmath>

#include "tfstar/error.hpp"
#include "tfstar/quadrature.hpp"
#include "tfstar/special.hpp"

namespace tfstar {

const char* to_string(SolutionKind k) {
    switch (k) {
        case SolutionKind::Special: return "Special";
        case SolutionKind::ProtonAtmosphere: return "ProtonAtmosphere";
        case SolutionKind::ElectronAtmosphere: return "ElectronAtmosphere";
    }
    return "?";
}

const char* to_string(Closure c) { return c == Closure::Compact ? "Compact" : "Critical"; }

const char* to_string(SweepStatus s) {
    switch (s) {
        case SweepStatus::Compact: return "Compact";
        case SweepStatus::Critical: return "Critical";
        case SweepStatus::NonIntegrable: return "NonIntegrable";
        case SweepStatus::Inadmissible: return "Inadmissible";
        case SweepStatus::Failed: return "Failed";
    }
    return "?";
}

namespace {

double envelope_tail(double c, double R) { return c > 0.0 ? 4.0 * M_PI * pow32(c) / (3.0 * R * R * R) : 0.0; }

}  // namespace

ParticleCounts counts(const RadialProfile& p, double rel_tol, Exec exec) {
    const ProfileQuadrature q(p, exec);
    const QuadResult ne = q.integrate([](double r, double ue, double) { return r * r * pow32(ue); });
    const QuadResult np = q.integrate([](double r, double, double up) { return r * r * pow32(up); });
    const double R = p.outer_radius();
    ParticleCounts c;
    c.N_e = 4.0 * M_PI * ne.value + envelope_tail(p.tail_e, R);
    c.N_p = 4.0 * M_PI * np.value + envelope_tail(p.tail_p, R);
    c.error_e = 4.0 * M_PI * ne.error;
    c.error_p = 4.0 * M_PI * np.error;
    c.ratio = c.N_p > 0.0 ? c.N_e / c.N_p : std::numeric_limits<double>::infinity();
    if (c.error_e > rel_tol * c.N_e || c.error_p > rel_tol * c.N_p) {
        throw SolverError(ErrorCode::QuadratureNotConverged,
                          "count error estimate exceeds tolerance (e: " + std::to_string(c.error_e / c.N_e) +
                              ", p: " + std::to_string(c.error_p / c.N_p) + ")");
    }
    return c;
}

FullSolution solve_profile(double alpha, double beta, const ConstantSet& consts, const ShootOptions& opts) {
    FullSolution sol;
    sol.coeffs = derive_coefficients(consts);
    sol.alpha = alpha;
    sol.beta = beta;
    const CoefficientSet& k = sol.coeffs;
    BulkOutcome bulk = integrate_bulk(alpha, beta, k, opts.bulk);
    sol.R0 = bulk.event_radius;
    sol.profile = std::move(bulk.profile);

    switch (bulk.event) {
        case BulkEvent::RadiusCap:
            throw SolverError(ErrorCode::NumericalBlowup, "bulk reached the radius cap without a vanishing density");
        case BulkEvent::SimultaneousVanish:
            sol.kind = SolutionKind::Special;
            sol.closure = Closure::Compact;
            sol.R1 = sol.R0;
            sol.counts = counts(sol.profile, opts.count_rel_tol);
            return sol;
        default:
            break;
    }

    const bool protons_survive = bulk.event == BulkEvent::VanishE;
    sol.kind = protons_survive ? SolutionKind::ProtonAtmosphere : SolutionKind::ElectronAtmosphere;
    const BulkState& s = bulk.state_at_event;
    const double a = protons_survive ? s.u_p : s.u_e;
    const double b = protons_survive ? s.du_p : s.du_e;
    const double D = protons_survive ? k.D_p() : k.D_e();
    sol.handoff_slope = b;

    const AtmosphereOutcome atm = integrate_atmosphere(sol.R0, a, b, D, opts.atm);
    sol.critical_slope = atm.b_hat;
    if (atm.kind == AtmosphereKind::Unbounded) {
        throw SolverError(ErrorCode::NonIntegrable, std::string(to_string(sol.kind)) + " atmosphere is unbounded (" +
                                                        atm.diagnostic + ")");
    }
    RadialProfile outer;
    for (std::size_t i = 0; i < atm.profile.r.size(); ++i) {
        if (protons_survive) {
            outer.push(atm.profile.r[i], 0.0, atm.profile.u[i], 0.0, atm.profile.du[i], 0.0, atm.profile.d2u[i]);
        } else {
            outer.push(atm.profile.r[i], atm.profile.u[i], 0.0, atm.profile.du[i], 0.0, atm.profile.d2u[i], 0.0);
        }
    }
    if (atm.kind == AtmosphereKind::CriticalDecay) {
        sol.closure = Closure::Critical;
        sol.R1 = std::numeric_limits<double>::infinity();
        sol.tail_mass = atm.tail_mass;
        (protons_survive ? outer.tail_p : outer.tail_e) = atm.envelope_c;
    } else {
        sol.closure = Closure::Compact;
        sol.R1 = atm.outer_radius;
    }
    sol.profile.append(outer);
    sol.counts = counts(sol.profile, opts.count_rel_tol);
    return sol;
}

FullSolution apply_scaling(const FullSolution& s, double lambda, double count_rel_tol) {
    if (!(lambda > 0.0)) throw SolverError(ErrorCode::NonPositiveInput, "scaling factor must be positive");
    const double a = std::pow(lambda, 0.25);
    FullSolution out = s;
    out.alpha = lambda * s.alpha;
    out.beta = lambda * s.beta;
    out.R0 = s.R0 / a;
    out.R1 = s.R1 / a;
    out.handoff_slope = s.handoff_slope * lambda * a;
    out.critical_slope = s.critical_slope * lambda * a;
    out.profile = rescale(s.profile, 1.0 / a, lambda);
    const double R = out.profile.outer_radius();
    out.tail_mass = envelope_tail(out.profile.tail_e, R) + envelope_tail(out.profile.tail_p, R);
    out.counts = counts(out.profile, count_rel_tol);
    return out;
}

SweepRow classify_point(double alpha, double beta, const ConstantSet& consts, const ShootOptions& opts) {
    SweepRow row;
    row.beta = beta;
    try {
        const FullSolution s = solve_profile(alpha, beta, consts, opts);
        row.status = s.closure == Closure::Critical ? SweepStatus::Critical : SweepStatus::Compact;
        row.kind = s.kind;
        row.R0 = s.R0;
        row.R1 = s.R1;
        row.counts = s.counts;
        row.bulk_event = s.kind == SolutionKind::Special         ? BulkEvent::SimultaneousVanish
                         : s.kind == SolutionKind::ProtonAtmosphere ? BulkEvent::VanishE
                                                                    : BulkEvent::VanishP;
    } catch (const SolverError& e) {
        row.message = e.what();
        switch (e.code()) {
            case ErrorCode::NonIntegrable: row.status = SweepStatus::NonIntegrable; break;
            case ErrorCode::Inadmissible:
            case ErrorCode::NonPositiveInput: row.status = SweepStatus::Inadmissible; break;
            default: row.status = SweepStatus::Failed; break;
        }
    }
    return row;
}

namespace {

bool closes(const SweepRow& r) { return r.status == SweepStatus::Compact || r.status == SweepStatus::Critical; }

// Finds the last compact beta moving from `inside` toward `limit`.
void refine_edge(double alpha, double inside, double limit, const ConstantSet& consts, const ShootOptions& opts,
                 double& last_in, double& first_out) {
    const double dir = limit > inside ? 1.0 : -1.0;
    double step = 1e-7 * inside;
    double in = inside;
    double out = limit;
    bool found = false;
    while (true) {
        double trial = in + dir * step;
        if (dir * (trial - limit) >= 0.0) trial = limit;
        const SweepRow row = classify_point(alpha, trial, consts, opts);
        if (!closes(row)) {
            out = trial;
            found = true;
            break;
        }
        if (trial == limit) break;
        in = trial;
        step *= 2.0;
    }
    if (!found) throw SolverError(ErrorCode::BracketFailure, "compact window reaches the central-ratio limit");
    for (int i = 0; i < 200; ++i) {
        const double mid = in + 0.5 * (out - in);
        if (mid == in || mid == out) break;
        if (closes(classify_point(alpha, mid, consts, opts))) {
            in = mid;
        } else {
            out = mid;
        }
    }
    last_in = in;
    first_out = out;
}

}  // namespace

WindowEdges window_edges(double alpha, const ConstantSet& consts, const ShootOptions& opts) {
    const CoefficientSet k = derive_coefficients(consts);
    const AdmissibilityWindows w = ratio_window(consts);
    WindowEdges e;
    e.beta_special = std::pow(solve_kd(5.0, k), 2.0 / 3.0) * alpha;
    // beta limits where one of the central signs turns non-negative
    const double beta_min = alpha / w.central_hi;
    const double beta_max = alpha / w.central_lo;
    // Locate the edges with plain shooting so the critical tolerance band
    // does not shift them; the final solves below classify them as critical.
    ShootOptions plain = opts;
    plain.atm.detect_critical = false;
    refine_edge(alpha, e.beta_special, beta_max, consts, plain, e.beta_hi, e.beta_hi_out);
    refine_edge(alpha, e.beta_special, beta_min, consts, plain, e.beta_lo, e.beta_lo_out);
    e.lo = solve_profile(alpha, e.beta_lo, consts, opts);
    e.hi = solve_profile(alpha, e.beta_hi, consts, opts);
    return e;
}

std::vector<SweepRow> solve_batch(const std::vector<std::pair<double, double>>& points, const ConstantSet& consts,
                                  const ShootOptions& opts, Exec exec) {
    std::vector<SweepRow> rows(points.size());
    for_each_index(points.size(), exec, [&](std::size_t i) {
        rows[i] = classify_point(points[i].first, points[i].second, consts, opts);
    });
    return rows;
}

SweepResult regime_sweep(double alpha, const std::vector<double>& betas, const ConstantSet& consts,
                         const ShootOptions& opts, Exec exec) {
    SweepResult out;
    out.alpha = alpha;
    std::vector<std::pair<double, double>> pts;
    pts.reserve(betas.size());
    for (double b : betas) pts.emplace_back(alpha, b);
    out.rows = solve_batch(pts, consts, opts, exec);
    out.edges = window_edges(alpha, consts, opts);
    return out;
}

InvertResult invert_counts(double N_e, double N_p, const ConstantSet& consts, const InvertOptions& opts) {
    const AdmissibilityWindows w = ratio_window(consts);
    if (!(N_e > 0.0) || !(N_p > 0.0) || !std::isfinite(N_e) || !std::isfinite(N_p)) {
        throw SolverError(ErrorCode::InadmissibleRatio, "particle counts must be positive and finite");
    }
    const RatioStatus status = check_ratio(N_e, N_p, w);
    if (status == RatioStatus::Inadmissible) {
        throw SolverError(ErrorCode::InadmissibleRatio, "N_e/N_p = " + std::to_string(N_e / N_p) +
                                                            " lies outside the admissibility window");
    }
    const double target = N_e / N_p;
    InvertResult res;
    res.boundary = status == RatioStatus::Boundary;

    const WindowEdges edges = window_edges(1.0, consts, opts.shoot);
    const auto ratio_at = [&](double beta) {
        ++res.solves;
        return solve_profile(1.0, beta, consts, opts.shoot).counts.ratio;
    };

    double beta_star = 0.0;
    const double r_lo = edges.lo.counts.ratio, r_hi = edges.hi.counts.ratio;
    if (res.boundary || target <= r_lo || target >= r_hi) {
        if (res.boundary) {
            beta_star = std::abs(target - w.ratio_lo) < std::abs(target - w.ratio_hi) ? edges.beta_lo : edges.beta_hi;
        } else {
            throw SolverError(ErrorCode::RatioNotBracketed,
                              "target ratio " + std::to_string(target) + " is outside the swept range [" +
                                  std::to_string(r_lo) + ", " + std::to_string(r_hi) + "]");
        }
    } else {
        // Check the working hypothesis that the ratio increases with beta.
        const int n = std::max(2, opts.monotone_grid);
        std::vector<double> grid(n + 1), ratios(n + 1);
        grid[0] = edges.beta_lo;
        ratios[0] = r_lo;
        grid[n] = edges.beta_hi;
        ratios[n] = r_hi;
        for (int i = 1; i < n; ++i) {
            grid[i] = edges.beta_lo + (edges.beta_hi - edges.beta_lo) * i / n;
            ratios[i] = ratio_at(grid[i]);
        }
        for (int i = 0; i < n; ++i) res.monotone = res.monotone && ratios[i + 1] > ratios[i];
        // First grid segment that brackets the target. When the ratio is
        // monotone this is the only one.
        int seg = -1;
        for (int i = 0; i < n && seg < 0; ++i) {
            if ((ratios[i] - target) * (ratios[i + 1] - target) <= 0.0) seg = i;
        }
        if (seg < 0) throw SolverError(ErrorCode::RatioNotBracketed, "no grid segment brackets the target ratio");
        double lo = grid[seg], hi = grid[seg + 1];
        double f_lo = ratios[seg] - target;
        beta_star = 0.5 * (lo + hi);
        for (int i = 0; i < 200; ++i) {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid == lo || mid == hi) break;
            const double f = ratio_at(mid) - target;
            beta_star = mid;
            if (std::abs(f) <= opts.ratio_tol * target) break;
            if ((f < 0.0) == (f_lo < 0.0)) {
                lo = mid;
                f_lo = f;
            } else {
                hi = mid;
            }
        }
    }

    const FullSolution canonical = solve_profile(1.0, beta_star, consts, opts.shoot);
    ++res.solves;
    res.beta_canonical = beta_star;
    res.lambda = std::pow(N_p / canonical.counts.N_p, 4.0 / 3.0);
    res.alpha = res.lambda;
    res.beta = res.lambda * beta_star;
    res.solution = solve_profile(res.alpha, res.beta, consts, opts.shoot);
    ++res.solves;
    return res;
}

}  // namespace tfstar
