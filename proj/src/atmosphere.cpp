#include "tfstar/atmosphere.hpp"

#include <algorithm>
#include <cmath>

#include "tfstar/error.hpp"
#include "tfstar/profile.hpp"

namespace tfstar {

double decaying_constant(double D) { return 144.0 / (D * D); }

double decaying_reference(double r, double D) {
    const double r2 = r * r;
    return decaying_constant(D) / (r2 * r2);
}

const char* to_string(AtmosphereKind k) {
    switch (k) {
        case AtmosphereKind::Compact: return "Compact";
        case AtmosphereKind::CriticalDecay: return "CriticalDecay";
        case AtmosphereKind::Unbounded: return "Unbounded";
    }
    return "?";
}

namespace {

using Z = ode::Vec<2>;  // w, dw/dt

// Stable eigenvalue of the linearisation at the saddle.
const double kStableRate = 0.5 * (7.0 - std::sqrt(73.0));

struct LogNode {
    double t, w, wt;
};

void check_handoff(double R0, double a, double b, double D) {
    if (!(R0 > 0.0) || !(a > 0.0) || !(D > 0.0) || !std::isfinite(R0) || !std::isfinite(a) ||
        !std::isfinite(D) || !std::isfinite(b)) {
        throw SolverError(ErrorCode::InvalidHandoff, "atmosphere needs R0, a, D > 0 and a finite slope");
    }
}

void push_log_node(SpeciesProfile& p, const LogNode& n, double D) {
    const double r = std::exp(n.t);
    const double r4 = (r * r) * (r * r);
    const double u = n.w / r4;
    const double du = (n.wt - 4.0 * n.w) / (r4 * r);
    p.push(r, u, du, -2.0 * du / r + D * pow32(u));
}

auto log_rhs(double D) {
    return [D](double, const Z& z) { return Z{z[1], 7.0 * z[1] - 12.0 * z[0] + D * pow32(z[0])}; };
}

ode::Tolerances log_tolerances(const AtmosphereOptions& opts, double w_scale) {
    ode::Tolerances tol = opts.tol;
    tol.atol *= w_scale;
    tol.h_max = std::min(tol.h_max, opts.h_max_log);
    return tol;
}

}  // namespace

AtmosphereOutcome shoot_atmosphere(double R0, double a, double b, double D, const AtmosphereOptions& opts) {
    check_handoff(R0, a, b, D);
    AtmosphereOutcome out;
    const double t0 = std::log(R0);
    const double R04 = (R0 * R0) * (R0 * R0);
    const double w0 = a * R04;
    const double wt0 = b * R04 * R0 + 4.0 * w0;
    out.profile.push(R0, a, b, -2.0 * b / R0 + D * pow32(a));
    if (b >= 0.0) {
        out.kind = AtmosphereKind::Unbounded;
        out.outer_radius = R0;
        out.diagnostic = "non-negative hand-off slope";
        return out;
    }
    const double u_floor = opts.vanish_tol * a;
    const double u_cap = opts.blowup_factor * a;
    bool decided = false;
    const auto on_step = [&](const ode::DenseStep<2>& st) {
        const double r1 = std::exp(st.x1);
        const double r14 = (r1 * r1) * (r1 * r1);
        if (st.y1[0] <= 0.0) {
            const double tz = ode::locate_root(st, [](double, const Z& z) { return z[0]; }, 0.0);
            const Z z = st.eval(tz);
            push_log_node(out.profile, {tz, 0.0, z[1]}, D);
            out.kind = AtmosphereKind::Compact;
            out.outer_radius = std::exp(tz);
            decided = true;
            return ode::Control::Stop;
        }
        if (st.y1[1] - 4.0 * st.y1[0] >= 0.0 && st.y1[0] / r14 > u_floor) {
            const double tz =
                ode::locate_root(st, [](double, const Z& z) { return z[1] - 4.0 * z[0]; }, 0.0);
            const Z z = st.eval(tz);
            push_log_node(out.profile, {tz, z[0], 4.0 * z[0]}, D);
            out.kind = AtmosphereKind::Unbounded;
            out.outer_radius = std::exp(tz);
            out.diagnostic = "slope reached zero with positive density";
            decided = true;
            return ode::Control::Stop;
        }
        push_log_node(out.profile, {st.x1, st.y1[0], st.y1[1]}, D);
        if (st.y1[0] / r14 > u_cap) {
            out.kind = AtmosphereKind::Unbounded;
            out.outer_radius = r1;
            out.diagnostic = "density exceeded the blow-up cap";
            decided = true;
            return ode::Control::Stop;
        }
        return ode::Control::Continue;
    };
    const double t_end = t0 + std::log(opts.r_max_factor);
    const ode::Status status =
        ode::integrate<2>(log_rhs(D), t0, Z{w0, wt0}, t_end, log_tolerances(opts, decaying_constant(D)), on_step);
    if (decided) return out;
    out.kind = AtmosphereKind::Unbounded;
    out.outer_radius = out.profile.r.back();
    out.diagnostic = status == ode::Status::ReachedEnd ? "radius cap reached without a decision"
                                                       : "integrator failure";
    return out;
}

SlopeBracket critical_bracket(double R0, double a, double D, double tol, const AtmosphereOptions& opts) {
    check_handoff(R0, a, 0.0, D);
    AtmosphereOptions shot = opts;
    shot.detect_critical = false;
    const auto kind = [&](double b) { return shoot_atmosphere(R0, a, b, D, shot).kind; };
    SlopeBracket br;
    br.unbounded = 0.0;
    double K = 4.0;
    bool found = false;
    for (int i = 0; i < 60; ++i, K *= 2.0) {
        const double b = -K * a / R0;
        if (kind(b) == AtmosphereKind::Compact) {
            br.compact = b;
            found = true;
            break;
        }
        br.unbounded = b;
    }
    if (!found) throw SolverError(ErrorCode::BracketFailure, "no compact slope found in the search range");
    if (kind(br.unbounded) != AtmosphereKind::Unbounded) {
        throw SolverError(ErrorCode::BracketFailure, "no unbounded slope found in the search range");
    }
    for (int i = 0; i < 200; ++i) {
        if (std::abs(br.unbounded - br.compact) <= tol * std::abs(br.compact)) break;
        const double m = br.mid();
        if (m == br.compact || m == br.unbounded) break;
        if (kind(m) == AtmosphereKind::Compact) {
            br.compact = m;
        } else {
            br.unbounded = m;
        }
    }
    return br;
}

double critical_slope(double R0, double a, double D, double tol, const AtmosphereOptions& opts) {
    return critical_bracket(R0, a, D, tol, opts).mid();
}

namespace {

// Critical trajectory through w(t0) = w0 in log variables, ordered by
// increasing t and ending within opts.manifold_offset of the saddle.
std::vector<LogNode> manifold_nodes(double R0, double a, double D, const AtmosphereOptions& opts) {
    const double C = decaying_constant(D);
    const double t0 = std::log(R0);
    const double w0 = a * (R0 * R0) * (R0 * R0);
    const double rel = w0 / C - 1.0;
    const double delta = opts.manifold_offset;
    const double dt = opts.h_max_log;
    std::vector<LogNode> nodes;

    if (std::abs(rel) <= delta) {
        // Already inside the linear neighbourhood of the saddle.
        const double span = opts.manifold_min_decades * std::log(10.0);
        const int n = static_cast<int>(std::ceil(span / dt));
        for (int i = 0; i <= n; ++i) {
            const double s = i * dt;
            const double dev = (w0 - C) * std::exp(kStableRate * s);
            nodes.push_back({t0 + s, C + dev, kStableRate * dev});
        }
        return nodes;
    }

    const double sgn = rel > 0.0 ? 1.0 : -1.0;
    const Z seed{C * (1.0 + sgn * delta), kStableRate * sgn * delta * C};
    std::vector<LogNode> back;  // decreasing t, starting at the seed (t = 0)
    back.push_back({0.0, seed[0], seed[1]});
    bool hit = false;
    const auto on_step = [&](const ode::DenseStep<2>& st) {
        const bool crossed = sgn > 0.0 ? st.y1[0] >= w0 : st.y1[0] <= w0;
        if (crossed) {
            const double tz = ode::locate_root(st, [w0](double, const Z& z) { return z[0] - w0; }, 0.0);
            const Z z = st.eval(tz);
            back.push_back({tz, w0, z[1]});
            hit = true;
            return ode::Control::Stop;
        }
        back.push_back({st.x1, st.y1[0], st.y1[1]});
        return ode::Control::Continue;
    };
    ode::integrate<2>(log_rhs(D), 0.0, seed, -400.0, log_tolerances(opts, std::max(C, w0)), on_step);
    if (!hit) throw SolverError(ErrorCode::NumericalBlowup, "stable manifold did not reach the hand-off value");

    const double shift = t0 - back.back().t;
    for (auto it = back.rbegin(); it != back.rend(); ++it) nodes.push_back({it->t + shift, it->w, it->wt});
    // Continue along the linearised manifold if the span is too short.
    const double span = opts.manifold_min_decades * std::log(10.0);
    const double t_seed = nodes.back().t;
    for (double s = dt; nodes.back().t < t0 + span; s += dt) {
        const double dev = sgn * delta * C * std::exp(kStableRate * s);
        nodes.push_back({t_seed + s, C + dev, kStableRate * dev});
    }
    return nodes;
}

}  // namespace

double manifold_slope(double R0, double a, double D, const AtmosphereOptions& opts) {
    check_handoff(R0, a, 0.0, D);
    const auto nodes = manifold_nodes(R0, a, D, opts);
    const LogNode& n = nodes.front();
    const double R05 = R0 * (R0 * R0) * (R0 * R0);
    return (n.wt - 4.0 * n.w) / R05;
}

SpeciesProfile critical_profile(double R0, double a, double D, const AtmosphereOptions& opts) {
    check_handoff(R0, a, 0.0, D);
    SpeciesProfile p;
    for (const auto& n : manifold_nodes(R0, a, D, opts)) push_log_node(p, n, D);
    p.r.front() = R0;
    p.u.front() = a;
    return p;
}

TailEstimate tail_mass(const SpeciesProfile& p, double D, double max_spread) {
    if (p.r.size() < 2 || !(D > 0.0)) throw SolverError(ErrorCode::EnvelopeFitFailure, "profile too short");
    if (!(p.u.back() > 0.0)) {
        throw SolverError(ErrorCode::EnvelopeFitFailure, "profile ends with zero density (compact support)");
    }
    const double R = p.r.back();
    std::vector<double> w;
    for (std::size_t i = 0; i < p.r.size(); ++i) {
        if (p.r[i] >= 0.1 * R) {
            const double r2 = p.r[i] * p.r[i];
            w.push_back(p.u[i] * r2 * r2);
        }
    }
    TailEstimate out;
    // The envelope constant is the value at the outermost node, where the
    // profile is closest to its asymptote.
    out.c = w.back();
    for (double x : w) out.spread = std::max(out.spread, std::abs(x - out.c) / out.c);
    if (out.spread > max_spread) {
        throw SolverError(ErrorCode::EnvelopeFitFailure,
                          "u r^4 varies by " + std::to_string(out.spread) + " over the last decade");
    }
    out.mass = 4.0 * M_PI * pow32(out.c) / (3.0 * R * R * R);
    return out;
}

AtmosphereOutcome integrate_atmosphere(double R0, double a, double b, double D, const AtmosphereOptions& opts) {
    check_handoff(R0, a, b, D);
    if (opts.detect_critical && b < 0.0) {
        const double b_hat = opts.critical_method == CriticalMethod::Manifold
                                 ? manifold_slope(R0, a, D, opts)
                                 : critical_slope(R0, a, D, opts.bisection_tol, opts);
        if (std::abs(b - b_hat) <= opts.critical_rel_tol * std::abs(b_hat)) {
            AtmosphereOutcome out;
            out.kind = AtmosphereKind::CriticalDecay;
            out.b_hat = b_hat;
            out.profile = critical_profile(R0, a, D, opts);
            const TailEstimate tail = tail_mass(out.profile, D);
            out.envelope_c = tail.c;
            out.tail_mass = tail.mass;
            out.outer_radius = out.profile.r.back();
            return out;
        }
        AtmosphereOutcome out = shoot_atmosphere(R0, a, b, D, opts);
        out.b_hat = b_hat;
        return out;
    }
    return shoot_atmosphere(R0, a, b, D, opts);
}

}  // namespace tfstar
