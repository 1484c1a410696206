#include "tfstar/bulk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tfstar/error.hpp"

namespace tfstar {

std::string CentralSigns::rejection() const {
    std::string out;
    if (!(phi0 < 0.0)) out += "phi(0)=" + std::to_string(phi0) + " is not negative";
    if (!(psi0 < 0.0)) {
        if (!out.empty()) out += "; ";
        out += "psi(0)=" + std::to_string(psi0) + " is not negative";
    }
    return out;
}

CentralSigns initial_signs(double alpha, double beta, const CoefficientSet& k) {
    CentralSigns s;
    s.phi0 = -k.E * pow32(beta) + k.F * pow32(alpha);
    s.psi0 = -k.A * pow32(alpha) + k.B * pow32(beta);
    return s;
}

BulkState series_start(double alpha, double beta, double h, const CoefficientSet& k) {
    const CentralSigns s = initial_signs(alpha, beta, k);
    BulkState st;
    st.r = h;
    st.u_p = alpha + s.phi0 * h * h / 6.0;
    st.u_e = beta + s.psi0 * h * h / 6.0;
    st.du_p = s.phi0 * h / 3.0;
    st.du_e = s.psi0 * h / 3.0;
    return st;
}

double bulk_length_scale(double alpha, double beta, const CoefficientSet& k) {
    const CentralSigns s = initial_signs(alpha, beta, k);
    const double curv = std::max(std::abs(s.phi0), std::abs(s.psi0));
    if (!(curv > 0.0)) return 1.0;
    return std::sqrt(std::max(alpha, beta) / curv);
}

std::array<double, 2> bulk_rhs(const BulkState& s, const CoefficientSet& k) {
    const double re = pow32(s.u_e), rp = pow32(s.u_p);
    return {-2.0 / s.r * s.du_e + k.B * re - k.A * rp, -2.0 / s.r * s.du_p + k.F * rp - k.E * re};
}

const char* to_string(BulkEvent e) {
    switch (e) {
        case BulkEvent::VanishE: return "VanishE";
        case BulkEvent::VanishP: return "VanishP";
        case BulkEvent::SimultaneousVanish: return "SimultaneousVanish";
        case BulkEvent::RadiusCap: return "RadiusCap";
    }
    return "?";
}

namespace {

using Y = ode::Vec<4>;  // u_e, u_p, du_e, du_p

BulkState to_state(double r, const Y& y) { return {r, y[0], y[1], y[2], y[3]}; }

void push_node(RadialProfile& p, const BulkState& s, const CoefficientSet& k) {
    const auto d2 = bulk_rhs(s, k);
    p.push(s.r, s.u_e, s.u_p, s.du_e, s.du_p, d2[0], d2[1]);
}

double extrapolated_zero(double r, double u, double du) {
    if (du < 0.0) return r - u / du;
    return std::numeric_limits<double>::infinity();
}

}  // namespace

BulkOutcome integrate_bulk(double alpha, double beta, const CoefficientSet& k, const BulkOptions& opts) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw SolverError(ErrorCode::NonPositiveInput, "central values must be positive and finite");
    }
    const CentralSigns signs = initial_signs(alpha, beta, k);
    if (!signs.both_negative()) {
        throw SolverError(ErrorCode::Inadmissible, "central signs rejected: " + signs.rejection());
    }

    BulkOutcome out;
    const double L = bulk_length_scale(alpha, beta, k);
    out.length_scale = L;
    const double h0 = opts.start_fraction * L;
    const double scale_u = std::max(alpha, beta);

    out.profile.push(0.0, beta, alpha, 0.0, 0.0, signs.psi0 / 3.0, signs.phi0 / 3.0);
    const BulkState start = series_start(alpha, beta, h0, k);
    push_node(out.profile, start, k);

    ode::Tolerances tol = opts.tol;
    tol.atol *= scale_u;
    tol.h_max = std::min(tol.h_max, opts.h_max_factor * L);

    const auto rhs = [&](double r, const Y& y) {
        const auto d2 = bulk_rhs(to_state(r, y), k);
        return Y{y[2], y[3], d2[0], d2[1]};
    };

    bool finished = false;
    const auto on_step = [&](const ode::DenseStep<4>& st) {
        const bool cross_e = st.y1[0] <= 0.0;
        const bool cross_p = st.y1[1] <= 0.0;
        if (cross_e || cross_p) {
            const double abs_tol = opts.vanish_tol * scale_u;
            double r_e = std::numeric_limits<double>::infinity();
            double r_p = r_e;
            if (cross_e) r_e = ode::locate_root(st, [](double, const Y& y) { return y[0]; }, abs_tol);
            if (cross_p) r_p = ode::locate_root(st, [](double, const Y& y) { return y[1]; }, abs_tol);
            const bool e_first = r_e <= r_p;
            const double r_f = e_first ? r_e : r_p;
            Y y = st.eval(r_f);
            BulkState ev = to_state(r_f, y);
            double r_other;
            if (e_first) {
                ev.u_e = 0.0;
                r_other = cross_p ? r_p : extrapolated_zero(r_f, ev.u_p, ev.du_p);
            } else {
                ev.u_p = 0.0;
                r_other = cross_e ? r_e : extrapolated_zero(r_f, ev.u_e, ev.du_e);
            }
            out.event_radius = r_f;
            out.other_vanish_radius = r_other;
            if (std::abs(r_other - r_f) < opts.simultaneous_rel * r_f) {
                out.event = BulkEvent::SimultaneousVanish;
                ev.u_e = 0.0;
                ev.u_p = 0.0;
            } else {
                out.event = e_first ? BulkEvent::VanishE : BulkEvent::VanishP;
            }
            out.state_at_event = ev;
            if (r_f > out.profile.r.back()) push_node(out.profile, ev, k);
            finished = true;
            return ode::Control::Stop;
        }
        if (!out.turning_radius && (st.y1[2] > 0.0 || st.y1[3] > 0.0)) {
            const std::size_t c = st.y1[2] > 0.0 ? 2 : 3;
            out.turning_radius = ode::locate_root(st, [c](double, const Y& y) { return y[c]; }, 0.0);
        }
        push_node(out.profile, to_state(st.x1, st.y1), k);
        return ode::Control::Continue;
    };

    const Y y0{start.u_e, start.u_p, start.du_e, start.du_p};
    const double r_max = opts.r_max_factor * L;
    const ode::Status status = ode::integrate<4>(rhs, h0, y0, r_max, tol, on_step);
    if (finished) return out;
    if (status == ode::Status::ReachedEnd) {
        out.event = BulkEvent::RadiusCap;
        out.event_radius = r_max;
        const std::size_t n = out.profile.size() - 1;
        out.state_at_event = {out.profile.r[n], out.profile.u_e[n], out.profile.u_p[n], out.profile.du_e[n],
                              out.profile.du_p[n]};
        out.other_vanish_radius = std::numeric_limits<double>::infinity();
        return out;
    }
    throw SolverError(ErrorCode::NumericalBlowup, "bulk integration failed near r=" +
                                                      std::to_string(out.profile.r.back()));
}

double bulk_residual(const RadialProfile& p, const CoefficientSet& k) {
    p.validate();
    const HermiteCurve ce(p.r, p.u_e, p.du_e, p.d2u_e);
    const HermiteCurve cp(p.r, p.u_p, p.du_p, p.d2u_p);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (p.r[i] <= 0.0) continue;
        if (!(p.u_e[i] > 0.0 && p.u_e[i + 1] > 0.0 && p.u_p[i] > 0.0 && p.u_p[i + 1] > 0.0)) continue;
        const double x = 0.5 * (p.r[i] + p.r[i + 1]);
        BulkState s{x, ce.eval(i, x, 0), cp.eval(i, x, 0), ce.eval(i, x, 1), cp.eval(i, x, 1)};
        const auto d2 = bulk_rhs(s, k);
        const double re = pow32(s.u_e), rp = pow32(s.u_p);
        scale = std::max({scale, k.A * rp, k.B * re, k.E * re, k.F * rp});
        worst = std::max({worst, std::abs(ce.eval(i, x, 2) - d2[0]), std::abs(cp.eval(i, x, 2) - d2[1])});
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

}  // namespace tfstar
