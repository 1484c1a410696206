#include "tfstar/special.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>

#include "tfstar/error.hpp"
#include "tfstar/ode.hpp"

namespace tfstar {

double proportionality_residual(double d, double k, const CoefficientSet& c) {
    const double p = d / 3.0;
    return c.E * std::pow(k, p) - c.F * std::pow(k, p - 1.0) + c.B * k - c.A;
}

double solve_kd(double d, const CoefficientSet& c, double tol) {
    if (!(d > 3.0 && d < 6.0)) throw SolverError(ErrorCode::NonPositiveInput, "d must lie in (3, 6)");
    const double lo = 0.0, hi = c.E / c.F;
    const double f_lo = proportionality_residual(d, lo, c);
    const double f_hi = proportionality_residual(d, hi, c);
    if (f_hi == 0.0) return hi;  // degenerate coefficients, e.g. G = 0 with k_e = k_p
    if (!(f_lo < 0.0 && f_hi > 0.0)) {
        throw SolverError(ErrorCode::NoRootInBracket, "proportionality condition has no sign change on [0, E/F]");
    }
    std::uintmax_t iters = 300;
    const auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol * std::max(1.0, std::abs(a)); };
    const auto f = [&](double k) { return proportionality_residual(d, k, c); };
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, stop, iters);
    return std::abs(f(r.first)) <= std::abs(f(r.second)) ? r.first : r.second;
}

LaneEmdenSolution lane_emden(double n, const LaneEmdenOptions& opts) {
    if (!(n >= 0.0)) throw SolverError(ErrorCode::NonPositiveInput, "Lane-Emden index must be non-negative");
    using Y = ode::Vec<2>;
    const auto power = [n](double th) { return th > 0.0 ? std::pow(th, n) : 0.0; };
    const auto rhs = [&](double x, const Y& y) { return Y{y[1], -2.0 / x * y[1] - power(y[0])}; };

    LaneEmdenSolution out;
    out.n = n;
    auto push = [&](double x, double th, double dth, double d2) {
        out.xi.push_back(x);
        out.theta.push_back(th);
        out.dtheta.push_back(dth);
        out.d2theta.push_back(d2);
    };
    push(0.0, 1.0, 0.0, -1.0 / 3.0);
    const double x0 = opts.xi_start;
    const Y y0{1.0 - x0 * x0 / 6.0 + n * std::pow(x0, 4) / 120.0, -x0 / 3.0 + n * std::pow(x0, 3) / 30.0};
    push(x0, y0[0], y0[1], rhs(x0, y0)[1]);

    ode::Tolerances tol;
    tol.rtol = opts.rtol;
    tol.atol = opts.atol;
    tol.h_max = opts.h_max;
    const auto status = ode::integrate<2>(rhs, x0, y0, opts.xi_max, tol, [&](const ode::DenseStep<2>& st) {
        if (st.y1[0] <= 0.0) {
            const double xz = ode::locate_root(st, [](double, const Y& y) { return y[0]; }, 0.0);
            const Y y = st.eval(xz);
            out.has_zero = true;
            out.xi1 = xz;
            out.dtheta1 = y[1];
            push(xz, 0.0, y[1], -2.0 / xz * y[1]);
            return ode::Control::Stop;
        }
        push(st.x1, st.y1[0], st.y1[1], rhs(st.x1, st.y1)[1]);
        return ode::Control::Continue;
    });
    if (status != ode::Status::Stopped && status != ode::Status::ReachedEnd) {
        throw SolverError(ErrorCode::NumericalBlowup, "Lane-Emden integration failed");
    }
    return out;
}

SpecialSolution special_profile(double alpha, const CoefficientSet& c, const LaneEmdenOptions& opts) {
    if (!(alpha > 0.0)) throw SolverError(ErrorCode::NonPositiveInput, "alpha must be positive");
    SpecialSolution s;
    s.d = 5.0;
    s.index = 1.5;
    s.k = solve_kd(s.d, c);
    s.alpha = alpha;
    const double ratio_u = std::pow(s.k, 2.0 / 3.0);
    s.beta = ratio_u * alpha;
    s.curvature = c.E * s.k - c.F;
    if (!(s.curvature > 0.0)) {
        throw SolverError(ErrorCode::NoRootInBracket, "proportional solution does not decrease");
    }
    s.radial_scale = 1.0 / std::sqrt(s.curvature * std::sqrt(alpha));

    const LaneEmdenSolution le = lane_emden(s.index, opts);
    s.xi1 = le.xi1;
    s.dtheta1 = le.dtheta1;
    s.radius = s.radial_scale * le.xi1;
    const double a = s.radial_scale;
    for (std::size_t i = 0; i < le.xi.size(); ++i) {
        const double up = alpha * le.theta[i];
        const double dup = alpha * le.dtheta[i] / a;
        const double d2up = alpha * le.d2theta[i] / (a * a);
        s.profile.push(a * le.xi[i], ratio_u * up, up, ratio_u * dup, dup, ratio_u * d2up, d2up);
    }
    return s;
}

}  // namespace tfstar
