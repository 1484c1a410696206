// ode.hpp
//
// Adaptive Dormand-Prince 5(4) integrator with the standard fourth-order
// continuous extension. Every accepted step is handed to the caller as a
// DenseStep so events can be located on the interpolant without
// re-integrating.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

namespace tfstar::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

struct Tolerances {
    double rtol = 1e-12;
    double atol = 1e-14;
    double h_init = 0.0;  // 0 selects an automatic initial step
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 2'000'000;
};

enum class Status { ReachedEnd, Stopped, StepUnderflow, MaxSteps, NonFinite };

enum class Control { Continue, Stop };

template <std::size_t N>
struct DenseStep {
    double x0 = 0.0;
    double x1 = 0.0;
    Vec<N> y0{};
    Vec<N> y1{};
    Vec<N> f0{};
    Vec<N> f1{};
    std::array<Vec<N>, 5> rcont{};

    double h() const { return x1 - x0; }

    Vec<N> eval(double x) const {
        const double t = (x - x0) / (x1 - x0);
        const double t1 = 1.0 - t;
        Vec<N> out;
        for (std::size_t i = 0; i < N; ++i) {
            out[i] = rcont[0][i] + t * (rcont[1][i] + t1 * (rcont[2][i] + t * (rcont[3][i] + t1 * rcont[4][i])));
        }
        return out;
    }
};

namespace detail {

// Butcher tableau of the Dormand-Prince pair.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

template <std::size_t N>
double error_norm(const Vec<N>& err, const Vec<N>& y0, const Vec<N>& y1, const Tolerances& tol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = tol.atol + tol.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double v = err[i] / sc;
        acc += v * v;
    }
    return std::sqrt(acc / static_cast<double>(N));
}

template <std::size_t N>
bool all_finite(const Vec<N>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace detail

/// Integrates y' = rhs(x, y) from x0 toward x_end (either direction). After
/// each accepted step on_step(step) is invoked; returning Control::Stop ends
/// the integration with Status::Stopped.
template <std::size_t N, class Rhs, class OnStep>
Status integrate(Rhs&& rhs, double x0, const Vec<N>& y_start, double x_end, const Tolerances& tol,
                 OnStep&& on_step) {
    using namespace detail;
    const double dir = x_end >= x0 ? 1.0 : -1.0;
    double x = x0;
    Vec<N> y = y_start;
    Vec<N> k1 = rhs(x, y);
    if (!all_finite(k1)) return Status::NonFinite;

    double h = tol.h_init;
    if (h <= 0.0) {
        // Hairer's heuristic for the first step.
        double d0 = 0.0, d1n = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = tol.atol + tol.rtol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1n += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1n = std::sqrt(d1n / N);
        h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h = std::min(h, std::abs(x_end - x0));
    }
    h = std::min(h, tol.h_max);

    double fac_max = 5.0;
    std::size_t steps = 0;
    Vec<N> k2, k3, k4, k5, k6, k7, yt, y1, err;
    while (dir * (x_end - x) > 0.0) {
        if (++steps > tol.max_steps) return Status::MaxSteps;
        const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
        if (h < h_min) return Status::StepUnderflow;
        bool last = false;
        if (h >= std::abs(x_end - x)) {
            h = std::abs(x_end - x);
            last = true;
        }
        const double hs = dir * h;

        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * a21 * k1[i];
        k2 = rhs(x + c2 * hs, yt);
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        k3 = rhs(x + c3 * hs, yt);
        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = rhs(x + c4 * hs, yt);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = rhs(x + c5 * hs, yt);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const double x_new = last ? x_end : x + hs;
        k6 = rhs(x + hs, yt);
        for (std::size_t i = 0; i < N; ++i)
            y1[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        k7 = rhs(x_new, y1);
        for (std::size_t i = 0; i < N; ++i)
            err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

        double en = error_norm(err, y, y1, tol);
        if (!std::isfinite(en) || !all_finite(y1) || !all_finite(k7)) en = 1e10;

        if (en <= 1.0) {
            DenseStep<N> st;
            st.x0 = x;
            st.x1 = x_new;
            st.y0 = y;
            st.y1 = y1;
            st.f0 = k1;
            st.f1 = k7;
            for (std::size_t i = 0; i < N; ++i) {
                const double ydiff = y1[i] - y[i];
                const double bspl = hs * k1[i] - ydiff;
                st.rcont[0][i] = y[i];
                st.rcont[1][i] = ydiff;
                st.rcont[2][i] = bspl;
                st.rcont[3][i] = ydiff - hs * k7[i] - bspl;
                st.rcont[4][i] =
                    hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            x = x_new;
            y = y1;
            k1 = k7;
            if (on_step(static_cast<const DenseStep<N>&>(st)) == Control::Stop) return Status::Stopped;
            const double fac = en > 0.0 ? 0.9 * std::pow(en, -0.2) : fac_max;
            h = std::min(h * std::clamp(fac, 0.2, fac_max), tol.h_max);
            fac_max = 5.0;
        } else {
            const double fac = 0.9 * std::pow(en, -0.2);
            h *= std::clamp(fac, 0.1, 1.0);
            fac_max = 1.0;
        }
    }
    return Status::ReachedEnd;
}

/// Locates x in [step.x0, step.x1] where g(x, y(x)) changes sign, using the
/// dense interpolant. Requires a sign change (or zero) at the endpoints.
template <std::size_t N, class G>
double locate_root(const DenseStep<N>& step, G&& g, double abs_tol) {
    const auto fun = [&](double x) { return g(x, step.eval(x)); };
    double a = std::min(step.x0, step.x1);
    double b = std::max(step.x0, step.x1);
    double fa = fun(a);
    double fb = fun(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    std::uintmax_t iters = 200;
    const auto tol = [&](double lo, double hi) {
        return std::abs(hi - lo) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo)) ||
               (std::abs(fun(0.5 * (lo + hi))) <= abs_tol &&
                std::abs(hi - lo) <= 1e-12 * std::max(1.0, std::abs(lo)));
    };
    const auto root = boost::math::tools::toms748_solve(fun, a, b, fa, fb, tol, iters);
    // Return the endpoint with the smaller residual.
    const double ra = std::abs(fun(root.first));
    const double rb = std::abs(fun(root.second));
    return ra <= rb ? root.first : root.second;
}

}  // namespace tfstar::ode
