#include "tfstar/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "tfstar/error.hpp"

namespace tfstar {

const GaussRule& gauss8() {
    static const GaussRule rule = [] {
        // boost stores the non-negative abscissae only.
        using G = boost::math::quadrature::gauss<double, 8>;
        const auto& xs = G::abscissa();
        const auto& ws = G::weights();
        GaussRule g;
        for (std::size_t k = 0; k < 4; ++k) {
            g.x[3 - k] = -xs[k];
            g.w[3 - k] = ws[k];
            g.x[4 + k] = xs[k];
            g.w[4 + k] = ws[k];
        }
        return g;
    }();
    return rule;
}

ProfileQuadrature::ProfileQuadrature(const RadialProfile& p, Exec exec) {
    p.validate();
    const GaussRule& g = gauss8();
    const HermiteCurve ce(p.r, p.u_e, p.du_e, p.d2u_e);
    const HermiteCurve cp(p.r, p.u_p, p.du_p, p.d2u_p);
    const std::size_t nint = p.size() - 1;
    constexpr std::size_t K = kPoints;
    r_.resize(nint * K);
    w_.resize(nint * K);
    ue_.resize(nint * K);
    up_.resize(nint * K);
    rh_.resize(2 * nint * K);
    wh_.resize(2 * nint * K);
    ueh_.resize(2 * nint * K);
    uph_.resize(2 * nint * K);
    rn_.resize(nint * K * K);
    wn_.resize(nint * K * K);
    uen_.resize(nint * K * K);
    upn_.resize(nint * K * K);
    outer_ = p.r.back();

    for_each_index(nint, exec, [&](std::size_t i) {
        const double a = p.r[i], b = p.r[i + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t j = 0; j < K; ++j) {
            const std::size_t idx = i * K + j;
            const double x = mid + half * g.x[j];
            r_[idx] = x;
            w_[idx] = half * g.w[j];
            ue_[idx] = ce.eval(i, x);
            up_[idx] = cp.eval(i, x);
            // nested rule on [a, x]
            const double nh = 0.5 * (x - a), nm = 0.5 * (x + a);
            for (std::size_t m = 0; m < K; ++m) {
                const std::size_t n = idx * K + m;
                const double xn = nm + nh * g.x[m];
                rn_[n] = xn;
                wn_[n] = nh * g.w[m];
                uen_[n] = ce.eval(i, xn);
                upn_[n] = cp.eval(i, xn);
            }
        }
        for (std::size_t s = 0; s < 2; ++s) {
            const double lo = s == 0 ? a : mid;
            const double q = 0.5 * half, c = lo + q;
            for (std::size_t j = 0; j < K; ++j) {
                const std::size_t idx = (2 * i + s) * K + j;
                const double x = c + q * g.x[j];
                rh_[idx] = x;
                wh_[idx] = q * g.w[j];
                ueh_[idx] = ce.eval(i, x);
                uph_[idx] = cp.eval(i, x);
            }
        }
    });
}

}  // namespace tfstar
