// quadrature.hpp
//
// Gauss-Legendre quadrature over the Hermite interpolant of a radial
// profile. Each interval between profile nodes gets 8 Gauss points; the
// error estimate is the change when every interval is split in half.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "tfstar/parallel.hpp"
#include "tfstar/profile.hpp"

namespace tfstar {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // |coarse - refined|
};

/// 8-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::array<double, 8> x{};
    std::array<double, 8> w{};
};

const GaussRule& gauss8();

class ProfileQuadrature {
public:
    static constexpr std::size_t kPoints = 8;

    explicit ProfileQuadrature(const RadialProfile& p, Exec exec = Exec::Serial);

    /// Gauss nodes (flattened, kPoints per interval, increasing in r).
    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& weight() const { return w_; }
    const std::vector<double>& u_e() const { return ue_; }
    const std::vector<double>& u_p() const { return up_; }
    std::size_t size() const { return r_.size(); }
    double outer_radius() const { return outer_; }

    /// Integral of f(r, u_e, u_p) over the profile range. The returned value
    /// is the refined (half-interval) sum.
    template <class F>
    QuadResult integrate(F&& f) const {
        double coarse = 0.0, fine = 0.0;
        for (std::size_t j = 0; j < r_.size(); ++j) coarse += w_[j] * f(r_[j], ue_[j], up_[j]);
        for (std::size_t j = 0; j < rh_.size(); ++j) fine += wh_[j] * f(rh_[j], ueh_[j], uph_[j]);
        return {fine, std::abs(fine - coarse)};
    }

    /// Running integral of f from the first profile node up to each Gauss
    /// node, using a nested 8-point rule on [x_i, node]. The total over the
    /// whole profile is written to *total.
    template <class F>
    std::vector<double> cumulative(F&& f, double* total = nullptr) const {
        std::vector<double> out(r_.size());
        double base = 0.0;
        const std::size_t nint = r_.size() / kPoints;
        for (std::size_t i = 0; i < nint; ++i) {
            for (std::size_t j = 0; j < kPoints; ++j) {
                const std::size_t g = i * kPoints + j;
                double acc = 0.0;
                for (std::size_t m = 0; m < kPoints; ++m) {
                    const std::size_t n = g * kPoints + m;
                    acc += wn_[n] * f(rn_[n], uen_[n], upn_[n]);
                }
                out[g] = base + acc;
            }
            double step = 0.0;
            for (std::size_t j = 0; j < kPoints; ++j) {
                const std::size_t g = i * kPoints + j;
                step += w_[g] * f(r_[g], ue_[g], up_[g]);
            }
            base += step;
        }
        if (total) *total = base;
        return out;
    }

private:
    std::vector<double> r_, w_, ue_, up_;      // one rule per interval
    std::vector<double> rh_, wh_, ueh_, uph_;  // one rule per half interval
    std::vector<double> rn_, wn_, uen_, upn_;  // nested rules for cumulative()
    double outer_ = 0.0;
};

}  // namespace tfstar
