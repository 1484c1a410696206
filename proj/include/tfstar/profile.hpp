// profile.hpp
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tfstar {

/// Radial samples of the transformed densities u_f (rho_f = u_f^{3/2}).
/// Second derivatives are optional; when present the interpolant between
/// nodes is quintic Hermite, otherwise cubic Hermite.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> u_e;
    std::vector<double> u_p;
    std::vector<double> du_e;
    std::vector<double> du_p;
    std::vector<double> d2u_e;
    std::vector<double> d2u_p;

    /// Envelope constants for profiles that continue past the last node as
    /// u_f = tail_f * r^{-4}. Zero means the species ends at the last node.
    double tail_e = 0.0;
    double tail_p = 0.0;

    std::size_t size() const { return r.size(); }
    bool empty() const { return r.empty(); }
    bool has_second_derivatives() const { return d2u_e.size() == r.size() && d2u_p.size() == r.size(); }

    void push(double radius, double ue, double up, double due, double dup, double d2ue, double d2up) {
        r.push_back(radius);
        u_e.push_back(ue);
        u_p.push_back(up);
        du_e.push_back(due);
        du_p.push_back(dup);
        d2u_e.push_back(d2ue);
        d2u_p.push_back(d2up);
    }

    /// Appends other, skipping its first node when it coincides with our last.
    void append(const RadialProfile& other);

    /// Throws SolverError(InvalidProfile) unless radii are strictly increasing,
    /// non-negative, and every column has matching length.
    void validate() const;

    double outer_radius() const { return r.empty() ? 0.0 : r.back(); }
};

/// 3/2 power with negative arguments clamped to zero.
inline double pow32(double u) {
    if (u <= 0.0) return 0.0;
    return u * std::sqrt(u);
}

/// Piecewise Hermite interpolant of one sampled function.
class HermiteCurve {
public:
    HermiteCurve(std::span<const double> x, std::span<const double> f, std::span<const double> df,
                 std::span<const double> d2f = {});

    /// Value (order 0) or derivative (order 1, 2) on the given interval.
    double eval(std::size_t interval, double x, int order = 0) const;
    double operator()(std::size_t interval, double x) const { return eval(interval, x, 0); }
    double operator()(double x) const;
    /// Index of the interval containing x, clamped to the valid range.
    std::size_t locate(double x) const;
    std::size_t intervals() const { return x_.size() < 2 ? 0 : x_.size() - 1; }

private:
    std::span<const double> x_, f_, df_, d2f_;
};

/// Interpolated state of both species at radius r (inside the profile).
struct ProfileSample {
    double r, u_e, u_p, du_e, du_p;
};

ProfileSample sample(const RadialProfile& p, double r);

/// CSV with header r,u_e,u_p,du_e,du_p,rho_e,rho_p and 17 significant digits.
void write_profile_csv(const RadialProfile& p, const std::string& path);
RadialProfile read_profile_csv(const std::string& path);

/// Rescales the radial coordinate and amplitude: r -> r * stretch,
/// u -> u * amp (derivatives transformed consistently).
RadialProfile rescale(const RadialProfile& p, double stretch, double amp);

}  // namespace tfstar
