#include "tfstar/constants.hpp"

#include <cmath>
#include <numbers>

#include "tfstar/error.hpp"

namespace tfstar {

namespace {

double three_over_pi_23() { return std::cbrt(std::pow(3.0 / std::numbers::pi, 2.0)); }

void require(bool ok, const std::string& what) {
    if (!ok) throw SolverError(ErrorCode::InadmissibleConstants, what);
}

}  // namespace

double kinetic_prefactor(double h, double m) { return 3.0 * h * h / (40.0 * m) * three_over_pi_23(); }

double planck_from_prefactor(double k, double m) { return std::sqrt(40.0 * m * k / (3.0 * three_over_pi_23())); }

ConstantSet ConstantSet::desk() {
    ConstantSet c;
    c.q = 1.0;
    c.G = 0.05;
    c.m_e = 1.0;
    c.m_p = 2.0;
    c.k_e = 1.0;
    c.k_p = 0.5;
    c.c = 10.0;
    c.h = planck_from_prefactor(c.k_e, c.m_e);
    return c;
}

ConstantSet ConstantSet::from_fundamental(double h, double c, double G, double q, double m_e, double m_p) {
    ConstantSet out;
    out.h = h;
    out.c = c;
    out.G = G;
    out.q = q;
    out.m_e = m_e;
    out.m_p = m_p;
    out.k_e = kinetic_prefactor(h, m_e);
    out.k_p = kinetic_prefactor(h, m_p);
    return out;
}

void ConstantSet::validate() const {
    auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    require(finite_pos(h) && finite_pos(c) && finite_pos(q), "h, c and q must be positive");
    require(finite_pos(m_e) && finite_pos(m_p), "masses must be positive");
    require(finite_pos(k_e) && finite_pos(k_p), "kinetic prefactors must be positive");
    require(std::isfinite(G) && G >= 0.0, "G must be non-negative");
    require(m_p > m_e, "m_p must exceed m_e");
    require(q * q > G * m_p * m_p, "q^2 must exceed G m_p^2");
    require(q * q > G * m_e * m_e, "q^2 must exceed G m_e^2");
}

CoefficientSet derive_coefficients(const ConstantSet& consts) {
    consts.validate();
    const double s = 12.0 * std::numbers::pi / 5.0;
    const double q2 = consts.q * consts.q;
    const double G = consts.G;
    CoefficientSet out;
    out.A = s / consts.k_e * (q2 + G * consts.m_p * consts.m_e);
    out.B = s / consts.k_e * (q2 - G * consts.m_e * consts.m_e);
    out.E = s / consts.k_p * (q2 + G * consts.m_p * consts.m_e);
    out.F = s / consts.k_p * (q2 - G * consts.m_p * consts.m_p);

    require(out.A > 0 && out.B > 0 && out.E > 0 && out.F > 0, "bulk coefficients must be positive");
    // The orderings are strict for G > 0 and degenerate to equalities at G = 0.
    if (G > 0.0) {
        require(out.E > out.F, "E > F violated");
        require(out.A > out.B, "A > B violated");
        require(out.E * out.A > out.B * out.F, "E A > B F violated");
    }
    return out;
}

AdmissibilityWindows ratio_window(const ConstantSet& consts) {
    const CoefficientSet co = derive_coefficients(consts);
    const double q2 = consts.q * consts.q;
    const double g_ep = consts.G * consts.m_e * consts.m_p / q2;
    AdmissibilityWindows w;
    w.ratio_lo = (1.0 - consts.G * consts.m_p * consts.m_p / q2) / (1.0 + g_ep);
    w.ratio_hi = (1.0 + g_ep) / (1.0 - consts.G * consts.m_e * consts.m_e / q2);
    w.central_lo = std::pow(co.B / co.A, 2.0 / 3.0);
    w.central_hi = std::pow(co.E / co.F, 2.0 / 3.0);
    return w;
}

const char* to_string(RatioStatus s) {
    switch (s) {
        case RatioStatus::Admissible: return "Admissible";
        case RatioStatus::Boundary: return "Boundary";
        case RatioStatus::Inadmissible: return "Inadmissible";
    }
    return "?";
}

RatioStatus check_ratio(double n_e, double n_p, const AdmissibilityWindows& windows, double boundary_rel_tol) {
    if (!(n_e > 0.0) || !(n_p > 0.0)) {
        throw SolverError(ErrorCode::NonPositiveInput, "particle counts must be positive");
    }
    const double ratio = n_e / n_p;
    const auto near = [&](double edge) { return std::abs(ratio - edge) <= boundary_rel_tol * edge; };
    if (near(windows.ratio_lo) || near(windows.ratio_hi)) return RatioStatus::Boundary;
    if (ratio > windows.ratio_lo && ratio < windows.ratio_hi) return RatioStatus::Admissible;
    return RatioStatus::Inadmissible;
}

}  // namespace tfstar
