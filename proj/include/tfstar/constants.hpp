// constants.hpp
//
// Model constants for the two-fluid Thomas-Fermi star, the ODE coefficients
// derived from them, and the closed-form admissibility windows on the
// particle-count ratio and on the central-density ratio.
#pragma once


namespace tfstar {

/// Physical constants in a self-consistent nondimensional unit system.
/// k_e and k_p are the Thomas-Fermi kinetic prefactors; they are derived
/// from h unless set explicitly.
struct ConstantSet {
    double h = 0.0;
    double c = 0.0;
    double G = 0.0;
    double q = 0.0;
    double m_e = 0.0;
    double m_p = 0.0;
    double k_e = 0.0;
    double k_p = 0.0;

    /// q=1, G=0.05, m_e=1, m_p=2, k_e=1, k_p=1/2, c=10, with h chosen so
    /// that the h-based kinetic prefactors reproduce k_e and k_p exactly.
    static ConstantSet desk();

    /// Builds from the given fundamental constants; k_e, k_p from h.
    static ConstantSet from_fundamental(double h, double c, double G, double q, double m_e,
                                        double m_p);

    /// Throws SolverError(InadmissibleConstants) on any violated invariant.
    void validate() const;

    ConstantSet with_gravity(double g) const {
        ConstantSet out = *this;
        out.G = g;
        return out;
    }
};

/// (3 h^2 / 40 m)(3/pi)^{2/3}
double kinetic_prefactor(double h, double m);

/// Inverse of kinetic_prefactor for h.
double planck_from_prefactor(double k, double m);

/// Bulk ODE coefficients. The electron equation reads
///   u_e'' + (2/r) u_e' = B u_e^{3/2} - A u_p^{3/2}
/// and the proton equation
///   u_p'' + (2/r) u_p' = F u_p^{3/2} - E u_e^{3/2}.
struct CoefficientSet {
    double A = 0.0;
    double B = 0.0;
    double E = 0.0;
    double F = 0.0;

    /// Atmosphere coefficient when only electrons survive.
    double D_e() const { return B; }
    /// Atmosphere coefficient when only protons survive.
    double D_p() const { return F; }
};

CoefficientSet derive_coefficients(const ConstantSet& consts);

struct AdmissibilityWindows {
    double ratio_lo = 0.0;    // lower bound on N_e / N_p
    double ratio_hi = 0.0;    // upper bound on N_e / N_p
    double central_lo = 0.0;  // lower bound on u_p(0) / u_e(0)
    double central_hi = 0.0;  // upper bound on u_p(0) / u_e(0)
};

AdmissibilityWindows ratio_window(const ConstantSet& consts);

enum class RatioStatus { Admissible, Boundary, Inadmissible };

const char* to_string(RatioStatus s);

RatioStatus check_ratio(double n_e, double n_p, const AdmissibilityWindows& windows,
                        double boundary_rel_tol = 1e-9);

}  // namespace tfstar
