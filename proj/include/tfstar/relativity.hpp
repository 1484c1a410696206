// relativity.hpp
//
// Special-relativistic kinetic energy, the two-species system in the
// variables y_f = sqrt(1 + kappa_f rho_f^{2/3}), Chandrasekhar's
// single-fluid equation, and uniform-ball energy diagnostics for the
// critical mass.
#pragma once

#include <string>
#include <vector>

#include "tfstar/constants.hpp"
#include "tfstar/ode.hpp"
#include "tfstar/parallel.hpp"
#include "tfstar/profile.hpp"

namespace tfstar {

/// A(z) = 8 z^3 (sqrt(z^2+1) - 1) - z (2 z^2 - 3) sqrt(z^2+1) - 3 asinh z.
/// Small arguments avoid the cancellation of the closed form.
double chandrasekhar_A(double z);

enum class Species { Electron, Proton };

double species_mass(const ConstantSet& c, Species s);

/// kappa_f = (3/pi)^{2/3} (h / (2 m_f c))^2, so y^2 = 1 + kappa rho^{2/3}.
double rel_kappa(const ConstantSet& c, Species s);

enum class KineticForm { Chandrasekhar, Integrand };

/// Relativistic kinetic energy (rest mass excluded) of one species of a
/// radial profile (rho = u^{3/2}). Chandrasekhar form:
///   (pi m^4 c^5 / 3 h^3) int A(z) d^3x,  z = (h / m c)(3 rho / 8 pi)^{1/3};
/// integrand form: m c^2 int (int_0^rho sqrt(1 + kappa t^{2/3}) dt - rho) d^3x.
/// Throws SolverError(QuadratureNotConverged) on a poor error estimate.
double rel_kinetic_energy(const RadialProfile& p, Species s, const ConstantSet& c,
                          KineticForm form = KineticForm::Chandrasekhar, double rel_tol = 1e-9);

/// Kinetic energy density of the Chandrasekhar form at density rho.
double rel_kinetic_density(double rho, Species s, const ConstantSet& c);

struct RelOptions {
    ode::Tolerances tol{};
    double start_fraction = 1e-6;
    double r_max_factor = 1e4;
    double h_max_factor = 0.02;
    double blowup_factor = 1e6;
    double simultaneous_rel = 1e-6;
    // Stop at the first vanishing radius; counts then cover the bulk only.
    bool bulk_only = false;
};

enum class RelOutcome { Special, ProtonAtmosphere, ElectronAtmosphere, SingleSpecies };

const char* to_string(RelOutcome o);

struct RelSolution {
    RelOutcome outcome = RelOutcome::SingleSpecies;
    double rho_e0 = 0.0, rho_p0 = 0.0;
    double R0 = 0.0;  // first vanishing radius (bulk)
    double R1 = 0.0;  // outer radius
    // Samples in the relativity variables. Each y column holds y - 1, which
    // keeps full precision at low density.
    std::vector<double> r, v_e, v_p, dv_e, dv_p;
    RadialProfile profile;  // same solution with u = rho^{2/3}
    double N_e = 0.0, N_p = 0.0;
};

/// Integrates the y-system from the centre, then the surviving species'
/// single-fluid equation. A zero central density means that species is
/// absent. Throws SolverError with Inadmissible (central signs),
/// NonIntegrable (unbounded atmosphere) or NumericalBlowup.
RelSolution integrate_rel_profile(double rho_p0, double rho_e0, const ConstantSet& c, const RelOptions& opts = {});

struct ChandraSolution {
    double y0 = 0.0;
    std::vector<double> eta, y, dy;
    double eta1 = 0.0;  // first crossing of y = 1/y0
    double dy1 = 0.0;
};

/// (1/r^2)(r^2 y')' = -(y^2 - 1/y0^2)^{3/2}, y(0) = 1, y'(0) = 0, up to
/// the first crossing of y = 1/y0. Requires y0 > 1.
ChandraSolution chandra_single_fluid(double y0, const ode::Tolerances& tol = {1e-12, 1e-14});

struct BallEnergy {
    double kinetic = 0.0;
    double potential = 0.0;
    double total = 0.0;
};

/// Uniform ball of radius R: exact relativistic kinetic energy plus the
/// potential energy (3 / 5R)(Q^2 - G M^2), Q = q(N_p - N_e),
/// M = m_p N_p + m_e N_e.
BallEnergy uniform_ball_energy(double N_e, double N_p, double R, const ConstantSet& c);

/// Limit of R * kinetic as R -> 0:
/// 3^{5/3} / (2^{11/3} pi^{2/3}) h c (N_e^{4/3} + N_p^{4/3}).
double ball_kinetic_coefficient(double N_e, double N_p, const ConstantSet& c);

/// Coefficient of 1/R in the small-R ball energy.
double ball_inverse_radius_coefficient(double N_e, double N_p, const ConstantSet& c);

enum class BallVerdict { BoundedBelow, UnboundedBelow };

const char* to_string(BallVerdict v);

struct BallEnergyReport {
    double N_e = 0.0, N_p = 0.0;
    std::vector<double> R, energy;
    double fitted_slope = 0.0;  // coefficient of 1/R from the fit
    double fitted_const = 0.0;
    double fitted_linear = 0.0;
    double exact_slope = 0.0;   // ball_inverse_radius_coefficient
    BallVerdict verdict = BallVerdict::BoundedBelow;
};

/// Evaluates the ball energy on R_grid (empty selects a default grid deep
/// in the ultra-relativistic range) and fits s/R + c0 + c1 R.
BallEnergyReport ball_scan(double N_e, double N_p, const ConstantSet& c, std::vector<double> R_grid = {},
                           Exec exec = Exec::Serial);

struct CriticalMassReport {
    double ratio = 0.0;          // N_p / N_e
    double threshold = 0.0;      // N_e* by bisection on the 1/R coefficient
    double threshold_closed = 0.0;
    BallEnergyReport below, above;  // scans at below_factor and above_factor times N_e*
};

/// Throws SolverError(InadmissibleRatio) if N_e/N_p = 1/ratio lies outside
/// the admissibility window, and SolverError(NoRootInBracket) if gravity
/// never wins at this composition.
CriticalMassReport critical_mass_scan(double ratio, const ConstantSet& c, std::vector<double> R_grid = {},
                                      double below_factor = 0.5, double above_factor = 2.0,
                                      Exec exec = Exec::Serial);

/// Bound on (m_p N_p + m_e N_e)^{2/3} below which a relativistic minimiser
/// exists: pi 2^{2/3} h c (3 / 8 pi)^{4/3} / (G K m_p^{4/3}).
double rel_existence_bound(const ConstantSet& c, double K_lions = 1.0);

}  // namespace tfstar
