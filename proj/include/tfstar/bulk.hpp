// bulk.hpp
//
// Coupled radial system for the two species where both densities are
// positive:
//   u_e'' + (2/r) u_e' = B u_e^{3/2} - A u_p^{3/2}
//   u_p'' + (2/r) u_p' = F u_p^{3/2} - E u_e^{3/2}
// with rho_f = u_f^{3/2}. Integration starts from a Taylor expansion just
// off the origin and runs until one density vanishes.
#pragma once

#include <array>
#include <optional>
#include <string>

#include "tfstar/constants.hpp"
#include "tfstar/ode.hpp"
#include "tfstar/profile.hpp"

namespace tfstar {

struct BulkState {
    double r = 0.0;
    double u_e = 0.0;
    double u_p = 0.0;
    double du_e = 0.0;
    double du_p = 0.0;
};

/// Central curvature terms. phi0 drives the proton equation, psi0 the
/// electron equation; alpha = u_p(0), beta = u_e(0).
struct CentralSigns {
    double phi0 = 0.0;  // -E beta^{3/2} + F alpha^{3/2}
    double psi0 = 0.0;  // -A alpha^{3/2} + B beta^{3/2}
    bool both_negative() const { return phi0 < 0.0 && psi0 < 0.0; }
    /// Empty when both are negative, otherwise names the failing sign(s).
    std::string rejection() const;
};

CentralSigns initial_signs(double alpha, double beta, const CoefficientSet& k);

/// Second-order Taylor state at r = h: u = u0 + RHS0 h^2/6, u' = RHS0 h/3.
BulkState series_start(double alpha, double beta, double h, const CoefficientSet& k);

/// Natural length scale sqrt(max(alpha, beta) / max(|phi0|, |psi0|)).
double bulk_length_scale(double alpha, double beta, const CoefficientSet& k);

/// Second derivatives (u_e'', u_p''). Negative u is treated as zero inside
/// the 3/2 power.
std::array<double, 2> bulk_rhs(const BulkState& s, const CoefficientSet& k);

enum class BulkEvent { VanishE, VanishP, SimultaneousVanish, RadiusCap };

const char* to_string(BulkEvent e);

struct BulkOptions {
    ode::Tolerances tol{};
    double start_fraction = 1e-6;   // h_start / length scale
    double r_max_factor = 1e4;      // radius cap in length scales
    double vanish_tol = 1e-10;      // event location accuracy in u
    double simultaneous_rel = 1e-6;
    double h_max_factor = 0.02;     // max step in length scales
};

struct BulkOutcome {
    BulkEvent event = BulkEvent::RadiusCap;
    double event_radius = 0.0;
    BulkState state_at_event{};
    /// Linear extrapolation of the vanishing radius of the surviving species
    /// from the event state (infinite if it is not decreasing there).
    double other_vanish_radius = 0.0;
    std::optional<double> turning_radius;  // first r with a positive derivative
    double length_scale = 0.0;
    RadialProfile profile;  // from r = 0 to the event, d2u columns filled
};

/// Throws SolverError(NonPositiveInput) for alpha, beta <= 0,
/// SolverError(Inadmissible) if the central signs fail, and
/// SolverError(NumericalBlowup) if the integrator breaks down.
BulkOutcome integrate_bulk(double alpha, double beta, const CoefficientSet& k, const BulkOptions& opts = {});

/// Sup-norm of the bulk ODE residual of an interpolated profile, measured
/// at interval midpoints and normalised by the largest curvature term.
/// Nodes where either species is absent are skipped.
double bulk_residual(const RadialProfile& p, const CoefficientSet& k);

}  // namespace tfstar
