// special.hpp
//
// Proportional solutions rho_e = k rho_p of the bulk system. Substituting
// the ansatz into both equations leaves one algebraic condition on k (for a
// kinetic exponent parameter d, d = 5 being the physical case),
//   E k^{d/3} - F k^{(d-3)/3} + B k - A = 0,
// and reduces the proton equation to a Lane-Emden equation.
#pragma once

#include <vector>

#include "tfstar/constants.hpp"
#include "tfstar/profile.hpp"

namespace tfstar {

/// Left-hand side of the proportionality condition above.
double proportionality_residual(double d, double k, const CoefficientSet& c);

/// Root of the proportionality condition on [0, E/F]. Requires 3 < d < 6.
/// Throws SolverError(NoRootInBracket) when the endpoint signs do not
/// bracket a root.
double solve_kd(double d, const CoefficientSet& c, double tol = 1e-15);

struct LaneEmdenOptions {
    double rtol = 1e-12;
    double atol = 1e-14;
    double xi_start = 1e-6;
    double xi_max = 20.0;   // stop here if there is no zero (n >= 5)
    double h_max = 0.01;
};

struct LaneEmdenSolution {
    double n = 0.0;
    std::vector<double> xi, theta, dtheta, d2theta;
    bool has_zero = false;
    double xi1 = 0.0;      // first zero (only if has_zero)
    double dtheta1 = 0.0;  // theta'(xi1)
};

/// theta'' + (2/xi) theta' = -theta^n, theta(0) = 1, theta'(0) = 0.
/// Integrated to the first zero, or to opts.xi_max if none occurs.
LaneEmdenSolution lane_emden(double n, const LaneEmdenOptions& opts = {});

struct SpecialSolution {
    double d = 5.0;
    double k = 0.0;             // rho_e / rho_p
    double index = 1.5;         // Lane-Emden index 3/(d-3)
    double alpha = 0.0;         // u_p(0)
    double beta = 0.0;          // u_e(0) = k^{2/3} alpha
    double curvature = 0.0;     // E k - F > 0, so u_p'' + 2u_p'/r = -curvature u_p^{3/2}
    double radial_scale = 0.0;  // r = radial_scale * xi
    double xi1 = 0.0;
    double dtheta1 = 0.0;
    double radius = 0.0;        // radial_scale * xi1, common vanishing radius
    RadialProfile profile;
};

/// Builds the d = 5 proportional solution with central proton value alpha.
SpecialSolution special_profile(double alpha, const CoefficientSet& c, const LaneEmdenOptions& opts = {});

}  // namespace tfstar
