// atmosphere.hpp
//
// Single-species exterior problem u'' + (2/r) u' = D u^{3/2} started from a
// bulk hand-off (R0, u(R0) = a, u'(R0) = b). Outcomes are compact support,
// the unique decaying (critical) solution, or unbounded growth.
//
// Internally the problem is solved in the variables t = ln r, w = u r^4,
// where it becomes autonomous:
//   w'' - 7 w' + 12 w = D w^{3/2}
// with a saddle at w = C = 144/D^2 (the exact solution C r^{-4}). The
// critical solution is the stable manifold of that saddle.
#pragma once

#include <limits>
#include <string>
#include <vector>

#include "tfstar/ode.hpp"

namespace tfstar {

/// 144 / D^2
double decaying_constant(double D);

/// (144 / D^2) r^{-4}
double decaying_reference(double r, double D);

enum class AtmosphereKind { Compact, CriticalDecay, Unbounded };

const char* to_string(AtmosphereKind k);

struct SpeciesProfile {
    std::vector<double> r, u, du, d2u;
    void push(double radius, double value, double slope, double curvature) {
        r.push_back(radius);
        u.push_back(value);
        du.push_back(slope);
        d2u.push_back(curvature);
    }
};

enum class CriticalMethod { Manifold, Bisection };

struct AtmosphereOptions {
    ode::Tolerances tol{1e-12, 1e-15};
    double vanish_tol = 1e-10;       // relative to a
    double blowup_factor = 1e6;      // Unbounded once u > blowup_factor * a
    double r_max_factor = 1e8;       // hard stop at r_max_factor * R0
    double h_max_log = 0.05;         // largest step in ln r
    bool detect_critical = true;
    CriticalMethod critical_method = CriticalMethod::Manifold;
    double critical_rel_tol = 1e-8;  // |b - b_hat| <= tol |b_hat| counts as critical
    double manifold_offset = 1e-7;   // relative distance from C where the manifold is seeded
    double manifold_min_decades = 3.0;
    double bisection_tol = 1e-13;
};

struct AtmosphereOutcome {
    AtmosphereKind kind = AtmosphereKind::Unbounded;
    double outer_radius = 0.0;  // R1 for Compact, last computed radius otherwise
    double b_hat = std::numeric_limits<double>::quiet_NaN();
    double envelope_c = 0.0;    // CriticalDecay only
    double tail_mass = 0.0;     // CriticalDecay only
    std::string diagnostic;
    SpeciesProfile profile;
};

/// Throws SolverError(InvalidHandoff) for non-positive R0, a, D or a
/// non-finite slope.
AtmosphereOutcome integrate_atmosphere(double R0, double a, double b, double D, const AtmosphereOptions& opts = {});

/// Plain forward shot without any critical detection: Compact or Unbounded.
AtmosphereOutcome shoot_atmosphere(double R0, double a, double b, double D, const AtmosphereOptions& opts = {});

struct SlopeBracket {
    double compact = 0.0;    // slope known to give compact support
    double unbounded = 0.0;  // slope known to blow up
    double mid() const { return 0.5 * (compact + unbounded); }
};

/// Bisection between a Compact and an Unbounded slope, searching
/// b in [-K a / R0, 0] with K doubled until a Compact outcome appears.
/// Throws SolverError(BracketFailure) if no bracket is found.
SlopeBracket critical_bracket(double R0, double a, double D, double tol, const AtmosphereOptions& opts = {});
double critical_slope(double R0, double a, double D, double tol = 1e-13, const AtmosphereOptions& opts = {});

/// Slope of the critical solution obtained from the stable manifold of the
/// saddle, integrated backward from C.
double manifold_slope(double R0, double a, double D, const AtmosphereOptions& opts = {});

/// The critical solution through (R0, a), followed along the manifold until
/// it is within opts.manifold_offset of C r^{-4}.
SpeciesProfile critical_profile(double R0, double a, double D, const AtmosphereOptions& opts = {});

struct TailEstimate {
    double mass = 0.0;    // 4 pi c^{3/2} / (3 R^3)
    double c = 0.0;       // fitted envelope constant
    double spread = 0.0;  // sup |u r^4 - c| / c over the last decade
};

/// Throws SolverError(EnvelopeFitFailure) if the profile does not end on
/// a positive value or u r^4 varies by more than max_spread over the last
/// decade of radius.
TailEstimate tail_mass(const SpeciesProfile& p, double D, double max_spread = 1e-3);

}  // namespace tfstar
