// shoot.hpp
//
// End-to-end profiles: bulk integration from the centre, hand-off to the
// surviving species' atmosphere, particle counts, the scaling map
// u -> lambda u(lambda^{1/4} s), inversion of (N_e, N_p) to central values,
// and sweeps over the central electron value at fixed alpha.
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tfstar/atmosphere.hpp"
#include "tfstar/bulk.hpp"
#include "tfstar/constants.hpp"
#include "tfstar/parallel.hpp"
#include "tfstar/profile.hpp"

namespace tfstar {

enum class SolutionKind { Special, ProtonAtmosphere, ElectronAtmosphere };
enum class Closure { Compact, Critical };

const char* to_string(SolutionKind k);
const char* to_string(Closure c);

struct ParticleCounts {
    double N_e = 0.0;
    double N_p = 0.0;
    double ratio = 0.0;    // N_e / N_p
    double error_e = 0.0;  // quadrature error estimates
    double error_p = 0.0;
};

struct FullSolution {
    double alpha = 0.0;  // u_p(0)
    double beta = 0.0;   // u_e(0)
    SolutionKind kind = SolutionKind::Special;
    Closure closure = Closure::Compact;
    double R0 = 0.0;  // bulk radius (first vanishing)
    double R1 = 0.0;  // outer radius, infinite for Critical
    double handoff_slope = std::numeric_limits<double>::quiet_NaN();
    double critical_slope = std::numeric_limits<double>::quiet_NaN();
    double tail_mass = 0.0;  // analytic count beyond the last node
    RadialProfile profile;
    ParticleCounts counts;
    CoefficientSet coeffs;
};

struct ShootOptions {
    BulkOptions bulk{};
    AtmosphereOptions atm{};
    double count_rel_tol = 1e-8;
};

/// Throws SolverError with Inadmissible (central signs), NonIntegrable
/// (unbounded atmosphere) or NumericalBlowup.
FullSolution solve_profile(double alpha, double beta, const ConstantSet& consts, const ShootOptions& opts = {});

/// 4 pi int r^2 u_f^{3/2} dr plus the r^{-4} envelope tails. Throws
/// SolverError(QuadratureNotConverged) when the error estimate exceeds
/// rel_tol of a count.
ParticleCounts counts(const RadialProfile& p, double rel_tol = 1e-8, Exec exec = Exec::Serial);

/// theta_f(s) = lambda u_f(a s) with a = lambda^{1/4}; counts are
/// recomputed by quadrature on the transformed profile.
FullSolution apply_scaling(const FullSolution& s, double lambda, double count_rel_tol = 1e-8);

/// Common factor by which counts change under apply_scaling.
inline double count_scale_factor(double lambda) { return std::pow(lambda, 0.75); }

enum class SweepStatus { Compact, Critical, NonIntegrable, Inadmissible, Failed };
const char* to_string(SweepStatus s);

struct SweepRow {
    double beta = 0.0;
    SweepStatus status = SweepStatus::Failed;
    std::optional<SolutionKind> kind;
    std::optional<BulkEvent> bulk_event;
    double R0 = 0.0;
    double R1 = 0.0;
    ParticleCounts counts;
    std::string message;
};

/// Classifies one (alpha, beta) without throwing.
SweepRow classify_point(double alpha, double beta, const ConstantSet& consts, const ShootOptions& opts = {});

struct WindowEdges {
    double beta_special = 0.0;
    double beta_lo = 0.0;  // last compact value below the special ray
    double beta_hi = 0.0;  // last compact value above it
    double beta_lo_out = 0.0;  // first non-integrable value below
    double beta_hi_out = 0.0;  // first non-integrable value above
    FullSolution lo, hi;
};

/// Brackets the compact window in beta at fixed alpha by stepping outward
/// from the special ray, then refines each edge by bisection.
WindowEdges window_edges(double alpha, const ConstantSet& consts, const ShootOptions& opts = {});

struct SweepResult {
    double alpha = 0.0;
    std::vector<SweepRow> rows;
    WindowEdges edges;
};

SweepResult regime_sweep(double alpha, const std::vector<double>& betas, const ConstantSet& consts,
                         const ShootOptions& opts = {}, Exec exec = Exec::Serial);

/// Solves many independent central pairs; results are in input order.
std::vector<SweepRow> solve_batch(const std::vector<std::pair<double, double>>& points, const ConstantSet& consts,
                                  const ShootOptions& opts = {}, Exec exec = Exec::Serial);

struct InvertOptions {
    ShootOptions shoot{};
    double ratio_tol = 1e-13;  // relative
    int monotone_grid = 16;
};

struct InvertResult {
    double alpha = 0.0;
    double beta = 0.0;
    double beta_canonical = 0.0;  // beta at alpha = 1
    double lambda = 0.0;
    bool boundary = false;        // ratio at a window endpoint
    bool monotone = true;         // ratio increased along the check grid
    int solves = 0;
    FullSolution solution;        // forward solve at (alpha, beta)
};

/// Throws SolverError(InadmissibleRatio) outside the admissibility window
/// and SolverError(RatioNotBracketed) if the window sweep does not reach
/// the target ratio.
InvertResult invert_counts(double N_e, double N_p, const ConstantSet& consts, const InvertOptions& opts = {});

}  // namespace tfstar
