// energy.hpp
//
// Energy functional of a two-species radial profile:
//   kinetic_f     = k_f int rho_f^{5/3}
//   electric      = (q^2/2) int sigma B sigma,  sigma = rho_p - rho_e
//   gravitational = -(G/2) int mu B mu,        mu = m_p rho_p + m_e rho_e
// where B is the Newtonian potential operator. Double integrals are reduced
// to radial cumulative integrals by the shell theorem.
#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "tfstar/constants.hpp"
#include "tfstar/parallel.hpp"
#include "tfstar/profile.hpp"
#include "tfstar/quadrature.hpp"

namespace tfstar {

/// Potential B rho of a radial density sampled at the Gauss nodes of a
/// profile quadrature. Beyond the last node the density may continue as
/// tail_coeff * r^{-6} (the u ~ r^{-4} envelope).
struct RadialPotential {
    std::vector<double> r;         // quadrature nodes
    std::vector<double> enclosed;  // 4 pi int_0^r s^2 rho
    std::vector<double> value;     // B rho at the nodes
    double grid_mass = 0.0;        // enclosed mass at the last profile node
    double outer_radius = 0.0;
    double tail_coeff = 0.0;

    double total_mass() const;
    /// B rho at any r >= outer_radius.
    double exterior(double radius) const;
};

using RadialDensity = std::function<double(double r, double u_e, double u_p)>;

RadialPotential radial_potential(const ProfileQuadrature& q, const RadialDensity& rho, double tail_coeff = 0.0);

/// (1/2) int rho B rho computed two ways: as the density-weighted potential
/// and as the field energy (1/2) int M(r)^2 / r^2 dr.
struct SelfEnergy {
    double direct = 0.0;
    double field = 0.0;
};

SelfEnergy self_energy(const ProfileQuadrature& q, const RadialPotential& pot, const RadialDensity& rho);

struct EnergyBreakdown {
    double kinetic_e = 0.0;
    double kinetic_p = 0.0;
    double electric = 0.0;
    double gravitational = 0.0;
    double total = 0.0;
    // same potential terms from the field-energy form of the double integral
    double electric_field_form = 0.0;
    double gravitational_field_form = 0.0;

    double kinetic() const { return kinetic_e + kinetic_p; }
    double potential() const { return electric + gravitational; }
};

/// Throws SolverError(QuadratureNotConverged) if the two forms of a
/// potential term disagree by more than rel_tol of the energy scale.
EnergyBreakdown evaluate_energy(const RadialProfile& p, const ConstantSet& consts, double rel_tol = 1e-8,
                                Exec exec = Exec::Serial);

/// rho^lambda(x) = rho(x / lambda) / lambda^3, i.e. u -> u(r / lambda) / lambda^2.
RadialProfile dilate(const RadialProfile& p, double lambda);

std::vector<EnergyBreakdown> dilation_scan(const RadialProfile& p, const std::vector<double>& lambdas,
                                           const ConstantSet& consts, Exec exec = Exec::Serial);

/// Lagrange multipliers implied by the Euler-Lagrange equations,
///   lambda_p(r) = (5/3) k_p u_p + q^2 B sigma - G m_p B mu
///   lambda_e(r) = (5/3) k_e u_e - q^2 B sigma - G m_e B mu,
/// sampled on each species' support.
struct MultiplierEstimate {
    std::vector<double> r_e, lambda_e, r_p, lambda_p;
    double mean_e = 0.0, mean_p = 0.0;
    double rel_std_e = 0.0, rel_std_p = 0.0;  // weighted std / |mean|
};

MultiplierEstimate el_residual(const RadialProfile& p, const ConstantSet& consts);

/// Mass-rescaling family rho^s(x) = rho(x / s^{1/3}): dE/ds at s = 1 equals
/// K + (5/3) V. numeric is a central difference with step h.
struct VirialCheck {
    double kinetic = 0.0;
    double potential = 0.0;
    double direct = 0.0;   // K + (5/3) V
    double numeric = 0.0;  // finite-difference derivative
};

VirialCheck virial_check(const RadialProfile& p, const ConstantSet& consts, double h = 1e-3);

}  // namespace tfstar
