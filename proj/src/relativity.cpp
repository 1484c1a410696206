#include "tfstar/relativity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "tfstar/error.hpp"
#include "tfstar/quadrature.hpp"
#include "tfstar/shoot.hpp"

namespace tfstar {

namespace {

constexpr double kPi = M_PI;

// int_0^z 8 x^4 / sqrt(1 + x^2) dx by its binomial series (|z| < 1).
double chandra_f_series(double z) {
    const double z2 = z * z;
    double zp = z2 * z2 * z;
    double coef = 1.0;
    double sum = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double term = coef * zp / (2.0 * k + 5.0);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        coef *= (-0.5 - k) / (k + 1.0);
        zp *= z2;
    }
    return 8.0 * sum;
}

// sqrt(1 + x) - 1 without cancellation
double sqrt1pm1(double x) { return x / (std::sqrt(1.0 + x) + 1.0); }

}  // namespace

double chandrasekhar_A(double z) {
    if (!(z >= 0.0)) throw SolverError(ErrorCode::NonPositiveInput, "A(z) needs z >= 0");
    if (z == 0.0) return 0.0;
    const double y = std::sqrt(z * z + 1.0);
    if (z < 0.5) {
        // 8 z^3 (y - 1) = 8 z^5 / (y + 1); the rest is minus the series above.
        const double z2 = z * z;
        return 8.0 * z2 * z2 * z / (y + 1.0) - chandra_f_series(z);
    }
    return 8.0 * z * z * z * (y - 1.0) - z * (2.0 * z * z - 3.0) * y - 3.0 * std::asinh(z);
}

double species_mass(const ConstantSet& c, Species s) { return s == Species::Electron ? c.m_e : c.m_p; }

double rel_kappa(const ConstantSet& c, Species s) {
    const double x = c.h / (2.0 * species_mass(c, s) * c.c);
    return std::cbrt(std::pow(3.0 / kPi, 2.0)) * x * x;
}

double rel_kinetic_density(double rho, Species s, const ConstantSet& c) {
    if (rho <= 0.0) return 0.0;
    const double m = species_mass(c, s);
    const double z = c.h / (m * c.c) * std::cbrt(3.0 * rho / (8.0 * kPi));
    const double pref = kPi * std::pow(m, 4) * std::pow(c.c, 5) / (3.0 * std::pow(c.h, 3));
    return pref * chandrasekhar_A(z);
}

namespace {

// m c^2 (int_0^rho sqrt(1 + kappa t^{2/3}) dt - rho), with t = rho s^3.
double integrand_form_density(double rho, Species s, const ConstantSet& c) {
    if (rho <= 0.0) return 0.0;
    const double m = species_mass(c, s);
    const double z2 = rel_kappa(c, s) * std::cbrt(rho * rho);
    const auto f = [z2](double x) {
        const double x2 = x * x;
        return 3.0 * x2 * sqrt1pm1(z2 * x2);
    };
    const double inner = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 15, 1e-14);
    return m * c.c * c.c * rho * inner;
}

}  // namespace

double rel_kinetic_energy(const RadialProfile& p, Species s, const ConstantSet& c, KineticForm form,
                          double rel_tol) {
    const ProfileQuadrature q(p);
    const bool electron = s == Species::Electron;
    const auto density = [&](double rho) {
        return form == KineticForm::Chandrasekhar ? rel_kinetic_density(rho, s, c) : integrand_form_density(rho, s, c);
    };
    const QuadResult res = q.integrate([&](double r, double ue, double up) {
        return r * r * density(pow32(electron ? ue : up));
    });
    double value = 4.0 * kPi * res.value;
    const double tail_c = electron ? p.tail_e : p.tail_p;
    if (tail_c > 0.0) {
        // envelope densities are deep in the non-relativistic range
        const double R = p.outer_radius();
        value += 4.0 * kPi * kinetic_prefactor(c.h, species_mass(c, s)) * pow32(tail_c) * tail_c / (7.0 * std::pow(R, 7));
    }
    if (4.0 * kPi * res.error > rel_tol * std::abs(value) && value != 0.0) {
        throw SolverError(ErrorCode::QuadratureNotConverged, "relativistic kinetic energy not converged");
    }
    return value;
}

const char* to_string(RelOutcome o) {
    switch (o) {
        case RelOutcome::Special: return "Special";
        case RelOutcome::ProtonAtmosphere: return "ProtonAtmosphere";
        case RelOutcome::ElectronAtmosphere: return "ElectronAtmosphere";
        case RelOutcome::SingleSpecies: return "SingleSpecies";
    }
    return "?";
}

namespace {

using Y4 = ode::Vec<4>;  // v_e, v_p, dv_e, dv_p
using Y2 = ode::Vec<2>;

struct RelCoefficients {
    double kappa_e, kappa_p;
    double Pe, Qe, Pp, Qp;  // dv_e'' ... = Pe rho_e - Qe rho_p, dv_p'' ... = Pp rho_p - Qp rho_e

    double rho_e(double v) const { return v > 0.0 ? pow32(v * (v + 2.0) / kappa_e) : 0.0; }
    double rho_p(double v) const { return v > 0.0 ? pow32(v * (v + 2.0) / kappa_p) : 0.0; }
};

RelCoefficients rel_coefficients(const ConstantSet& c) {
    c.validate();
    RelCoefficients k;
    k.kappa_e = rel_kappa(c, Species::Electron);
    k.kappa_p = rel_kappa(c, Species::Proton);
    const double q2 = c.q * c.q, c2 = c.c * c.c;
    k.Pe = 4.0 * kPi * (q2 - c.G * c.m_e * c.m_e) / (c.m_e * c2);
    k.Qe = 4.0 * kPi * (q2 + c.G * c.m_p * c.m_e) / (c.m_e * c2);
    k.Pp = 4.0 * kPi * (q2 - c.G * c.m_p * c.m_p) / (c.m_p * c2);
    k.Qp = 4.0 * kPi * (q2 + c.G * c.m_p * c.m_e) / (c.m_p * c2);
    return k;
}

double v_from_rho(double rho, double kappa) { return rho > 0.0 ? sqrt1pm1(kappa * std::cbrt(rho * rho)) : 0.0; }

void push_rel(RelSolution& s, const RelCoefficients& k, double r, double ve, double vp, double dve, double dvp,
              double d2ve, double d2vp) {
    s.r.push_back(r);
    s.v_e.push_back(ve);
    s.v_p.push_back(vp);
    s.dv_e.push_back(dve);
    s.dv_p.push_back(dvp);
    // u = rho^{2/3} = v (v + 2) / kappa
    const auto u = [](double v, double kap) { return v > 0.0 ? v * (v + 2.0) / kap : 0.0; };
    const auto du = [](double v, double dv, double kap) { return v > 0.0 ? 2.0 * (v + 1.0) * dv / kap : 0.0; };
    const auto d2u = [](double v, double dv, double d2v, double kap) {
        return v > 0.0 ? 2.0 * (dv * dv + (v + 1.0) * d2v) / kap : 0.0;
    };
    s.profile.push(r, u(ve, k.kappa_e), u(vp, k.kappa_p), du(ve, dve, k.kappa_e), du(vp, dvp, k.kappa_p),
                   d2u(ve, dve, d2ve, k.kappa_e), d2u(vp, dvp, d2vp, k.kappa_p));
}

}  // namespace

RelSolution integrate_rel_profile(double rho_p0, double rho_e0, const ConstantSet& c, const RelOptions& opts) {
    if (!(rho_p0 >= 0.0) || !(rho_e0 >= 0.0) || (rho_p0 == 0.0 && rho_e0 == 0.0)) {
        throw SolverError(ErrorCode::NonPositiveInput, "central densities must be non-negative and not both zero");
    }
    const RelCoefficients k = rel_coefficients(c);
    RelSolution sol;
    sol.rho_e0 = rho_e0;
    sol.rho_p0 = rho_p0;
    if (rho_p0 == 0.0 || rho_e0 == 0.0) {
        sol.outcome = RelOutcome::SingleSpecies;
        throw SolverError(ErrorCode::NonIntegrable,
                          "a single species has a repulsive self-interaction and cannot form a bounded profile");
    }
    const double ve0 = v_from_rho(rho_e0, k.kappa_e);
    const double vp0 = v_from_rho(rho_p0, k.kappa_p);
    const double se = k.Pe * rho_e0 - k.Qe * rho_p0;
    const double sp = k.Pp * rho_p0 - k.Qp * rho_e0;
    if (!(se < 0.0 && sp < 0.0)) {
        throw SolverError(ErrorCode::Inadmissible, "relativistic central curvature is not negative for both species");
    }
    const double vmax = std::max(ve0, vp0);
    const double L = std::sqrt(vmax / std::max(std::abs(se), std::abs(sp)));
    const double h0 = opts.start_fraction * L;

    const auto rhs = [&](double r, const Y4& y) {
        const double re = k.rho_e(y[0]), rp = k.rho_p(y[1]);
        return Y4{y[2], y[3], -2.0 / r * y[2] + k.Pe * re - k.Qe * rp, -2.0 / r * y[3] + k.Pp * rp - k.Qp * re};
    };
    push_rel(sol, k, 0.0, ve0, vp0, 0.0, 0.0, se / 3.0, sp / 3.0);
    const Y4 y0{ve0 + se * h0 * h0 / 6.0, vp0 + sp * h0 * h0 / 6.0, se * h0 / 3.0, sp * h0 / 3.0};
    {
        const Y4 d = rhs(h0, y0);
        push_rel(sol, k, h0, y0[0], y0[1], y0[2], y0[3], d[2], d[3]);
    }

    ode::Tolerances tol = opts.tol;
    tol.atol *= vmax;
    tol.h_max = std::min(tol.h_max, opts.h_max_factor * L);
    bool done = false;
    Y4 ev{};
    const auto on_step = [&](const ode::DenseStep<4>& st) {
        const bool ce = st.y1[0] <= 0.0, cp = st.y1[1] <= 0.0;
        if (ce || cp) {
            double re = std::numeric_limits<double>::infinity(), rp = re;
            if (ce) re = ode::locate_root(st, [](double, const Y4& y) { return y[0]; }, 0.0);
            if (cp) rp = ode::locate_root(st, [](double, const Y4& y) { return y[1]; }, 0.0);
            const bool e_first = re <= rp;
            const double rf = std::min(re, rp);
            ev = st.eval(rf);
            double r_other;
            if (e_first) {
                ev[0] = 0.0;
                r_other = cp ? rp : (ev[3] < 0.0 ? rf - ev[1] / ev[3] : std::numeric_limits<double>::infinity());
            } else {
                ev[1] = 0.0;
                r_other = ce ? re : (ev[2] < 0.0 ? rf - ev[0] / ev[2] : std::numeric_limits<double>::infinity());
            }
            sol.R0 = rf;
            if (std::abs(r_other - rf) < opts.simultaneous_rel * rf) {
                sol.outcome = RelOutcome::Special;
                ev[0] = ev[1] = 0.0;
            } else {
                sol.outcome = e_first ? RelOutcome::ProtonAtmosphere : RelOutcome::ElectronAtmosphere;
            }
            const Y4 d = rhs(rf, ev);
            push_rel(sol, k, rf, ev[0], ev[1], ev[2], ev[3], d[2], d[3]);
            done = true;
            return ode::Control::Stop;
        }
        const Y4 d = rhs(st.x1, st.y1);
        push_rel(sol, k, st.x1, st.y1[0], st.y1[1], st.y1[2], st.y1[3], d[2], d[3]);
        return ode::Control::Continue;
    };
    ode::integrate<4>(rhs, h0, y0, opts.r_max_factor * L, tol, on_step);
    if (!done) throw SolverError(ErrorCode::NumericalBlowup, "relativistic bulk did not reach a vanishing radius");

    if (sol.outcome == RelOutcome::Special || opts.bulk_only) {
        sol.R1 = sol.R0;
    } else {
        const bool protons = sol.outcome == RelOutcome::ProtonAtmosphere;
        const double P = protons ? k.Pp : k.Pe;
        const auto rho = [&](double v) { return protons ? k.rho_p(v) : k.rho_e(v); };
        const auto arhs = [&](double r, const Y2& y) { return Y2{y[1], -2.0 / r * y[1] + P * rho(y[0])}; };
        const Y2 a0{protons ? ev[1] : ev[0], protons ? ev[3] : ev[2]};
        if (a0[1] >= 0.0) throw SolverError(ErrorCode::NonIntegrable, "non-negative hand-off slope");
        const double cap = opts.blowup_factor * a0[0];
        bool closed = false, unbounded = false;
        const auto push_atm = [&](double r, double v, double dv) {
            const double d2 = arhs(r, Y2{v, dv})[1];
            if (protons) {
                push_rel(sol, k, r, 0.0, v, 0.0, dv, 0.0, d2);
            } else {
                push_rel(sol, k, r, v, 0.0, dv, 0.0, d2, 0.0);
            }
        };
        ode::Tolerances atol = opts.tol;
        atol.atol *= a0[0];
        atol.h_max = std::min(atol.h_max, opts.h_max_factor * L);
        ode::integrate<2>(arhs, sol.R0, a0, opts.r_max_factor * L, atol, [&](const ode::DenseStep<2>& st) {
            if (st.y1[0] <= 0.0) {
                const double rz = ode::locate_root(st, [](double, const Y2& y) { return y[0]; }, 0.0);
                push_atm(rz, 0.0, st.eval(rz)[1]);
                sol.R1 = rz;
                closed = true;
                return ode::Control::Stop;
            }
            if (st.y1[1] >= 0.0 || st.y1[0] > cap) {
                unbounded = true;
                return ode::Control::Stop;
            }
            push_atm(st.x1, st.y1[0], st.y1[1]);
            return ode::Control::Continue;
        });
        if (unbounded) throw SolverError(ErrorCode::NonIntegrable, "relativistic atmosphere is unbounded");
        if (!closed) throw SolverError(ErrorCode::NumericalBlowup, "relativistic atmosphere reached the radius cap");
    }
    const ParticleCounts n = counts(sol.profile, 1e-8);
    sol.N_e = n.N_e;
    sol.N_p = n.N_p;
    return sol;
}

ChandraSolution chandra_single_fluid(double y0, const ode::Tolerances& tol_in) {
    if (!(y0 > 1.0) || !std::isfinite(y0)) throw SolverError(ErrorCode::NonPositiveInput, "y0 must exceed 1");
    // w = y - 1/y0 keeps full precision when y0 is close to 1.
    const double inv = 1.0 / y0;
    const auto src = [inv](double w) { return w > 0.0 ? pow32(w * (w + 2.0 * inv)) : 0.0; };
    const auto rhs = [&](double r, const Y2& y) { return Y2{y[1], -2.0 / r * y[1] - src(y[0])}; };
    const double w0 = 1.0 - inv;
    const double g = src(w0);
    const double L = std::sqrt(w0 / g);
    const double h0 = 1e-6 * L;
    ChandraSolution out;
    out.y0 = y0;
    out.eta.push_back(0.0);
    out.y.push_back(1.0);
    out.dy.push_back(0.0);
    const Y2 s0{w0 - g * h0 * h0 / 6.0, -g * h0 / 3.0};
    out.eta.push_back(h0);
    out.y.push_back(s0[0] + inv);
    out.dy.push_back(s0[1]);
    ode::Tolerances tol = tol_in;
    tol.atol *= w0;
    tol.h_max = std::min(tol.h_max, 0.02 * L);
    bool hit = false;
    ode::integrate<2>(rhs, h0, s0, 1e4 * L, tol, [&](const ode::DenseStep<2>& st) {
        if (st.y1[0] <= 0.0) {
            const double rz = ode::locate_root(st, [](double, const Y2& y) { return y[0]; }, 0.0);
            out.eta1 = rz;
            out.dy1 = st.eval(rz)[1];
            out.eta.push_back(rz);
            out.y.push_back(inv);
            out.dy.push_back(out.dy1);
            hit = true;
            return ode::Control::Stop;
        }
        out.eta.push_back(st.x1);
        out.y.push_back(st.y1[0] + inv);
        out.dy.push_back(st.y1[1]);
        return ode::Control::Continue;
    });
    if (!hit) throw SolverError(ErrorCode::NumericalBlowup, "Chandrasekhar profile has no zero");
    return out;
}

BallEnergy uniform_ball_energy(double N_e, double N_p, double R, const ConstantSet& c) {
    if (!(R > 0.0) || N_e < 0.0 || N_p < 0.0) throw SolverError(ErrorCode::NonPositiveInput, "invalid ball");
    const double V = 4.0 * kPi / 3.0 * R * R * R;
    BallEnergy e;
    e.kinetic = V * (rel_kinetic_density(N_e / V, Species::Electron, c) + rel_kinetic_density(N_p / V, Species::Proton, c));
    const double Q = c.q * (N_p - N_e);
    const double M = c.m_p * N_p + c.m_e * N_e;
    e.potential = 3.0 / (5.0 * R) * (Q * Q - c.G * M * M);
    e.total = e.kinetic + e.potential;
    return e;
}

double ball_kinetic_coefficient(double N_e, double N_p, const ConstantSet& c) {
    const double pref = std::pow(3.0, 5.0 / 3.0) / (std::pow(2.0, 11.0 / 3.0) * std::cbrt(kPi * kPi));
    return pref * c.h * c.c * (std::pow(N_e, 4.0 / 3.0) + std::pow(N_p, 4.0 / 3.0));
}

double ball_inverse_radius_coefficient(double N_e, double N_p, const ConstantSet& c) {
    const double Q = c.q * (N_p - N_e);
    const double M = c.m_p * N_p + c.m_e * N_e;
    return ball_kinetic_coefficient(N_e, N_p, c) + 0.6 * (Q * Q - c.G * M * M);
}

const char* to_string(BallVerdict v) { return v == BallVerdict::BoundedBelow ? "BoundedBelow" : "UnboundedBelow"; }

BallEnergyReport ball_scan(double N_e, double N_p, const ConstantSet& c, std::vector<double> R_grid, Exec exec) {
    if (!(N_e > 0.0 || N_p > 0.0)) throw SolverError(ErrorCode::NonPositiveInput, "ball needs particles");
    BallEnergyReport rep;
    rep.N_e = N_e;
    rep.N_p = N_p;
    if (R_grid.empty()) {
        // Radius at which the less relativistic species reaches z = 1e3.
        double r_ref = std::numeric_limits<double>::infinity();
        for (auto [N, m] : {std::pair{N_e, c.m_e}, std::pair{N_p, c.m_p}}) {
            if (N > 0.0) r_ref = std::min(r_ref, c.h / (m * c.c) * std::cbrt(9.0 * N / (32.0 * kPi * kPi)) / 1e3);
        }
        const int n = 24;
        for (int i = 0; i < n; ++i) R_grid.push_back(r_ref * std::pow(10.0, -2.0 + 2.0 * i / (n - 1)));
    }
    rep.R = R_grid;
    rep.energy.resize(R_grid.size());
    for_each_index(R_grid.size(), exec, [&](std::size_t i) {
        rep.energy[i] = uniform_ball_energy(N_e, N_p, R_grid[i], c).total;
    });
    // E(R) R = s + c0 R + c1 R^2, with R scaled for conditioning.
    const double Rs = *std::max_element(R_grid.begin(), R_grid.end());
    Eigen::MatrixXd X(R_grid.size(), 3);
    Eigen::VectorXd y(R_grid.size());
    for (std::size_t i = 0; i < R_grid.size(); ++i) {
        const double x = R_grid[i] / Rs;
        X(i, 0) = 1.0;
        X(i, 1) = x;
        X(i, 2) = x * x;
        y(i) = rep.energy[i] * R_grid[i];
    }
    const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
    rep.fitted_slope = beta(0);
    rep.fitted_const = beta(1) / Rs;
    rep.fitted_linear = beta(2) / (Rs * Rs);
    rep.exact_slope = ball_inverse_radius_coefficient(N_e, N_p, c);
    rep.verdict = rep.fitted_slope < 0.0 ? BallVerdict::UnboundedBelow : BallVerdict::BoundedBelow;
    return rep;
}

CriticalMassReport critical_mass_scan(double ratio, const ConstantSet& c, std::vector<double> R_grid,
                                      double below_factor, double above_factor, Exec exec) {
    if (!(ratio > 0.0)) throw SolverError(ErrorCode::InadmissibleRatio, "ratio must be positive");
    if (check_ratio(1.0, ratio, ratio_window(c)) == RatioStatus::Inadmissible) {
        throw SolverError(ErrorCode::InadmissibleRatio, "N_e/N_p outside the admissibility window");
    }
    CriticalMassReport rep;
    rep.ratio = ratio;
    const double grav = 0.6 * (c.G * std::pow(c.m_p * ratio + c.m_e, 2) - c.q * c.q * std::pow(ratio - 1.0, 2));
    if (!(grav > 0.0)) throw SolverError(ErrorCode::NoRootInBracket, "gravity never dominates at this composition");
    const double kin = ball_kinetic_coefficient(1.0, ratio, c);
    rep.threshold_closed = std::pow(kin / grav, 1.5);

    const auto s = [&](double N) { return ball_inverse_radius_coefficient(N, ratio * N, c); };
    double lo = 1.0, hi = 1.0;
    for (int i = 0; i < 2000 && s(lo) <= 0.0; ++i) lo *= 0.5;
    for (int i = 0; i < 2000 && s(hi) >= 0.0; ++i) hi *= 2.0;
    for (int i = 0; i < 400 && hi / lo - 1.0 > 1e-15; ++i) {
        const double mid = std::sqrt(lo * hi);
        (s(mid) > 0.0 ? lo : hi) = mid;
    }
    rep.threshold = std::sqrt(lo * hi);
    const double nb = below_factor * rep.threshold, na = above_factor * rep.threshold;
    rep.below = ball_scan(nb, ratio * nb, c, R_grid, exec);
    rep.above = ball_scan(na, ratio * na, c, R_grid, exec);
    return rep;
}

double rel_existence_bound(const ConstantSet& c, double K_lions) {
    if (!(K_lions > 0.0) || !(c.G > 0.0)) throw SolverError(ErrorCode::NonPositiveInput, "need K > 0 and G > 0");
    return kPi * std::pow(2.0, 2.0 / 3.0) * c.h * c.c * std::pow(3.0 / (8.0 * kPi), 4.0 / 3.0) /
           (c.G * K_lions * std::pow(c.m_p, 4.0 / 3.0));
}

}  // namespace tfstar
