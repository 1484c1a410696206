#include "tfstar/energy.hpp"

#include <algorithm>
#include <cmath>

#include "tfstar/error.hpp"

namespace tfstar {

namespace {

constexpr double kFourPi = 4.0 * M_PI;

// r^{-4} envelope tails of one species: u = c r^{-4}, rho = c^{3/2} r^{-6}.
double rho_tail(double c) { return c > 0.0 ? pow32(c) : 0.0; }

}  // namespace

double RadialPotential::total_mass() const {
    const double R = outer_radius;
    return grid_mass + kFourPi * tail_coeff / (3.0 * R * R * R);
}

double RadialPotential::exterior(double radius) const {
    const double R = outer_radius;
    const double m = grid_mass + kFourPi * tail_coeff / 3.0 * (1.0 / (R * R * R) - 1.0 / (radius * radius * radius));
    const double r2 = radius * radius;
    return m / radius + M_PI * tail_coeff / (r2 * r2);
}

RadialPotential radial_potential(const ProfileQuadrature& q, const RadialDensity& rho, double tail_coeff) {
    RadialPotential pot;
    pot.r = q.r();
    pot.outer_radius = q.outer_radius();
    pot.tail_coeff = tail_coeff;
    double m_total = 0.0, s_total = 0.0;
    const auto mass = q.cumulative([&](double r, double ue, double up) { return r * r * rho(r, ue, up); }, &m_total);
    const auto first = q.cumulative([&](double r, double ue, double up) { return r * rho(r, ue, up); }, &s_total);
    pot.grid_mass = kFourPi * m_total;
    const double R = pot.outer_radius;
    const double outer_first = M_PI * tail_coeff / (R * R * R * R);  // 4 pi int_R^inf s rho
    pot.enclosed.resize(pot.r.size());
    pot.value.resize(pot.r.size());
    for (std::size_t j = 0; j < pot.r.size(); ++j) {
        pot.enclosed[j] = kFourPi * mass[j];
        pot.value[j] = pot.enclosed[j] / pot.r[j] + kFourPi * (s_total - first[j]) + outer_first;
    }
    return pot;
}

SelfEnergy self_energy(const ProfileQuadrature& q, const RadialPotential& pot, const RadialDensity& rho) {
    SelfEnergy e;
    const auto& r = q.r();
    const auto& w = q.weight();
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double d = rho(r[j], q.u_e()[j], q.u_p()[j]);
        e.direct += w[j] * kFourPi * r[j] * r[j] * d * pot.value[j];
        e.field += w[j] * pot.enclosed[j] * pot.enclosed[j] / (r[j] * r[j]);
    }
    e.direct *= 0.5;
    e.field *= 0.5;
    // Beyond the grid: M(r) = M_inf - T / r^3 with T = 4 pi kappa / 3.
    const double R = pot.outer_radius;
    const double kappa = pot.tail_coeff;
    const double T = kFourPi * kappa / 3.0;
    const double m_inf = pot.total_mass();
    const double R4 = R * R * R * R, R7 = R4 * R * R * R;
    e.field += 0.5 * (m_inf * m_inf / R - m_inf * T / (2.0 * R4) + T * T / (7.0 * R7));
    e.direct += 2.0 * M_PI * kappa * (m_inf / (4.0 * R4) + (M_PI * kappa - T) / (7.0 * R7));
    return e;
}

EnergyBreakdown evaluate_energy(const RadialProfile& p, const ConstantSet& consts, double rel_tol, Exec exec) {
    const ProfileQuadrature q(p, exec);
    const double R = p.outer_radius();
    const double R7 = std::pow(R, 7.0);
    EnergyBreakdown e;
    const auto ke = q.integrate([](double r, double ue, double) { return r * r * pow32(ue) * ue; });
    const auto kp = q.integrate([](double r, double, double up) { return r * r * pow32(up) * up; });
    const auto kin_tail = [&](double c) { return c > 0.0 ? kFourPi * pow32(c) * c / (7.0 * R7) : 0.0; };
    e.kinetic_e = consts.k_e * (kFourPi * ke.value + kin_tail(p.tail_e));
    e.kinetic_p = consts.k_p * (kFourPi * kp.value + kin_tail(p.tail_p));

    const double mp = consts.m_p, me = consts.m_e;
    const RadialDensity sigma = [](double, double ue, double up) { return pow32(up) - pow32(ue); };
    const RadialDensity mu = [mp, me](double, double ue, double up) { return mp * pow32(up) + me * pow32(ue); };
    const double te = rho_tail(p.tail_e), tp = rho_tail(p.tail_p);
    const RadialPotential pot_s = radial_potential(q, sigma, tp - te);
    const RadialPotential pot_m = radial_potential(q, mu, mp * tp + me * te);
    const SelfEnergy es = self_energy(q, pot_s, sigma);
    const SelfEnergy em = self_energy(q, pot_m, mu);
    const double q2 = consts.q * consts.q;
    e.electric = q2 * es.direct;
    e.electric_field_form = q2 * es.field;
    e.gravitational = -consts.G * em.direct;
    e.gravitational_field_form = -consts.G * em.field;
    e.total = e.kinetic_e + e.kinetic_p + e.electric + e.gravitational;

    const double scale = e.kinetic() + std::abs(e.electric) + std::abs(e.gravitational);
    const double gap = std::max(std::abs(e.electric - e.electric_field_form),
                                std::abs(e.gravitational - e.gravitational_field_form));
    const double quad_err = consts.k_e * kFourPi * ke.error + consts.k_p * kFourPi * kp.error;
    if (gap > rel_tol * scale || quad_err > rel_tol * scale) {
        throw SolverError(ErrorCode::QuadratureNotConverged,
                          "energy quadrature not converged (relative gap " + std::to_string(gap / scale) + ")");
    }
    return e;
}

RadialProfile dilate(const RadialProfile& p, double lambda) { return rescale(p, lambda, 1.0 / (lambda * lambda)); }

std::vector<EnergyBreakdown> dilation_scan(const RadialProfile& p, const std::vector<double>& lambdas,
                                           const ConstantSet& consts, Exec exec) {
    std::vector<EnergyBreakdown> out(lambdas.size());
    for_each_index(lambdas.size(), exec, [&](std::size_t i) {
        out[i] = evaluate_energy(dilate(p, lambdas[i]), consts);
    });
    return out;
}

MultiplierEstimate el_residual(const RadialProfile& p, const ConstantSet& consts) {
    const ProfileQuadrature q(p);
    const double mp = consts.m_p, me = consts.m_e, q2 = consts.q * consts.q, G = consts.G;
    const RadialDensity sigma = [](double, double ue, double up) { return pow32(up) - pow32(ue); };
    const RadialDensity mu = [mp, me](double, double ue, double up) { return mp * pow32(up) + me * pow32(ue); };
    const double te = rho_tail(p.tail_e), tp = rho_tail(p.tail_p);
    const RadialPotential bs = radial_potential(q, sigma, tp - te);
    const RadialPotential bm = radial_potential(q, mu, mp * tp + me * te);

    MultiplierEstimate m;
    std::vector<double> we, wp;
    const std::size_t K = ProfileQuadrature::kPoints;
    for (std::size_t j = 0; j < q.size(); ++j) {
        const std::size_t i = j / K;  // profile interval
        const double ue = q.u_e()[j], up = q.u_p()[j];
        if (p.u_p[i] > 0.0 && p.u_p[i + 1] > 0.0 && up > 0.0) {
            m.r_p.push_back(q.r()[j]);
            m.lambda_p.push_back(5.0 / 3.0 * consts.k_p * up + q2 * bs.value[j] - G * mp * bm.value[j]);
            wp.push_back(q.weight()[j]);
        }
        if (p.u_e[i] > 0.0 && p.u_e[i + 1] > 0.0 && ue > 0.0) {
            m.r_e.push_back(q.r()[j]);
            m.lambda_e.push_back(5.0 / 3.0 * consts.k_e * ue - q2 * bs.value[j] - G * me * bm.value[j]);
            we.push_back(q.weight()[j]);
        }
    }
    const auto stats = [](const std::vector<double>& v, const std::vector<double>& w, double& mean, double& rel) {
        double sw = 0.0, s1 = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            sw += w[i];
            s1 += w[i] * v[i];
        }
        mean = sw > 0.0 ? s1 / sw : 0.0;
        double s2 = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s2 += w[i] * (v[i] - mean) * (v[i] - mean);
        const double sd = sw > 0.0 ? std::sqrt(s2 / sw) : 0.0;
        rel = mean != 0.0 ? sd / std::abs(mean) : std::numeric_limits<double>::infinity();
    };
    stats(m.lambda_e, we, m.mean_e, m.rel_std_e);
    stats(m.lambda_p, wp, m.mean_p, m.rel_std_p);
    return m;
}

VirialCheck virial_check(const RadialProfile& p, const ConstantSet& consts, double h) {
    VirialCheck v;
    const EnergyBreakdown e0 = evaluate_energy(p, consts);
    v.kinetic = e0.kinetic();
    v.potential = e0.potential();
    v.direct = v.kinetic + 5.0 / 3.0 * v.potential;
    const auto energy_at = [&](double s) { return evaluate_energy(rescale(p, std::cbrt(s), 1.0), consts).total; };
    v.numeric = (energy_at(1.0 + h) - energy_at(1.0 - h)) / (2.0 * h);
    return v;
}

}  // namespace tfstar
