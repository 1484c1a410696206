#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfstar/energy.hpp"
#include "tfstar/shoot.hpp"

using namespace tfstar;

namespace {
constexpr double pi = std::numbers::pi;

RadialProfile ball(double R, double ue, double up, int nodes = 17) {
    RadialProfile p;
    for (int i = 0; i < nodes; ++i) p.push(R * i / (nodes - 1), ue, up, 0.0, 0.0, 0.0, 0.0);
    return p;
}
}  // namespace

TEST_CASE("potential of a uniform ball") {
    const double R = 1.3, rho = 0.7;
    const RadialProfile p = ball(R, std::cbrt(rho * rho), 0.0);
    const ProfileQuadrature q(p);
    const RadialPotential pot = radial_potential(q, [](double, double ue, double) { return pow32(ue); });
    const double M = 4.0 / 3.0 * pi * R * R * R * rho;
    CHECK(pot.total_mass() == doctest::Approx(M).epsilon(1e-13));
    // inside: 2 pi rho (R^2 - r^2 / 3); outside: M / r
    for (std::size_t i = 0; i < pot.r.size(); i += 7) {
        const double r = pot.r[i];
        CHECK(pot.value[i] == doctest::Approx(2 * pi * rho * (R * R - r * r / 3)).epsilon(1e-12));
    }
    CHECK(pot.exterior(2.5) == doctest::Approx(M / 2.5).epsilon(1e-13));

    const SelfEnergy e = self_energy(q, pot, [](double, double ue, double) { return pow32(ue); });
    CHECK(e.direct == doctest::Approx(0.6 * M * M / R).epsilon(1e-12));
    CHECK(e.field == doctest::Approx(0.6 * M * M / R).epsilon(1e-12));
}

TEST_CASE("neutral pairs carry no electric energy; G = 0 makes energy positive") {
    const ConstantSet c = ConstantSet::desk();
    const RadialProfile p = ball(1.0, 0.5, 0.5);
    const EnergyBreakdown e = evaluate_energy(p, c);
    CHECK(std::abs(e.electric) < 1e-14);
    CHECK(e.gravitational < 0.0);
    const EnergyBreakdown z = evaluate_energy(solve_profile(1.0, 0.9086, c).profile, c.with_gravity(0.0));
    CHECK(z.gravitational == 0.0);
    CHECK(z.total > 0.0);
}

TEST_CASE("solved profile: negative energy, virial relation, flat multipliers") {
    const ConstantSet c = ConstantSet::desk();
    const FullSolution s = solve_profile(1.0, 0.9086, c);
    const EnergyBreakdown e = evaluate_energy(s.profile, c);
    CHECK(e.total < 0.0);
    CHECK(e.electric >= 0.0);
    CHECK(e.electric == doctest::Approx(e.electric_field_form).epsilon(1e-9));
    CHECK(std::abs(2 * e.kinetic() + e.potential()) < 1e-8 * e.kinetic());

    const MultiplierEstimate m = el_residual(s.profile, c);
    CHECK(m.rel_std_e < 1e-5);
    CHECK(m.rel_std_p < 1e-5);
    CHECK(m.mean_e < 0.0);
    CHECK(m.mean_p < 0.0);

    const VirialCheck v = virial_check(s.profile, c);
    CHECK(v.numeric == doctest::Approx(v.direct).epsilon(1e-6));

    // a perturbed profile is not a critical point
    RadialProfile bent = s.profile;
    for (std::size_t i = 0; i < bent.size(); ++i) {
        const double f = 1.0 + 0.05 * std::sin(3.0 * bent.r[i]);
        bent.u_e[i] *= f;
        bent.du_e[i] = bent.du_e[i] * f + s.profile.u_e[i] * 0.15 * std::cos(3.0 * bent.r[i]);
    }
    bent.d2u_e.clear();
    bent.d2u_p.clear();
    const MultiplierEstimate mb = el_residual(bent, c);
    CHECK(std::max(mb.rel_std_e, mb.rel_std_p) > 1e-2);
}

TEST_CASE("dilation laws") {
    const ConstantSet c = ConstantSet::desk();
    const RadialProfile p = solve_profile(1.0, 0.9086, c).profile;
    const std::vector<double> lambdas{0.5, 1.0, 2.0, 3.0};
    const auto s = dilation_scan(p, lambdas, c);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double l = lambdas[i];
        CHECK(s[i].kinetic() * l * l == doctest::Approx(s[1].kinetic()).epsilon(1e-8));
        CHECK(s[i].potential() * l == doctest::Approx(s[1].potential()).epsilon(1e-8));
    }
    const auto par = dilation_scan(p, lambdas, c, Exec::Parallel);
    for (std::size_t i = 0; i < lambdas.size(); ++i) CHECK(par[i].total == s[i].total);
}
