#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfstar/bulk.hpp"
#include "tfstar/error.hpp"
#include "tfstar/special.hpp"

using namespace tfstar;

namespace {

// Classic fixed-step RK4 for theta'' = -2 theta'/xi - theta^n, stopping at
// the first zero. Two step sizes combined by Richardson extrapolation.
double rk4_first_zero(double n, double h) {
    auto f = [n](double x, double t, double dt, double& a, double& b) {
        a = dt;
        b = -2.0 / x * dt - (t > 0.0 ? std::pow(t, n) : 0.0);
    };
    double x = 1e-4;
    double t = 1.0 - x * x / 6.0 + n * std::pow(x, 4) / 120.0;
    double dt = -x / 3.0 + n * x * x * x / 30.0;
    auto step = [&](double x0, double t0, double d0, double s, double& t1, double& d1) {
        double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
        f(x0, t0, d0, k1a, k1b);
        f(x0 + s / 2, t0 + s / 2 * k1a, d0 + s / 2 * k1b, k2a, k2b);
        f(x0 + s / 2, t0 + s / 2 * k2a, d0 + s / 2 * k2b, k3a, k3b);
        f(x0 + s, t0 + s * k3a, d0 + s * k3b, k4a, k4b);
        t1 = t0 + s / 6 * (k1a + 2 * k2a + 2 * k3a + k4a);
        d1 = d0 + s / 6 * (k1b + 2 * k2b + 2 * k3b + k4b);
    };
    for (;;) {
        double t1, d1;
        step(x, t, dt, h, t1, d1);
        if (t1 <= 0.0) break;
        x += h;
        t = t1;
        dt = d1;
    }
    // Newton on the partial step length
    double s = -t / dt;
    for (int i = 0; i < 30; ++i) {
        double t1, d1;
        step(x, t, dt, s, t1, d1);
        const double ds = -t1 / d1;
        s += ds;
        if (std::abs(ds) < 1e-15) break;
    }
    return x + s;
}

}  // namespace

TEST_CASE("proportionality constant") {
    // G = 0 with equal prefactors: all coefficients coincide and k = 1
    ConstantSet c = ConstantSet::desk().with_gravity(0.0);
    c.k_p = c.k_e;
    CHECK(solve_kd(5.0, derive_coefficients(c)) == doctest::Approx(1.0).epsilon(1e-14));

    const CoefficientSet k = derive_coefficients(ConstantSet::desk());
    const double kd = solve_kd(5.0, k);
    CHECK(std::abs(proportionality_residual(5.0, kd, k)) < 1e-12 * k.A);
    // independent bisection on the same polynomial in k^{1/3}
    double lo = 0.0, hi = k.E / k.F;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        const double v = k.E * std::pow(m, 5.0 / 3.0) - k.F * std::pow(m, 2.0 / 3.0) + k.B * m - k.A;
        (v < 0.0 ? lo : hi) = m;
    }
    CHECK(kd == doctest::Approx(lo).epsilon(1e-14));
    CHECK(kd == doctest::Approx(0.8660040541397593).epsilon(1e-13));

    // exactly one sign change on [0, E/F]
    int changes = 0;
    double prev = proportionality_residual(5.0, 0.0, k);
    for (int i = 1; i <= 2000; ++i) {
        const double v = proportionality_residual(5.0, k.E / k.F * i / 2000.0, k);
        changes += (v > 0.0) != (prev > 0.0);
        prev = v;
    }
    CHECK(changes == 1);
}

TEST_CASE("Lane-Emden n = 1 and n = 5 against closed forms") {
    const LaneEmdenSolution s1 = lane_emden(1.0);
    REQUIRE(s1.has_zero);
    CHECK(std::abs(s1.xi1 - std::numbers::pi) < 1e-8);
    CHECK(s1.dtheta1 == doctest::Approx(-1.0 / std::numbers::pi).epsilon(1e-8));

    LaneEmdenOptions o;
    o.xi_max = 3.0;
    const LaneEmdenSolution s5 = lane_emden(5.0, o);
    CHECK_FALSE(s5.has_zero);
    double worst = 0.0;
    for (std::size_t i = 0; i < s5.xi.size(); ++i) {
        worst = std::max(worst, std::abs(s5.theta[i] - 1.0 / std::sqrt(1.0 + s5.xi[i] * s5.xi[i] / 3.0)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("Lane-Emden n = 3/2 against an independent RK4 oracle") {
    const double h = 2e-3;
    const double a = rk4_first_zero(1.5, h), b = rk4_first_zero(1.5, h / 2);
    const double oracle = b + (b - a) / 15.0;
    CHECK(std::abs(lane_emden(1.5).xi1 - oracle) < 1e-8);
    CHECK(oracle == doctest::Approx(3.65375373622).epsilon(1e-9));
    // n = 3 for the relativistic limit
    CHECK(lane_emden(3.0).xi1 == doctest::Approx(6.89684861937).epsilon(1e-9));
}

TEST_CASE("special profile keeps a constant density ratio") {
    const CoefficientSet k = derive_coefficients(ConstantSet::desk());
    const SpecialSolution s = special_profile(1.3, k);
    CHECK(s.beta == doctest::Approx(std::cbrt(s.k * s.k) * 1.3).epsilon(1e-15));
    CHECK(s.curvature == doctest::Approx(k.E * s.k - k.F).epsilon(1e-14));
    for (std::size_t i = 0; i + 1 < s.profile.size(); ++i) {
        CHECK(std::pow(s.profile.u_e[i] / s.profile.u_p[i], 1.5) == doctest::Approx(s.k).epsilon(1e-12));
    }
    CHECK(bulk_residual(s.profile, k) < 1e-7);
    CHECK(s.radius == doctest::Approx(s.radial_scale * s.xi1).epsilon(1e-15));
    // amplitude scaling: radius goes as alpha^{-1/4}
    const SpecialSolution t = special_profile(1.3 * 16.0, k);
    CHECK(t.radius == doctest::Approx(s.radius / 2.0).epsilon(1e-12));
}
