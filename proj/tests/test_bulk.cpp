#include <doctest.h>

#include <cmath>

#include "tfstar/bulk.hpp"
#include "tfstar/error.hpp"
#include "tfstar/special.hpp"

using namespace tfstar;

namespace {
const CoefficientSet& desk() {
    static const CoefficientSet k = derive_coefficients(ConstantSet::desk());
    return k;
}
}  // namespace

TEST_CASE("central signs") {
    const CoefficientSet& k = desk();
    const CentralSigns s = initial_signs(1.0, 1.0, k);
    CHECK(s.phi0 == doctest::Approx(k.F - k.E));
    CHECK(s.psi0 == doctest::Approx(k.B - k.A));
    CHECK(s.both_negative());
    CHECK(s.rejection().empty());
    const CentralSigns bad = initial_signs(1.0, 100.0, k);
    CHECK_FALSE(bad.both_negative());
    CHECK(bad.psi0 > 0.0);
    CHECK_FALSE(bad.rejection().empty());
    // the central window on alpha / beta is exactly where both signs are negative
    const AdmissibilityWindows w = ratio_window(ConstantSet::desk());
    const double lo = 1.0 / w.central_hi, hi = 1.0 / w.central_lo;
    CHECK(lo == doctest::Approx(std::cbrt(std::pow(k.F / k.E, 2))).epsilon(1e-14));
    CHECK(initial_signs(1.0, lo * 1.0001, k).both_negative());
    CHECK(initial_signs(1.0, hi * 0.9999, k).both_negative());
    CHECK_FALSE(initial_signs(1.0, lo * 0.9999, k).both_negative());
    CHECK_FALSE(initial_signs(1.0, hi * 1.0001, k).both_negative());
}

TEST_CASE("series start and right-hand side") {
    const CoefficientSet& k = desk();
    const double a = 1.2, b = 1.1, h = 1e-3;
    const BulkState s = series_start(a, b, h, k);
    const CentralSigns c = initial_signs(a, b, k);
    CHECK(s.r == h);
    CHECK(s.u_p == doctest::Approx(a + c.phi0 * h * h / 6).epsilon(1e-15));
    CHECK(s.u_e == doctest::Approx(b + c.psi0 * h * h / 6).epsilon(1e-15));
    CHECK(s.du_p == doctest::Approx(c.phi0 * h / 3).epsilon(1e-15));
    CHECK(s.du_e == doctest::Approx(c.psi0 * h / 3).epsilon(1e-15));

    // at the series start the full operator reproduces the central value
    const auto d2 = bulk_rhs(s, k);
    CHECK(d2[0] + 2.0 / h * s.du_e == doctest::Approx(c.psi0).epsilon(1e-5));
    CHECK(d2[1] + 2.0 / h * s.du_p == doctest::Approx(c.phi0).epsilon(1e-5));

    BulkState t{2.0, 0.25, 0.36, -0.1, 0.2};
    const auto v = bulk_rhs(t, k);
    CHECK(v[0] == doctest::Approx(k.B * 0.125 - k.A * 0.216 + 0.1).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(k.F * 0.216 - k.E * 0.125 - 0.2).epsilon(1e-14));
    t.u_e = -0.5;  // clamped inside the power
    CHECK(bulk_rhs(t, k)[0] == doctest::Approx(-k.A * 0.216 + 0.1).epsilon(1e-14));
}

TEST_CASE("bulk rejects bad input") {
    CHECK_THROWS_AS(integrate_bulk(0.0, 1.0, desk()), SolverError);
    try {
        integrate_bulk(1.0, 100.0, desk());
        FAIL("expected a rejection");
    } catch (const SolverError& e) {
        CHECK(e.code() == ErrorCode::Inadmissible);
    }
}

TEST_CASE("the special ray vanishes simultaneously and the sides split by species") {
    const CoefficientSet& k = desk();
    const double kd = solve_kd(5.0, k);
    const double beta = std::cbrt(kd * kd);
    const BulkOutcome s = integrate_bulk(1.0, beta, k);
    CHECK(s.event == BulkEvent::SimultaneousVanish);

    // electrons run out first below the ray, protons above it
    const BulkOutcome below = integrate_bulk(1.0, 0.99 * beta, k);
    const BulkOutcome above = integrate_bulk(1.0, 1.01 * beta, k);
    CHECK(below.event == BulkEvent::VanishE);
    CHECK(above.event == BulkEvent::VanishP);
    CHECK(below.state_at_event.u_e == 0.0);
    CHECK(above.state_at_event.u_p == 0.0);
    CHECK(below.state_at_event.u_p > 0.0);
    CHECK(above.state_at_event.u_e > 0.0);
}

TEST_CASE("bulk profile satisfies the ODE and both species decrease") {
    const BulkOutcome s = integrate_bulk(1.0, 0.9086, desk());
    CHECK(bulk_residual(s.profile, desk()) < 1e-6);
    CHECK(s.profile.r.front() == 0.0);
    for (std::size_t i = 1; i < s.profile.size(); ++i) {
        CHECK(s.profile.du_e[i] <= 0.0);
        CHECK(s.profile.du_p[i] <= 0.0);
    }
    // far from the special ray the surviving species turns around
    const BulkOutcome far = integrate_bulk(1.0, 0.95, desk());
    REQUIRE(far.turning_radius.has_value());
    CHECK(*far.turning_radius < far.event_radius);
}

TEST_CASE("event radius is stable under tolerance tightening") {
    BulkOptions loose, tight;
    loose.tol.rtol = 1e-9;
    loose.tol.atol = 1e-11;
    tight.tol.rtol = 1e-12;
    tight.tol.atol = 1e-14;
    const double r1 = integrate_bulk(1.0, 0.93, desk(), loose).event_radius;
    const double r2 = integrate_bulk(1.0, 0.93, desk(), tight).event_radius;
    CHECK(std::abs(r1 - r2) < 1e-7 * r2);
}

TEST_CASE("the window closes without gravity and with equal prefactors") {
    ConstantSet c = ConstantSet::desk().with_gravity(0.0);
    c.k_p = c.k_e;
    const CoefficientSet k = derive_coefficients(c);
    CHECK_FALSE(initial_signs(1.0 + 1e-6, 1.0, k).both_negative());
    CHECK_FALSE(initial_signs(1.0, 1.0 + 1e-6, k).both_negative());
    CHECK_THROWS_AS(integrate_bulk(1.0 + 1e-6, 1.0, k), SolverError);
}
