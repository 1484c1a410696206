#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfstar/constants.hpp"
#include "tfstar/error.hpp"

using namespace tfstar;

TEST_CASE("desk constants reproduce the kinetic prefactors") {
    const ConstantSet c = ConstantSet::desk();
    CHECK(kinetic_prefactor(c.h, c.m_e) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(kinetic_prefactor(c.h, c.m_p) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("desk coefficients by direct arithmetic") {
    const CoefficientSet k = derive_coefficients(ConstantSet::desk());
    const double s = 12.0 * std::numbers::pi / 5.0;
    CHECK(k.F == doctest::Approx(s / 0.5 * 0.8).epsilon(1e-14));
    CHECK(k.B == doctest::Approx(s * 0.95).epsilon(1e-14));
    CHECK(k.E == doctest::Approx(s / 0.5 * 1.1).epsilon(1e-14));
    CHECK(k.A == doctest::Approx(s * 1.1).epsilon(1e-14));
    CHECK(k.D_e() == k.B);
    CHECK(k.D_p() == k.F);
    CHECK(k.E > k.F);
    CHECK(k.A > k.B);
    CHECK(k.E * k.A > k.B * k.F);
}

TEST_CASE("zero gravity with equal prefactors makes all coefficients equal") {
    ConstantSet c = ConstantSet::desk().with_gravity(0.0);
    c.k_p = c.k_e;
    const CoefficientSet k = derive_coefficients(c);
    CHECK(k.A == doctest::Approx(k.B));
    CHECK(k.E == doctest::Approx(k.F));
    CHECK(k.A == doctest::Approx(k.E));
    const AdmissibilityWindows w = ratio_window(c);
    CHECK(w.ratio_lo == doctest::Approx(1.0));
    CHECK(w.ratio_hi == doctest::Approx(1.0));
}

TEST_CASE("gravity strong enough to beat the proton charge is rejected") {
    const ConstantSet c = ConstantSet::desk().with_gravity(0.3);  // G m_p^2 = 1.2 > q^2
    try {
        derive_coefficients(c);
        FAIL("expected InadmissibleConstants");
    } catch (const SolverError& e) {
        CHECK(e.code() == ErrorCode::InadmissibleConstants);
    }
    ConstantSet bad = ConstantSet::desk();
    bad.m_p = 0.5;
    CHECK_THROWS_AS(bad.validate(), SolverError);
}

TEST_CASE("desk admissibility windows") {
    const AdmissibilityWindows w = ratio_window(ConstantSet::desk());
    CHECK(w.ratio_lo == doctest::Approx(0.8 / 1.1).epsilon(1e-14));
    CHECK(w.ratio_hi == doctest::Approx(1.1 / 0.95).epsilon(1e-14));
    CHECK(w.central_lo == doctest::Approx(std::pow(0.95 / 1.1, 2.0 / 3.0)).epsilon(1e-14));
    CHECK(w.central_hi == doctest::Approx(std::pow(1.1 / 0.8, 2.0 / 3.0)).epsilon(1e-14));
    CHECK(w.central_lo == doctest::Approx(0.9069).epsilon(1e-4));
    CHECK(w.central_hi == doctest::Approx(1.2365).epsilon(1e-4));
    // the window on N_e/N_p is also F/E .. A/B
    const CoefficientSet k = derive_coefficients(ConstantSet::desk());
    CHECK(w.ratio_lo == doctest::Approx(k.F / k.E).epsilon(1e-14));
    CHECK(w.ratio_hi == doctest::Approx(k.A / k.B).epsilon(1e-14));
}

TEST_CASE("ratio classification") {
    const AdmissibilityWindows w = ratio_window(ConstantSet::desk());
    CHECK(check_ratio(1.0, 1.0, w) == RatioStatus::Admissible);
    CHECK(check_ratio(w.ratio_hi, 1.0, w) == RatioStatus::Boundary);
    CHECK(check_ratio(3.0 * w.ratio_lo, 3.0, w) == RatioStatus::Boundary);
    CHECK(check_ratio(2.0, 1.0, w) == RatioStatus::Inadmissible);
    CHECK(check_ratio(0.5, 1.0, w) == RatioStatus::Inadmissible);
    CHECK_THROWS_AS(check_ratio(0.0, 1.0, w), SolverError);
}

TEST_CASE("window narrows monotonically as gravity is switched off") {
    double prev = 1e300;
    for (double G : {0.2, 0.1, 0.05, 0.01, 0.001}) {
        const AdmissibilityWindows w = ratio_window(ConstantSet::desk().with_gravity(G));
        CHECK(w.ratio_lo < 1.0);
        CHECK(w.ratio_hi > 1.0);
        CHECK(w.central_lo < w.central_hi);
        const double width = w.ratio_hi - w.ratio_lo;
        CHECK(width < prev);
        prev = width;
    }
}

TEST_CASE("central window brackets 1 when prefactors agree") {
    ConstantSet c = ConstantSet::desk();
    c.k_p = c.k_e;
    const AdmissibilityWindows w = ratio_window(c);
    CHECK(w.central_lo < 1.0);
    CHECK(w.central_hi > 1.0);
}
