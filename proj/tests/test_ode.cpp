#include <doctest.h>

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <vector>

#include "tfstar/ode.hpp"

using namespace tfstar;

namespace {

// Lane-Emden type test problem with a known answer: theta'' + 2 theta'/x = -theta,
// theta = sin x / x. Integrated from x = 0.5 to avoid the origin.
ode::Vec<2> le1(double x, const ode::Vec<2>& y) { return {y[1], -2.0 / x * y[1] - y[0]}; }

double exact(double x) { return std::sin(x) / x; }
double exact_d(double x) { return std::cos(x) / x - std::sin(x) / (x * x); }

}  // namespace

TEST_CASE("dense output tracks the exact solution") {
    const double x0 = 0.5;
    ode::Vec<2> y0{exact(x0), exact_d(x0)};
    ode::Tolerances tol;
    tol.rtol = 1e-11;
    tol.atol = 1e-13;
    double worst = 0.0;
    std::size_t steps = 0;
    const auto status = ode::integrate<2>(le1, x0, y0, 3.0, tol, [&](const ode::DenseStep<2>& st) {
        ++steps;
        for (int k = 0; k <= 10; ++k) {
            const double x = st.x0 + (st.x1 - st.x0) * k / 10.0;
            worst = std::max(worst, std::abs(st.eval(x)[0] - exact(x)));
        }
        return ode::Control::Continue;
    });
    CHECK(status == ode::Status::ReachedEnd);
    CHECK(steps > 5);
    CHECK(worst < 1e-9);
}

TEST_CASE("backward integration and root location") {
    // integrate from 3 back to 0.5, then forward to the first zero (pi)
    ode::Vec<2> y0{exact(3.0), exact_d(3.0)};
    ode::Vec<2> last{};
    ode::integrate<2>(le1, 3.0, y0, 0.5, {}, [&](const ode::DenseStep<2>& st) {
        last = st.y1;
        return ode::Control::Continue;
    });
    CHECK(last[0] == doctest::Approx(exact(0.5)).epsilon(1e-10));

    double root = 0.0;
    ode::integrate<2>(le1, 0.5, ode::Vec<2>{exact(0.5), exact_d(0.5)}, 10.0, {}, [&](const ode::DenseStep<2>& st) {
        if (st.y1[0] <= 0.0) {
            root = ode::locate_root(st, [](double, const ode::Vec<2>& y) { return y[0]; }, 0.0);
            return ode::Control::Stop;
        }
        return ode::Control::Continue;
    });
    CHECK(root == doctest::Approx(M_PI).epsilon(1e-10));
}

TEST_CASE("agrees with boost odeint dopri5 on a nonlinear system") {
    // u'' + 2u'/r = 3 u^{3/2} - 2 v^{3/2}, v'' + 2v'/r = 4 v^{3/2} - 5 u^{3/2}
    const auto f = [](double r, const ode::Vec<4>& y) {
        const auto p = [](double u) { return u > 0 ? u * std::sqrt(u) : 0.0; };
        return ode::Vec<4>{y[2], y[3], -2.0 / r * y[2] + 3 * p(y[0]) - 2 * p(y[1]),
                           -2.0 / r * y[3] + 4 * p(y[1]) - 5 * p(y[0])};
    };
    const ode::Vec<4> y0{1.0, 1.1, -1e-3, -2e-3};
    ode::Vec<4> ours{};
    ode::integrate<4>(f, 0.01, y0, 0.8, {1e-12, 1e-14}, [&](const ode::DenseStep<4>& st) {
        ours = st.y1;
        return ode::Control::Continue;
    });

    using State = std::vector<double>;
    namespace oi = boost::numeric::odeint;
    State y(y0.begin(), y0.end());
    auto stepper = oi::make_controlled(1e-13, 1e-13, oi::runge_kutta_dopri5<State>());
    oi::integrate_adaptive(stepper, [&](const State& s, State& d, double r) {
        const auto v = f(r, ode::Vec<4>{s[0], s[1], s[2], s[3]});
        d.assign(v.begin(), v.end());
    }, y, 0.01, 0.8, 1e-4);
    for (int i = 0; i < 4; ++i) CHECK(ours[i] == doctest::Approx(y[i]).epsilon(1e-9));
}
