#include <doctest.h>

#include "fracvia/coefficients.hpp"

#include <algorithm>

using namespace fracvia;

namespace {
Eigen::VectorXd s1(double x) { return Eigen::VectorXd::Constant(1, x); }
}  // namespace

TEST_CASE("builtin coefficient formulas") {
    const CoefficientPair lin = linear_coefficients(-0.5, 0.2, 0.4, 0.1, 2);
    Eigen::VectorXd x(2);
    x << 1.0, -2.0;
    CHECK(lin.b(0.3, x)(1) == doctest::Approx(1.2));
    CHECK(lin.sigma(0.3, x)(1, 1) == doctest::Approx(-0.7));
    CHECK(lin.sigma(0.3, x)(0, 1) == 0.0);

    const CoefficientPair ball = ball_control_coefficients(1.0, 0.5, 2.0);
    CHECK(ball.sigma(0.0, s1(2.0))(0, 0) == doctest::Approx(0.0).scale(1.0));
    CHECK(ball.sigma(0.0, s1(-2.0))(0, 0) == doctest::Approx(0.0).scale(1.0));
    CHECK(ball.sigma(0.0, s1(0.0))(0, 0) == doctest::Approx(0.5));
    CHECK(ball.b(0.0, s1(1.5))(0) == doctest::Approx(-1.5));

    const CoefficientPair noise = constant_noise_coefficients(0.3, 1.0);
    CHECK(noise.sigma(0.7, s1(1.99))(0, 0) == 1.0);

    const CoefficientPair sn = sin_coefficients(-1.0, 0.0, 0.5);
    CHECK(sn.sigma(0.0, s1(1.0))(0, 0) == doctest::Approx(0.5 * std::sin(1.0)));
}

TEST_CASE("named builtins and parameter checks") {
    const auto names = builtin_names();
    CHECK(std::find(names.begin(), names.end(), "ball-control") != names.end());
    CHECK(make_coefficients("constant-noise", {{"kappa", 0.05}}).b(0.0, s1(2.0))(0) == doctest::Approx(-0.1));
    CHECK_THROWS(make_coefficients("linear", {{"kappa", 1.0}}));
    CHECK_THROWS(make_coefficients("quadratic"));
    CHECK(builtin_defaults("sin").count("amp") == 1);
}

TEST_CASE("finite-difference gradient matches the analytic one") {
    CoefficientPair sn = sin_coefficients(-1.0, 0.0, 0.5);
    const auto analytic = sn.grad_sigma(0.2, s1(0.7));
    sn.gradient = nullptr;
    const auto numeric = sn.grad_sigma(0.2, s1(0.7));
    REQUIRE(analytic.size() == numeric.size());
    CHECK(numeric[0](0, 0) == doctest::Approx(analytic[0](0, 0)).epsilon(1e-6));
    CHECK(analytic[0](0, 0) == doctest::Approx(0.5 * std::cos(0.7)));
}

TEST_CASE("assumption gates") {
    CoefficientPair c = linear_coefficients(-0.5, 0.2, 0.4, 0.1, 1);
    c.beta = 0.9;
    c.delta = 1.0;
    CHECK(check_assumptions(c, 0.3, 0.75).pass);

    c.beta = 0.1;
    const AssumptionReport bad = check_assumptions(c, 0.05, 0.6);
    CHECK_FALSE(bad.pass);
    bool found = false;
    for (const auto& g : bad.gates)
        if (g.name == "1-H<beta") found = !g.pass;
    CHECK(found);

    CoefficientPair rough = linear_coefficients(-0.5, 0.2, 0.4, 0.1, 1);
    rough.delta = 0.5;
    const AssumptionReport hi = check_assumptions(rough, 0.4, 0.75);
    CHECK_FALSE(hi.pass);
    CHECK(hi.tightest_violation == "alpha<alpha0");

    CHECK(check_assumptions(sin_coefficients(-1.0, 0.0, 1.0), 0.3, 0.75).pass);
}

TEST_CASE("understated constants are caught by the lattice checks") {
    CoefficientPair sn = sin_coefficients(-1.0, 0.0, 1.0);
    sn.M0 = 0.5;
    const AssumptionReport r = check_assumptions(sn, 0.3, 0.75);
    CHECK_FALSE(r.pass);
    CoefficientPair lin = linear_coefficients(-2.0, 0.0, 0.1, 0.0, 1);
    lin.L0 = 0.5;
    CHECK_FALSE(check_assumptions(lin, 0.3, 0.75).pass);
}
