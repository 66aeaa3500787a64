#include <doctest.h>

#include "fracvia/coefficients.hpp"
#include "fracvia/fbm.hpp"
#include "fracvia/fsde.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace fracvia;
using testing_util::sample;

namespace {
const UniformGrid kGrid(0.0, 1.0, 257);

CoefficientPair constant_drift(double c) {
    CoefficientPair p = zero_coefficients(1, 1);
    p.drift = [c](double, const Eigen::VectorXd&) { return Eigen::VectorXd::Constant(1, c); };
    p.L0 = std::abs(c);
    return p;
}

CoefficientPair identity_diffusion() {
    CoefficientPair p = zero_coefficients(1, 1);
    p.diffusion = [](double, const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(1, 1); };
    p.M0 = 1.0;
    return p;
}
}  // namespace

TEST_CASE("drift operator") {
    const GridFunction id = sample(kGrid, [](double s) { return s; });
    CHECK(drift_operator(id, zero_coefficients(), 0.0, 1.0).norm() == 0.0);
    CHECK(drift_operator(id, constant_drift(2.5), 0.25, 0.75)(0) == doctest::Approx(1.25));
    CHECK(drift_operator(id, linear_coefficients(1.0, 0.0, 0.0, 0.0), 0.0, 1.0)(0) == doctest::Approx(0.5));
}

TEST_CASE("diffusion operator") {
    const GridFunction g = sample(kGrid, [](double s) { return std::sin(3 * s); });
    const GridFunction f = sample(kGrid, [](double s) { return s; });
    CHECK(diffusion_operator(f, g, zero_coefficients(), 0.3, 0.0, 1.0).norm() == 0.0);
    CHECK(diffusion_operator(f, g, identity_diffusion(), 0.3, 0.0, 1.0)(0) ==
          doctest::Approx(std::sin(3.0)).epsilon(10.0 / 257));
    // sigma(x) = x along f = g: Riemann-Stieltjes oracle int sin(3s) d sin(3s) = sin(3)^2 / 2
    const double v = diffusion_operator(g, g, linear_coefficients(0.0, 0.0, 1.0, 0.0), 0.3, 0.0, 1.0)(0);
    CHECK(v == doctest::Approx(0.5 * std::sin(3.0) * std::sin(3.0)).epsilon(0.02));
}

TEST_CASE("picard: trivial and closed-form cases") {
    const GridFunction g = sample(kGrid, [](double s) { return s + 0.5 * std::sin(2 * std::numbers::pi * s); });
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, 0.8);
    SolverConfig cfg;
    const SolveResult z = solve_picard(zero_coefficients(), g, x0, 0.0, 1.0, cfg);
    CHECK((z.path.values().array() == 0.8).all());

    const SolveResult ode = solve_picard(linear_coefficients(-1.0, 0.0, 0.0, 0.0), g, x0, 0.0, 1.0, cfg);
    for (std::size_t i = 0; i < kGrid.n; i += 32) CHECK(ode.path(i) == doctest::Approx(0.8 * std::exp(-kGrid.time(i))).epsilon(1e-4));

    const SolveResult lin = solve_picard(linear_coefficients(0.0, 0.0, 0.5, 0.0), g, x0, 0.0, 1.0, cfg);
    double err = 0.0;
    for (std::size_t i = 0; i < kGrid.n; ++i) err = std::max(err, std::abs(lin.path(i) - 0.8 * std::exp(0.5 * (g(i) - g(0)))));
    CHECK(err < 5e-3);
    CHECK(lin.residual <= 10 * cfg.picard_tol);
    CHECK(integral_residual(lin.path, linear_coefficients(0.0, 0.0, 0.5, 0.0), g, x0, cfg.alpha) <= 10 * cfg.picard_tol);
}

TEST_CASE("euler scheme") {
    const GridFunction g = sample(kGrid, [](double s) { return std::cos(4 * s); });
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, -0.3);
    CHECK((solve_euler(zero_coefficients(), g, x0, 0.0, 1.0).values().array() == -0.3).all());
    CoefficientPair additive = linear_coefficients(0.0, 0.0, 0.0, 0.7);
    const GridFunction X = solve_euler(additive, g, x0, 0.0, 1.0);
    for (std::size_t i = 0; i < kGrid.n; i += 16) CHECK(X(i) == doctest::Approx(-0.3 + 0.7 * (g(i) - g(0))));
}

TEST_CASE("picard and euler agree on the linear problem") {
    FbmSpec spec;
    spec.hurst = 0.75;
    spec.grid_points = 1025;
    spec.seed = 2;
    const GridFunction g = sample_fbm_circulant(spec);
    const CoefficientPair c = linear_coefficients(0.0, 0.0, 0.5, 0.0);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, 1.0);
    SolverConfig cfg;
    const GridFunction P = solve_picard(c, g, x0, 0.0, 1.0, cfg).path;
    const GridFunction E = solve_euler(c, g, x0, 0.0, 1.0);
    double ep = 0, ee = 0, pe = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = std::exp(0.5 * (g(i) - g(0)));
        ep = std::max(ep, std::abs(P(i) - x));
        ee = std::max(ee, std::abs(E(i) - x));
        pe = std::max(pe, std::abs(P(i) - E(i)));
    }
    CHECK(pe <= 5 * std::max(ep, ee));
}

TEST_CASE("flow locality") {
    const GridFunction g = sample(kGrid, [](double s) { return s * s + 0.3 * std::sin(5 * s); });
    const CoefficientPair c = sin_coefficients(-1.0, 0.0, 0.5);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, 0.4);
    SolverConfig cfg;
    const GridFunction full = solve_picard(c, g, x0, 0.0, 1.0, cfg).path;
    const GridFunction half = solve_picard(c, window(g, 0.0, 0.5), x0, 0.0, 0.5, cfg).path;
    for (std::size_t i = 0; i < half.size(); ++i) CHECK(half(i) == doctest::Approx(full(i)).epsilon(1e-9));
}

TEST_CASE("contraction witness") {
    const GridFunction g = sample(kGrid, [](double s) { return std::sin(2 * s); });
    SolverConfig cfg;
    const SolveResult r = solve_picard(linear_coefficients(-0.5, 0.2, 0.4, 0.1), g, Eigen::VectorXd::Constant(1, 0.5), 0.0, 1.0, cfg);
    REQUIRE(r.contraction_ratios.size() >= 2);
    for (std::size_t i = 1; i < r.contraction_ratios.size(); ++i)
        if (std::isfinite(r.contraction_ratios[i])) CHECK(r.contraction_ratios[i] <= 0.75);
}

TEST_CASE("ledger constants") {
    const CoefficientPair c = linear_coefficients(-0.5, 0.2, 0.4, 0.1);
    const double alpha = 0.3, T = 1.0, R = 2.0;
    const EstimateLedger L = compute_ledger(c, alpha, 1.5, T, R);
    CHECK(L.A1 <= 4 + 3 * T);
    CHECK(L.A2 == doctest::Approx(4.0 / (1 - 2 * alpha) * (2.0 / alpha + std::pow(T, alpha))));
    CHECK(L.C0b1 == doctest::Approx(c.L0 * (T + std::pow(T, alpha))));
    CHECK(L.CR1 == doctest::Approx((R + 1 + T) * c.LR(R)));
    CHECK(L.CR3 == doctest::Approx(2 * (1 + R) * c.L0));
    CHECK(L.CRb3 == doctest::Approx(c.LR(R) * (std::pow(T, alpha) + 1 / alpha) * std::pow(T, 1 - 2 * alpha) / (1 - 2 * alpha)));
    CHECK((L.C0b2 + L.Lambda * L.C0s2) / std::pow(L.lambda0, 1 - 2 * alpha) <= 0.5 * (1 + 1e-9));
    CHECK(L.lambda0 >= 1.0);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1), two = Eigen::VectorXd::Constant(1, 2.0);
    CHECK(log_apriori_holder_bound(zero, L) == doctest::Approx(L.log_C0));
    CHECK(log_apriori_holder_bound(two, L) > log_apriori_holder_bound(zero, L));
    CHECK(solve_lambda([](double l) { return 1.0 / l; }) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("operator and auxiliary estimates") {
    std::mt19937_64 eng(21);
    const CoefficientPair lin = linear_coefficients(-0.5, 0.2, 0.4, 0.1);
    const GridFunction f = testing_util::smooth(kGrid, eng), g = testing_util::smooth(kGrid, eng);
    const CheckReport same = verify_operator_estimates(f, f, g, lin, 0.3, 4.0, 0.0, 1.0);
    CHECK(same.pass());
    for (const auto& ch : same.checks)
        if (ch.name == "diffusion-difference" || ch.name == "drift-difference") CHECK(ch.lhs == doctest::Approx(0.0).scale(1.0));
    const GridFunction h = testing_util::smooth(kGrid, eng);
    CHECK(verify_operator_estimates(f, h, g, lin, 0.3, 1.0, 0.0, 1.0).pass());

    const GridFunction c = sample(kGrid, [](double) { return 0.7; });
    const CheckReport aux = verify_aux_estimates(c, lin, g, 0.3, 0.0);
    CHECK(aux.pass());
    for (const auto& ch : aux.checks)
        if (ch.name == "frozen-drift") CHECK(ch.lhs == doctest::Approx(0.0).scale(1.0));
}
