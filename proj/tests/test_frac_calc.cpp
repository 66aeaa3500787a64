#include <doctest.h>

#include "fracvia/frac_calc.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace fracvia;
using testing_util::sample;

namespace {
const UniformGrid kGrid(0.0, 1.0, 513);
}

TEST_CASE("left derivative of a constant") {
    const double alpha = 0.3;
    const GridFunction f = sample(kGrid, [](double) { return 2.0; });
    const GridFunction D = left_frac_derivative(f, alpha, 0.0);
    CHECK(D.size() == kGrid.n - 1);
    for (std::size_t i : {0, 100, 511}) {
        const double r = D.time(i);
        CHECK(D(i) == doctest::Approx(2.0 / (std::tgamma(1 - alpha) * std::pow(r, alpha))).epsilon(1e-9));
    }
}

TEST_CASE("left derivative of the identity") {
    const double alpha = 0.25;
    const GridFunction f = sample(kGrid, [](double r) { return r; });
    const GridFunction D = left_frac_derivative(f, alpha, 0.0);
    for (std::size_t i : {63, 255, 511})
        CHECK(D(i) == doctest::Approx(std::pow(D.time(i), 1 - alpha) / std::tgamma(2 - alpha)).epsilon(1e-6));
    CHECK(left_frac_derivative(sample(kGrid, [](double) { return 0.0; }), alpha, 0.0).values().norm() == 0.0);
}

TEST_CASE("right derivative closed forms") {
    const double alpha = 0.3;
    CHECK(right_frac_derivative_real(sample(kGrid, [](double) { return 1.5; }), alpha, 1.0).values().norm() == 0.0);
    const GridFunction P = right_frac_derivative_real(sample(kGrid, [](double r) { return r; }), alpha, 1.0);
    for (std::size_t i : {0, 256, 500})
        CHECK(P(i) == doctest::Approx(-std::pow(1.0 - P.time(i), alpha) / std::tgamma(1 + alpha)).epsilon(1e-6));
}

TEST_CASE("integral calibration and linearity") {
    const double alpha = 0.3;
    const GridFunction one = sample(kGrid, [](double) { return 1.0; });
    const GridFunction sq = sample(kGrid, [](double r) { return r * r; });
    CHECK(stieltjes_integral(one, sq, alpha, 0.0, 1.0)(0) == doctest::Approx(1.0).epsilon(10.0 / 513));
    CHECK(stieltjes_integral(sample(kGrid, [](double) { return 0.0; }), sq, alpha, 0.0, 1.0)(0) == 0.0);

    std::mt19937_64 eng(5);
    const GridFunction f = testing_util::smooth(kGrid, eng), h = testing_util::smooth(kGrid, eng),
                       g = testing_util::smooth(kGrid, eng);
    const GridFunction comb(kGrid, 2.0 * f.values() - 3.0 * h.values());
    const double lhs = stieltjes_integral(comb, g, alpha, 0.0, 1.0)(0);
    const double rhs = 2.0 * stieltjes_integral(f, g, alpha, 0.0, 1.0)(0) - 3.0 * stieltjes_integral(h, g, alpha, 0.0, 1.0)(0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("integral agrees with Riemann-Stieltjes sums under refinement") {
    // Oracle: trapezoidal Riemann-Stieltjes sum of cos(x) d(sin(2x)) on a 64x finer grid.
    auto f = [](double x) { return std::cos(x); };
    auto g = [](double x) { return std::sin(2 * x); };
    const int m = 1 << 16;
    double oracle = 0.0;
    for (int i = 0; i < m; ++i) {
        const double a = static_cast<double>(i) / m, b = static_cast<double>(i + 1) / m;
        oracle += 0.5 * (f(a) + f(b)) * (g(b) - g(a));
    }
    double prev = 1.0;
    for (std::size_t n : {129, 257, 513, 1025}) {
        const UniformGrid grid(0.0, 1.0, n);
        const double err = std::abs(stieltjes_integral(sample(grid, f), sample(grid, g), 0.3, 0.0, 1.0)(0) - oracle);
        CHECK(err * static_cast<double>(n - 1) < 5.0);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("integral is additive in the upper limit") {
    std::mt19937_64 eng(9);
    const GridFunction f = testing_util::smooth(kGrid, eng), g = testing_util::smooth(kGrid, eng);
    const double whole = stieltjes_integral(f, g, 0.3, 0.0, 1.0)(0);
    const double parts = stieltjes_integral(f, g, 0.3, 0.0, 0.5)(0) + stieltjes_integral(f, g, 0.3, 0.5, 1.0)(0);
    CHECK(std::abs(whole - parts) < 1e-3 * (1.0 + std::abs(whole)));
    const GridFunction G = stieltjes_indefinite(f, g, 0.3, 0.0);
    CHECK(G(512) == doctest::Approx(whole).epsilon(1e-12));
    CHECK(G(0) == 0.0);
}

TEST_CASE("seminorm closed forms") {
    const GridFunction c = sample(kGrid, [](double) { return -1.5; });
    const GridFunction id = sample(kGrid, [](double s) { return s; });
    CHECK(norm_alpha_infty(c, 0.25, 0.0, 1.0) == doctest::Approx(1.5));
    CHECK(norm_alpha_infty(id, 0.25, 0.0, 1.0) == doctest::Approx(7.0 / 3.0).epsilon(0.01));
    CHECK(norm_alpha_lambda(id, 0.25, 0.0, 0.0, 1.0) == doctest::Approx(norm_alpha_infty(id, 0.25, 0.0, 1.0)));
    CHECK(norm_alpha_lambda(id, 0.25, 3.0, 0.0, 1.0) <= norm_alpha_infty(id, 0.25, 0.0, 1.0));
    CHECK(norm_alpha_lambda(c, 0.25, 3.0, 0.0, 1.0) == doctest::Approx(1.5));
    CHECK_THROWS(norm_alpha_lambda(id, 0.25, -1.0, 0.0, 1.0));
    CHECK(norm_alpha_one(sample(kGrid, [](double) { return 1.0; }), 0.25, 0.0, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(0.01));
    CHECK(norm_alpha_one(sample(kGrid, [](double) { return 0.0; }), 0.25, 0.0, 1.0) == 0.0);
    CHECK(holder_norm(c, 0.5, 0.0, 1.0) == doctest::Approx(1.5));
    CHECK(holder_norm(id, 1.0, 0.0, 1.0) == doctest::Approx(2.0));
    CHECK(holder_norm(sample(kGrid, [](double s) { return std::sqrt(s); }), 0.5, 0.0, 1.0) == doctest::Approx(2.0));
    CHECK(delta_seminorm(c, 0.25, 0.5, 0.0, 1.0) == 0.0);
    CHECK(delta_seminorm(id, 0.25, 0.5, 0.0, 1.0) == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("refinement of the alpha-infinity norm") {
    auto f = [](double s) { return std::pow(s, 0.9); };
    const double coarse = norm_alpha_infty(sample(UniformGrid(0.0, 1.0, 257), f), 0.3, 0.0, 1.0);
    const double fine = norm_alpha_infty(sample(UniformGrid(0.0, 1.0, 513), f), 0.3, 0.0, 1.0);
    CHECK(std::abs(fine / coarse - 1.0) < 0.02);
}

TEST_CASE("embedding of W^{alpha,infty} into W^{alpha,1}") {
    std::mt19937_64 eng(2);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 10; ++i) {
        const double a = nd(eng), b = nd(eng), c = nd(eng);
        const GridFunction p = sample(kGrid, [&](double s) { return a + b * s + c * s * s * s; });
        const double alpha = 0.3;
        CHECK(norm_alpha_one(p, alpha, 0.0, 1.0) <= (1.0 + 1.0 / (1.0 - alpha)) * norm_alpha_infty(p, alpha, 0.0, 1.0));
    }
}

TEST_CASE("Lambda_alpha closed form, constants and window monotonicity") {
    const GridFunction id = sample(UniformGrid(0.0, 1.0, 1024), [](double s) { return s; });
    for (double a : {0.1, 0.25, 0.4})
        CHECK(lambda_alpha(id, a, 0.0, 1.0) == doctest::Approx(1.0 / (std::tgamma(1 + a) * std::tgamma(1 - a))).epsilon(0.02));
    CHECK(lambda_alpha(sample(kGrid, [](double) { return 4.0; }), 0.3, 0.0, 1.0) == 0.0);
    CHECK_THROWS(lambda_alpha(sample(UniformGrid(0.0, 1.0, 3), [](double s) { return s; }), 0.3, 0.0, 1.0));
    std::mt19937_64 eng(4);
    for (int i = 0; i < 5; ++i) {
        const GridFunction g = testing_util::smooth(kGrid, eng);
        CHECK(lambda_alpha(g, 0.3, 0.5, 1.0) <= lambda_alpha(g, 0.3, 0.0, 1.0) + 1e-12);
        const DriverKernel K(g, 0.3);
        CHECK(K.lambda(0, 512) == doctest::Approx(lambda_alpha(g, 0.3, 0.0, 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("right derivative is bounded by Lambda") {
    std::mt19937_64 eng(8);
    const GridFunction g = testing_util::smooth(kGrid, eng);
    const double L = lambda_alpha(g, 0.3, 0.0, 1.0);
    const GridFunction P = right_frac_derivative_real(g, 0.3, 1.0);
    CHECK(P.values().cwiseAbs().maxCoeff() <= std::tgamma(0.7) * L * (1 + 1e-12));
}

TEST_CASE("bound checks") {
    const GridFunction zero = sample(kGrid, [](double) { return 0.0; });
    const GridFunction one = sample(kGrid, [](double) { return 1.0; });
    const GridFunction id = sample(kGrid, [](double s) { return s; });
    CHECK(verify_integral_bound(zero, id, 0.25, 0.0, 1.0).pass());
    const CheckReport r = verify_integral_bound(one, id, 0.25, 0.0, 1.0);
    REQUIRE(r.checks.size() == 1);
    CHECK(r.checks[0].name == "integral-bound");
    CHECK(r.checks[0].lhs == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.checks[0].rhs == doctest::Approx((4.0 / 3.0) / (std::tgamma(1.25) * std::tgamma(0.75))).epsilon(0.02));
    CHECK(r.pass());
    CHECK(verify_norm_bounds(zero, id, 0.3, 4.0, 0.0, 1.0).pass());
    CHECK_THROWS(verify_norm_bounds(one, id, 0.3, 0.5, 0.0, 1.0));
    CHECK(constant_A1(0.3, 1.0) <= 7.0);
    CHECK(constant_A2(0.25, 1.0) == doctest::Approx(4.0 / 0.5 * (8.0 + 1.0)));
}

TEST_CASE("weighted bound decays with lambda") {
    std::mt19937_64 eng(12);
    const GridFunction f = testing_util::smooth(kGrid, eng), g = testing_util::smooth(kGrid, eng);
    const double alpha = 0.3;
    const GridFunction G = stieltjes_indefinite(f, g, alpha, 0.0);
    double prev_ratio = 1e300;
    for (double lambda : {1.0, 4.0, 16.0, 64.0}) {
        const double ratio = norm_alpha_lambda(G, alpha, lambda, 0.0, 1.0) / norm_alpha_lambda(f, alpha, lambda, 0.0, 1.0);
        const double envelope = lambda_alpha(g, alpha, 0.0, 1.0) * constant_A2(alpha, 1.0) / std::pow(lambda, 1 - 2 * alpha);
        CHECK(ratio <= envelope);
        CHECK(ratio <= prev_ratio * 1.05);
        prev_ratio = ratio;
    }
}

TEST_CASE("alpha outside (0, 1/2) is rejected") {
    const GridFunction id = sample(kGrid, [](double s) { return s; });
    CHECK_THROWS(stieltjes_integral(id, id, 0.5, 0.0, 1.0));
    CHECK_THROWS(stieltjes_integral(id, id, 0.0, 0.0, 1.0));
    CHECK_THROWS_AS(stieltjes_integral(id, sample(UniformGrid(0.0, 1.0, 257), [](double s) { return s; }), 0.3, 0.0, 1.0),
                    GridError);
}
