#include <doctest.h>

#include "fracvia/special.hpp"

#include <cmath>
#include <numbers>

using namespace fracvia;

TEST_CASE("gamma matches the standard library on a sweep") {
    for (double x = 0.05; x < 6.0; x += 0.0731) CHECK(gamma_fn(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-12));
}

TEST_CASE("gamma at one half is sqrt(pi)") { CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13)); }

TEST_CASE("beta from its integral") {
    // B(a, b) by midpoint rule on a smooth integrand (a, b >= 1).
    const double a = 1.7, b = 2.3;
    const int m = 200000;
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
        const double x = (i + 0.5) / m;
        s += std::pow(x, a - 1) * std::pow(1 - x, b - 1);
    }
    CHECK(beta_fn(a, b) == doctest::Approx(s / m).epsilon(1e-8));
    CHECK(beta_fn(2.0, 3.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
}
