#include "fracvia/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracvia {

namespace {
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
}

double gamma_fn(double x) {
    if (!std::isfinite(x)) throw std::domain_error("gamma_fn: non-finite argument");
    if (x <= 0 && x == std::floor(x)) throw std::domain_error("gamma_fn: pole");
    if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    const double z = x - 1.0;
    double a = kLanczos[0];
    const double t = z + 7.5;
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i);
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double beta_fn(double a, double b) { return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b); }

}  // namespace fracvia
