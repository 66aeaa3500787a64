#pragma once

namespace fracvia {

/// Euler Gamma function, Lanczos approximation (g = 7, 9 terms) with
/// reflection for x < 1/2. Relative error below 1e-13 on (0, 2).
double gamma_fn(double x);

/// Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
double beta_fn(double a, double b);

}  // namespace fracvia
