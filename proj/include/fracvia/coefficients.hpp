#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace fracvia {

using DriftFn = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
using DiffusionFn = std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)>;
/// Returns d matrices of size d x k; entry l is the partial derivative in x_l.
using GradientFn = std::function<std::vector<Eigen::MatrixXd>(double, const Eigen::VectorXd&)>;
using RadiusFn = std::function<double(double)>;

/// Drift b, diffusion sigma and their regularity constants.
struct CoefficientPair {
    std::string name;
    std::size_t d = 1;
    std::size_t k = 1;
    DriftFn drift;
    DiffusionFn diffusion;
    GradientFn gradient;  // empty means central finite differences
    double M0 = 0.0;
    double L0 = 0.0;
    RadiusFn MR;
    RadiusFn LR;
    double beta = 1.0;
    double delta = 1.0;
    double mu = 1.0;
    std::map<std::string, double> params;

    Eigen::VectorXd b(double t, const Eigen::VectorXd& x) const;
    Eigen::MatrixXd sigma(double t, const Eigen::VectorXd& x) const;
    std::vector<Eigen::MatrixXd> grad_sigma(double t, const Eigen::VectorXd& x) const;

    /// |sigma(0,0)| + M0 + M0 T.
    double M0T(double T) const;
    double alpha0() const;
    void validate() const;
};

/// b = a x + c, sigma = diag(s x + s0) componentwise in dimension d (k = d).
CoefficientPair linear_coefficients(double a, double c, double s, double s0, std::size_t d = 1);
/// b = a x + c, sigma = amp sin(x), scalar.
CoefficientPair sin_coefficients(double a, double c, double amp);
/// b = -kappa x, sigma = s0 (1 - x^2/rho^2) inside the ball, extended linearly
/// with matching slope outside; scalar. Diffusion vanishes on |x| = rho.
CoefficientPair ball_control_coefficients(double kappa, double s0, double rho);
/// b = -kappa x, sigma = s1 constant; scalar.
CoefficientPair constant_noise_coefficients(double kappa, double s1);
/// b = 0, sigma = 0 in dimension d with k channels.
CoefficientPair zero_coefficients(std::size_t d = 1, std::size_t k = 1);

/// Builds a builtin by name: linear, sin, ball-control, constant-noise, none.
/// Missing parameters take the defaults listed in builtin_defaults(name).
CoefficientPair make_coefficients(const std::string& name, const std::map<std::string, double>& params = {});
std::map<std::string, double> builtin_defaults(const std::string& name);
std::vector<std::string> builtin_names();

struct AssumptionGate {
    std::string name;
    double margin = 0.0;  // positive when satisfied
    bool pass = false;
};

struct AssumptionReport {
    std::vector<AssumptionGate> gates;
    bool pass = true;
    std::string tightest_violation;
    double tightest_margin = 0.0;
};

/// Exponent gates plus lattice checks of the regularity hypotheses with the
/// declared constants on [0, T] x [-radius, radius]^d.
AssumptionReport check_assumptions(const CoefficientPair& c, double alpha, double hurst, double T = 1.0,
                                   double radius = 4.0, int lattice = 9);

}  // namespace fracvia
