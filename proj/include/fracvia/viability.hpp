#pragma once

#include "fracvia/fsde.hpp"
#include "fracvia/tube.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fracvia {

struct ContingencyCertificate {
    double t = 0.0;
    Eigen::VectorXd x;
    double h_bar = 0.0;
    GridFunction Q;
    double gamma = 0.0;
    double G_R = 0.0;
    double G_tilde_R = 0.0;
    double budget = 0.0;
    bool holds = false;
    double worst_margin = 0.0;  // budget - G_tilde_R
    /// Nodes after t (1-based) at which |Q| first exceeds budget (s-t)^{1+gamma}; 0 if none.
    std::size_t first_violation = 0;
    /// Least-squares slope of log|Q| against log(s-t) over the first ten nodes; NaN if undetermined.
    double growth_exponent = std::numeric_limits<double>::quiet_NaN();
};

struct TangencyCertificate {
    double t = 0.0;
    Eigen::VectorXd x;
    double h_bar = 0.0;
    GridFunction U;
    GridFunction V;
    double D_R = 0.0;
    double D_tilde_R = 0.0;
    double max_signed_distance = 0.0;
    bool holds = false;
};

/// Q(s) = proj_{K(s)}(P(s)) - P(s) for the frozen-coefficient predictor P on
/// the nodes of [t, t + h_bar]. holds iff the measured G~_R <= budget.
ContingencyCertificate contingency_check(double t, const Eigen::VectorXd& x, const CoefficientPair& c,
                                         const GridFunction& g, const ConstraintTube& tube, double h_bar, double alpha,
                                         double gamma, double budget);

/// U(r) = b(r, Y_r) - b(t, x), V(r) = sigma(r, Y_r) - sigma(t, x) from a local
/// viable path Y sharing g's grid, measured on [t, t + h_bar].
TangencyCertificate tangency_check(double t, const GridFunction& Y, const CoefficientPair& c, const GridFunction& g,
                                   const ConstraintTube& tube, double h_bar, double alpha, double tol = 1e-6);

/// xi(s) = X_s - x0 - int_t^s b(r, X_r) dr - int_t^s sigma(r, X_r) dg(r) on [t, end of X].
GridFunction error_function(const GridFunction& X, const CoefficientPair& c, const GridFunction& g,
                            const Eigen::VectorXd& x0, double alpha, double t);

/// Largest h = 2^{-j} horizon with CR1 h^{1-alpha} + CR2 h^{min(beta-alpha,1-2alpha)} + G~ h^gamma <= eps.
double select_step(double epsilon, const EstimateLedger& ledger, double alpha, double beta, double gamma,
                   double horizon, double g_tilde);

struct ViabilityConfig {
    double alpha = 0.3;
    std::optional<double> gamma;
    /// Radius budget; default |x0| + 1 + 2 ||X_ref||_{1-alpha} for the unconstrained Euler path X_ref.
    std::optional<double> B0;
    std::size_t max_steps = 1000000;
};

struct Violation {
    double time = 0.0;
    Eigen::VectorXd point;
    double q_growth_exponent = std::numeric_limits<double>::quiet_NaN();
    double G_tilde_measured = 0.0;
    double budget = 0.0;
};

struct CertificateSummary {
    double t = 0.0;
    double h_bar = 0.0;
    double G_R = 0.0;
    double G_tilde_R = 0.0;
    bool holds = false;
    std::size_t accepted_nodes = 0;
};

struct ApproximateSolution {
    double epsilon = 0.0;
    GridFunction X;   // on [t, reached]
    GridFunction xi;  // same grid as X
    double B0 = 0.0;
    double B0_measured = 0.0;
    double D0 = 0.0;
    double D0_measured = 0.0;
    bool viable = false;  // reached T without a violation
    std::vector<Violation> violations;
    std::vector<CertificateSummary> certificates;
    std::size_t steps = 0;
    std::size_t partial_accepts = 0;
    std::size_t halvings = 0;
    EstimateLedger ledger;
    /// Invariant checks on every node (pair): |xi| <= eps (s-t), membership, B0 budget.
    bool xi_bound_ok = false;
    bool membership_ok = false;
    bool budget_ok = false;
    double max_xi_ratio = 0.0;  // max |xi(s)| / (eps (s-t))
};

class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds an eps-approximate viable solution on [t, end of g's grid] by the
/// extension step of the proof, iterated until the end or a violation.
ApproximateSolution build_viable_solution(double t, const Eigen::VectorXd& x0, const CoefficientPair& c,
                                          const GridFunction& g, const ConstraintTube& tube, double epsilon,
                                          const ViabilityConfig& config);

struct RefineReport {
    std::vector<double> eps;
    std::vector<ApproximateSolution> builds;
    std::vector<double> distances;  // sup |X^{eps_i} - X^{eps_{i+1}}|
    std::vector<double> bounds;     // 2 C e^{lambda_bar T}(eps^{1/2-a} + eta^{1/2-a}); may be inf
    double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    double target_exponent = 0.0;  // 1/2 - alpha
    bool monotone = true;
    GridFunction finest;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, RefineReport report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const RefineReport& report() const { return report_; }

private:
    RefineReport report_;
};

RefineReport refine_to_limit(double t, const Eigen::VectorXd& x0, const CoefficientPair& c, const GridFunction& g,
                             const ConstraintTube& tube, const std::vector<double>& eps_sequence,
                             const ViabilityConfig& config);

struct InvarianceReport {
    bool pass = true;
    std::size_t nodes = 0;
    std::size_t first_exit = 0;  // node index, meaningful only when pass is false
    double max_signed_distance = -std::numeric_limits<double>::infinity();
};

InvarianceReport invariance_sweep(const GridFunction& X, const ConstraintTube& tube);

}  // namespace fracvia
