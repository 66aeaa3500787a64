#pragma once

#include "fracvia/coefficients.hpp"
#include "fracvia/frac_calc.hpp"
#include "fracvia/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fracvia {

/// Closed-form constants of the estimate chain, assembled for one driver,
/// one window and one radius budget.
struct EstimateLedger {
    double alpha = 0.0;
    double T = 0.0;
    double Lambda = 0.0;  // Lambda_alpha(g; [t, T])
    double R = 0.0;       // radius used in the C_R constants
    double gamma = 0.0;
    double A1 = 0.0, A2 = 0.0;
    double C0b1 = 0.0, C0b2 = 0.0, CRb3 = 0.0;
    double C0s1 = 0.0, C0s2 = 0.0, CRs3 = 0.0;
    double CR1 = 0.0, CR2 = 0.0, CR3 = 0.0, CR4 = 0.0;
    double B0 = 0.0, D0 = 0.0, G0 = 0.0, G_tilde0 = 0.0;
    double lambda0 = 1.0, lambda_bar = 1.0;
    /// C0 of the a-priori bound; may be +inf, log_C0 is always finite.
    double C0 = 0.0;
    double log_C0 = 0.0;
    /// Coefficient of eps^{1/2-alpha} in the bound on |||xi|||_{alpha,lambda}.
    double C_xi = 0.0;
};

/// Assembles every ledger entry. R is the radius budget for C_R constants
/// and B0 (pass |x0| when no better budget is known).
EstimateLedger compute_ledger(const CoefficientPair& c, double alpha, double Lambda, double T, double R,
                              std::optional<double> gamma = std::nullopt);

/// Smallest lambda >= 1 with f(lambda) <= 1/2 for a decreasing f.
double solve_lambda(const std::function<double(double)>& f);

struct SolverConfig {
    double alpha = 0.3;
    double picard_tol = 1e-10;
    int picard_max_iter = 200;
    std::optional<double> lambda;  // fixed weight; default is lambda0 of the ledger
};

/// r -> b(r, f(r)) and r -> sigma(r, f(r)) (row-major d x k) on f's grid.
GridFunction drift_along(const GridFunction& f, const CoefficientPair& c);
GridFunction sigma_along(const GridFunction& f, const CoefficientPair& c);

/// int_t^s b(r, f(r)) dr by the trapezoid rule.
Eigen::VectorXd drift_operator(const GridFunction& f, const CoefficientPair& c, double t, double s);
/// s -> int_t^s b(r, f(r)) dr at every node s >= t.
Eigen::MatrixXd drift_indefinite(const GridFunction& f, const CoefficientPair& c, std::size_t base);
/// int_t^s sigma(r, f(r)) dg(r).
Eigen::VectorXd diffusion_operator(const GridFunction& f, const GridFunction& g, const CoefficientPair& c,
                                   double alpha, double t, double s);

struct SolveResult {
    GridFunction path;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> history;            // sup-norm change per iteration
    std::vector<double> contraction_ratios;  // weighted-norm ratios of successive changes
    double lambda = 1.0;
    bool stitched = false;
    std::size_t pieces = 1;
    std::vector<std::size_t> piece_starts{0};  // first node of each piece
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), history_(std::move(history)) {}
    const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

/// Picard iteration X <- x0 + F(X) + G(X) on the window [t, T] of g's grid.
/// The returned path lives on the window grid.
SolveResult solve_picard(const CoefficientPair& c, const GridFunction& g, const Eigen::VectorXd& x0, double t, double T,
                         const SolverConfig& config);

/// Euler scheme x_{i+1} = x_i + b dt + sigma (g_{i+1} - g_i) on the window.
GridFunction solve_euler(const CoefficientPair& c, const GridFunction& g, const Eigen::VectorXd& x0, double t,
                         double T);

/// sup_s |X_s - x0 - F(X)(s) - G(X)(s)| on X's grid (g restricted to it).
double integral_residual(const GridFunction& X, const CoefficientPair& c, const GridFunction& g,
                         const Eigen::VectorXd& x0, double alpha);

/// C0 (1 + |x0|); +inf when C0 overflows.
double apriori_holder_bound(const Eigen::VectorXd& x0, const EstimateLedger& ledger);
/// log of the same bound.
double log_apriori_holder_bound(const Eigen::VectorXd& x0, const EstimateLedger& ledger);

/// Holder and weighted-norm bounds of the drift and diffusion operators, and
/// of their differences, on the pair (f, h).
CheckReport verify_operator_estimates(const GridFunction& f, const GridFunction& h, const GridFunction& g,
                                      const CoefficientPair& c, double alpha, double lambda, double t, double T);

/// Frozen-coefficient and increment bounds on sampled triples t <= tau <= s of Y's grid. R defaults to
/// the measured (1 - alpha)-Holder norm of Y.
CheckReport verify_aux_estimates(const GridFunction& Y, const CoefficientPair& c, const GridFunction& g, double alpha,
                                 double t, std::optional<double> R = std::nullopt);

/// Extracts the window [t, T] of g as its own grid function.
GridFunction window(const GridFunction& g, double t, double T);

}  // namespace fracvia
