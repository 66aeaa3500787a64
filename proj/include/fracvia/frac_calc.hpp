#pragma once

#include "fracvia/grid.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fracvia {

/// Product-integration weights for int_0^{J} phi(v) v^{-p} dv with phi
/// piecewise linear on unit cells. a[k], b[k] are the weights of phi_k and
/// phi_{k+1} on cell [k, k+1] (k >= 1); first_cell is the weight of phi_1 on
/// [0, 1] under the ansatz phi(v) = phi_1 v^{first_power}.
struct PowerWeights {
    double p = 0.0;
    double first_power = 1.0;
    double first_cell = 0.0;
    std::vector<double> a;
    std::vector<double> b;

    PowerWeights() = default;
    PowerWeights(double p, std::size_t cells, double first_power = 1.0);

    /// Sum over cells 0..J-1, phi(0) = 0 assumed; phi[k] is indexed from 0.
    template <class Phi>
    double integrate(std::size_t J, Phi&& phi) const {
        if (J == 0) return 0.0;
        double acc = first_cell * phi(1);
        for (std::size_t k = 1; k < J; ++k) acc += a[k] * phi(k) + b[k] * phi(k + 1);
        return acc;
    }
};

/// Singular-weight tables shared by all kernels for a given (n, alpha).
/// Immutable after construction.
struct KernelWeights {
    double alpha = 0.0;
    std::size_t n = 0;
    PowerWeights left;   // exponent alpha + 1, linear first cell
    PowerWeights right;  // exponent 2 - alpha, linear first cell
    PowerWeights base;   // exponent alpha, hat weights for (r - t)^{-alpha}
    double gamma_alpha = 0.0;
    double gamma_one_minus_alpha = 0.0;
    double beta_first = 0.0;   // B(1 - alpha, 1 + alpha)
    double beta_second = 0.0;  // B(2 - alpha, 1 + alpha)

    KernelWeights(double alpha, std::size_t n);
    static std::shared_ptr<const KernelWeights> get(double alpha, std::size_t n);
};

void check_alpha(double alpha);

/// r -> (r - base)^alpha (D^alpha_{base+} f)(r) at nodes base..end. Multiplying
/// out the singular factor keeps the values bounded; entry 0 is f(base)/Gamma(1-alpha).
Eigen::MatrixXd scaled_left_derivative(const GridFunction& f, const KernelWeights& w, std::size_t base);

/// Row i of the scaled left derivative from values F (rows are nodes).
Eigen::RowVectorXd scaled_left_row(const Eigen::MatrixXd& F, const KernelWeights& w, std::size_t base, std::size_t i);

/// D^alpha_{base+} f at nodes strictly after base.
GridFunction left_frac_derivative(const GridFunction& f, double alpha, double base);

/// Real form of D^{1-alpha}_{endpoint-} g at nodes strictly before endpoint.
GridFunction right_frac_derivative_real(const GridFunction& g, double alpha, double endpoint);

/// Psi_s(r) for all node pairs r < s of a driver g. Table is lower
/// triangular, row s holds r = 0..s-1, channels innermost.
class DriverKernel {
public:
    DriverKernel(const GridFunction& g, double alpha);

    const GridFunction& driver() const { return g_; }
    double alpha() const { return w_->alpha; }
    const KernelWeights& weights() const { return *w_; }
    std::size_t channels() const { return g_.dim(); }

    const double* psi_row(std::size_t s) const { return table_.data() + (s * (s - 1) / 2) * channels(); }
    double psi(std::size_t s, std::size_t r, std::size_t c) const { return psi_row(s)[r * channels() + c]; }

    /// G(s) = int_{t_base}^{t_s} f dg for every node s >= base. f has
    /// dimension d*k (row-major d x k) and the result dimension d.
    Eigen::MatrixXd indefinite(const GridFunction& f, std::size_t base) const;

    /// Same with the scaled left derivative already computed.
    Eigen::MatrixXd indefinite_from_scaled(const Eigen::MatrixXd& E, std::size_t base) const;

    /// G(s) for a single node s > base from scaled derivative rows base..s.
    Eigen::VectorXd value_at(const Eigen::MatrixXd& E, std::size_t base, std::size_t s) const;

    double lambda(std::size_t i0, std::size_t i1) const;

private:
    GridFunction g_;
    std::shared_ptr<const KernelWeights> w_;
    std::vector<double> table_;
};

/// int_t^s f dg in the real composition -int (D^alpha_{t+} f) Psi dr.
Eigen::VectorXd stieltjes_integral(const GridFunction& f, const GridFunction& g, double alpha, double t, double s);

/// s -> int_t^s f dg at every node s >= t (zero at s = t).
GridFunction stieltjes_indefinite(const GridFunction& f, const GridFunction& g, double alpha, double t);

double sup_norm(const GridFunction& f, double t, double T);
double norm_alpha_infty(const GridFunction& f, double alpha, double t, double T);
double norm_alpha_lambda(const GridFunction& f, double alpha, double lambda, double t, double T);
/// log of norm_alpha_lambda, safe when e^{-lambda s} underflows; -inf for f = 0.
double log_norm_alpha_lambda(const GridFunction& f, double alpha, double lambda, double t, double T);
double norm_alpha_one(const GridFunction& f, double alpha, double t, double T);
double holder_constant(const GridFunction& f, double mu, double t, double T);
double holder_norm(const GridFunction& f, double mu, double t, double T);
double lambda_alpha(const GridFunction& g, double alpha, double t, double T);
double delta_seminorm(const GridFunction& f, double alpha, double delta, double t, double T);
/// Norm of g in the space W~^{1-alpha, infinity}.
double norm_wtilde(const GridFunction& g, double alpha, double t, double T);

struct NormReport {
    double norm_alpha_infty = 0.0;
    double norm_alpha_lambda = 0.0;
    double norm_alpha_one = 0.0;
    double holder_norm = 0.0;
    double lambda_alpha = 0.0;
    double delta_seminorm = 0.0;
    double sup_norm = 0.0;
};

/// lambda_alpha entry is computed only when g is given.
NormReport norm_report(const GridFunction& f, const GridFunction* g, double alpha, double lambda, double mu,
                       double delta, double t, double T);

struct Check {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;
    bool pass = false;
};

struct CheckReport {
    std::vector<Check> checks;
    bool pass() const;
    void add(std::string name, double lhs, double rhs, double constant, double rel_tol, double abs_tol = 1e-12);
};

/// Relative slack granted to discrete inequality checks on top of 1e-6.
inline constexpr double kQuadratureSlack = 1e-3;

double constant_A1(double alpha, double T);
double constant_A2(double alpha, double T);

CheckReport verify_integral_bound(const GridFunction& f, const GridFunction& g, double alpha, double t, double T);
CheckReport verify_norm_bounds(const GridFunction& f, const GridFunction& g, double alpha, double lambda, double t,
                                double T);

}  // namespace fracvia
