#include "fracvia/frac_calc.hpp"

#include "fracvia/parallel.hpp"
#include "fracvia/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fracvia {

namespace {

// 8-point Gauss-Legendre nodes and weights on [0, 1].
constexpr std::array<double, 8> kGlX = {0.01985507175123188, 0.10166676129318664, 0.2372337950418355,
                                        0.4082826787521751,  0.5917173212478249,  0.7627662049581645,
                                        0.8983332387068134,  0.9801449282487681};
constexpr std::array<double, 8> kGlW = {0.05061426814518813, 0.11119051722668724, 0.15685332293894363,
                                        0.18134189168918100, 0.18134189168918100, 0.15685332293894363,
                                        0.11119051722668724, 0.05061426814518813};

void cell_weights(double p, std::size_t k, double& a, double& b) {
    const double kd = static_cast<double>(k);
    if (k < 8) {
        const double k1 = kd + 1.0;
        const double j0 = (std::abs(p - 1.0) < 1e-14) ? std::log(k1 / kd) : (std::pow(k1, 1.0 - p) - std::pow(kd, 1.0 - p)) / (1.0 - p);
        const double j1 = (std::abs(p - 2.0) < 1e-14) ? std::log(k1 / kd) : (std::pow(k1, 2.0 - p) - std::pow(kd, 2.0 - p)) / (2.0 - p);
        a = k1 * j0 - j1;
        b = j1 - kd * j0;
        return;
    }
    a = 0.0;
    b = 0.0;
    for (std::size_t q = 0; q < kGlX.size(); ++q) {
        const double w = kGlX[q];
        const double v = kGlW[q] * std::pow(kd + w, -p);
        a += (1.0 - w) * v;
        b += w * v;
    }
}

double row_norm(const Eigen::MatrixXd& m, Eigen::Index i) { return m.row(i).norm(); }

double row_diff_norm(const Eigen::MatrixXd& m, Eigen::Index i, Eigen::Index j) { return (m.row(i) - m.row(j)).norm(); }

struct Window {
    std::size_t a;
    std::size_t b;
};

Window window_of(const GridFunction& f, double t, double T) {
    if (!(t < T)) throw std::invalid_argument("window requires t < T");
    Window w{f.grid().index_of(t), f.grid().index_of(T)};
    return w;
}

/// Walks all pairs r < s in [i0, i1] and hands the real right derivative
/// Psi_s(r) (one value per channel) to visit(r, s, psi). With absolute = true
/// the increments are replaced by their norms and the visitor receives the
/// two nonnegative terms of the W~ norm instead.
/// Psi_s(r) for the single node r and every s in (r, i1].
template <class Visit>
void walk_from(const GridFunction& g, const KernelWeights& w, const std::vector<double>& powJ, std::size_t r,
               std::size_t i1, std::vector<double>& S, std::vector<double>& psi, Visit&& visit) {
    const std::size_t k = g.dim();
    const double alpha = w.alpha;
    const double scale = std::pow(g.step(), alpha - 1.0) / w.gamma_alpha;
    const auto& G = g.values();
    std::fill(S.begin(), S.end(), 0.0);
    for (std::size_t J = 1; r + J <= i1; ++J) {
        const std::size_t s = r + J;
        for (std::size_t c = 0; c < k; ++c) {
            const double phiJ = G(r, c) - G(s, c);
            if (J == 1) {
                S[c] = w.right.first_cell * phiJ;
            } else {
                const double phiPrev = G(r, c) - G(s - 1, c);
                S[c] += w.right.a[J - 1] * phiPrev + w.right.b[J - 1] * phiJ;
            }
            psi[c] = scale * (phiJ * powJ[J] + (1.0 - alpha) * S[c]);
        }
        visit(r, s, psi);
    }
}

std::vector<double> power_table(double p, std::size_t n) {
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t J = 1; J <= n; ++J) out[J] = std::pow(static_cast<double>(J), p);
    return out;
}

template <class Visit>
void walk_right_derivative(const GridFunction& g, const KernelWeights& w, std::size_t i0, std::size_t i1,
                           Visit&& visit) {
    const std::size_t k = g.dim();
    const std::vector<double> powJ = power_table(w.alpha - 1.0, i1 - i0);
    std::vector<double> S(k), psi(k);
    for (std::size_t r = i0; r < i1; ++r) walk_from(g, w, powJ, r, i1, S, psi, visit);
}

Eigen::VectorXd contract(const Eigen::MatrixXd& E, Eigen::Index row, const double* psi, std::size_t k, std::size_t d) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < k; ++c) acc += E(row, static_cast<Eigen::Index>(i * k + c)) * psi[c];
        out(static_cast<Eigen::Index>(i)) = acc;
    }
    return out;
}

/// Quadrature of -int_t^s (D f)(r) Psi_s(r) dr over j = s - base cells.
/// psi(m) returns a pointer to Psi_s at node base + m (channels innermost).
template <class PsiAt>
Eigen::VectorXd compose(const Eigen::MatrixXd& E, const KernelWeights& w, double h, std::size_t j, std::size_t k,
                        std::size_t d, PsiAt&& psi) {
    const double alpha = w.alpha;
    const double hw = std::pow(h, 1.0 - alpha);
    if (j == 1) {
        const Eigen::VectorXd p0 = contract(E, 0, psi(0), k, d);
        const Eigen::VectorXd p1 = contract(E, 1, psi(0), k, d);
        return -hw * (w.beta_first * p0 + w.beta_second * (p1 - p0));
    }
    Eigen::VectorXd acc = w.base.a[0] * contract(E, 0, psi(0), k, d);
    Eigen::VectorXd prev = contract(E, 1, psi(1), k, d);
    acc += w.base.b[0] * prev;
    for (std::size_t m = 1; m + 1 < j; ++m) {
        const Eigen::VectorXd next = contract(E, static_cast<Eigen::Index>(m + 1), psi(m + 1), k, d);
        acc += w.base.a[m] * prev + w.base.b[m] * next;
        prev = next;
    }
    acc *= hw;
    const auto jm1 = static_cast<Eigen::Index>(j - 1);
    const auto jj = static_cast<Eigen::Index>(j);
    const double dm1 = std::pow(static_cast<double>(j - 1) * h, -alpha);
    const double dj = std::pow(static_cast<double>(j) * h, -alpha);
    const Eigen::VectorXd last_prev = contract(E, jm1, psi(j - 1), k, d) * dm1;
    const Eigen::VectorXd last_end = contract(E, jj, psi(j - 1), k, d) * dj;
    acc += h * (last_prev / (2.0 + alpha) + last_end * (1.0 / (1.0 + alpha) - 1.0 / (2.0 + alpha)));
    return -acc;
}

std::size_t result_dim(const GridFunction& f, const GridFunction& g) {
    if (g.dim() == 0 || f.dim() % g.dim() != 0)
        throw std::invalid_argument("integrand dimension must be a multiple of the driver dimension");
    return f.dim() / g.dim();
}

}  // namespace

PowerWeights::PowerWeights(double p_, std::size_t cells, double first_power_)
    : p(p_), first_power(first_power_), a(cells + 1, 0.0), b(cells + 1, 0.0) {
    if (!(first_power - p + 1.0 > 0)) throw std::domain_error("first cell weight is not integrable");
    first_cell = 1.0 / (first_power - p + 1.0);
    if (p < 1.0) {
        a[0] = 1.0 / (1.0 - p) - 1.0 / (2.0 - p);
        b[0] = 1.0 / (2.0 - p);
    }
    for (std::size_t k = 1; k <= cells; ++k) cell_weights(p, k, a[k], b[k]);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::domain_error("alpha must lie in (0, 1/2)");
}

KernelWeights::KernelWeights(double alpha_, std::size_t n_)
    : alpha(alpha_),
      n(n_),
      left(alpha_ + 1.0, n_),
      right(2.0 - alpha_, n_),
      base(alpha_, n_),
      gamma_alpha(gamma_fn(alpha_)),
      gamma_one_minus_alpha(gamma_fn(1.0 - alpha_)),
      beta_first(beta_fn(1.0 - alpha_, 1.0 + alpha_)),
      beta_second(beta_fn(2.0 - alpha_, 1.0 + alpha_)) {
    check_alpha(alpha_);
}

std::shared_ptr<const KernelWeights> KernelWeights::get(double alpha, std::size_t n) {
    static std::mutex mutex;
    static std::map<std::pair<double, std::size_t>, std::shared_ptr<const KernelWeights>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(alpha, n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    if (cache.size() > 64) cache.clear();
    auto w = std::make_shared<const KernelWeights>(alpha, n);
    cache.emplace(key, w);
    return w;
}

Eigen::RowVectorXd scaled_left_row(const Eigen::MatrixXd& F, const KernelWeights& w, std::size_t base, std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double inv_gamma = 1.0 / w.gamma_one_minus_alpha;
    if (i == base) return F.row(ii) * inv_gamma;
    const std::size_t j = i - base;
    const double pj = std::pow(static_cast<double>(j), w.alpha);
    Eigen::RowVectorXd out(F.cols());
    for (Eigen::Index c = 0; c < F.cols(); ++c) {
        const double fi = F(ii, c);
        const double L = w.left.integrate(j, [&](std::size_t kk) { return fi - F(ii - static_cast<Eigen::Index>(kk), c); });
        out(c) = inv_gamma * (fi + w.alpha * pj * L);
    }
    return out;
}

Eigen::MatrixXd scaled_left_derivative(const GridFunction& f, const KernelWeights& w, std::size_t base) {
    const std::size_t n = f.size();
    if (base >= n) throw std::invalid_argument("base outside grid");
    const std::size_t m = n - base;
    Eigen::MatrixXd E(static_cast<Eigen::Index>(m), f.values().cols());
    parallel_for(m, [&](std::size_t j) { E.row(static_cast<Eigen::Index>(j)) = scaled_left_row(f.values(), w, base, base + j); });
    return E;
}

GridFunction left_frac_derivative(const GridFunction& f, double alpha, double base) {
    check_alpha(alpha);
    const std::size_t a = f.grid().index_of(base);
    if (a + 2 >= f.size()) throw std::invalid_argument("need at least two nodes after base");
    const auto w = KernelWeights::get(alpha, f.size());
    const Eigen::MatrixXd E = scaled_left_derivative(f, *w, a);
    const std::size_t m = f.size() - a - 1;
    Eigen::MatrixXd D(static_cast<Eigen::Index>(m), E.cols());
    const double h = f.step();
    for (std::size_t j = 1; j <= m; ++j)
        D.row(static_cast<Eigen::Index>(j - 1)) =
            E.row(static_cast<Eigen::Index>(j)) * std::pow(static_cast<double>(j) * h, -alpha);
    if (!D.allFinite()) throw std::runtime_error("left_frac_derivative: non-finite result");
    return GridFunction(UniformGrid(f.time(a + 1), f.grid().t1, m), D);
}

GridFunction right_frac_derivative_real(const GridFunction& g, double alpha, double endpoint) {
    check_alpha(alpha);
    const std::size_t s = g.grid().index_of(endpoint);
    if (s < 2) throw std::invalid_argument("need at least two nodes before the endpoint");
    const auto w = KernelWeights::get(alpha, g.size());
    Eigen::MatrixXd P(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(g.dim()));
    walk_right_derivative(g, *w, 0, s, [&](std::size_t r, std::size_t ss, const std::vector<double>& psi) {
        if (ss != s) return;
        for (std::size_t c = 0; c < psi.size(); ++c) P(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = psi[c];
    });
    if (!P.allFinite()) throw std::runtime_error("right_frac_derivative_real: non-finite result");
    return GridFunction(UniformGrid(g.grid().t0, g.time(s - 1), s), P);
}

DriverKernel::DriverKernel(const GridFunction& g, double alpha) : g_(g), w_(KernelWeights::get(alpha, g.size())) {
    if (g.size() > 8193) throw std::invalid_argument("DriverKernel table limited to n <= 8193");
    const std::size_t n = g.size();
    const std::size_t k = g.dim();
    table_.assign(n * (n - 1) / 2 * k, 0.0);
    const std::vector<double> powJ = power_table(w_->alpha - 1.0, n);
    // each r owns column r of the table, so rows are filled without races
    parallel_for(n - 1, [&](std::size_t r) {
        std::vector<double> S(k), psi(k);
        walk_from(g_, *w_, powJ, r, n - 1, S, psi, [&](std::size_t, std::size_t s, const std::vector<double>& p) {
            double* dst = table_.data() + (s * (s - 1) / 2 + r) * k;
            std::memcpy(dst, p.data(), k * sizeof(double));
        });
    });
}

Eigen::MatrixXd DriverKernel::indefinite_from_scaled(const Eigen::MatrixXd& E, std::size_t base) const {
    const std::size_t n = g_.size();
    const std::size_t k = channels();
    const std::size_t d = static_cast<std::size_t>(E.cols()) / k;
    const double h = g_.step();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n - base), static_cast<Eigen::Index>(d));
    parallel_for(n - base - 1, [&](std::size_t jm) {
        const std::size_t j = jm + 1;
        const double* row = psi_row(base + j);
        out.row(static_cast<Eigen::Index>(j)) =
            compose(E, *w_, h, j, k, d, [&](std::size_t m) { return row + (base + m) * k; }).transpose();
    });
    return out;
}

Eigen::VectorXd DriverKernel::value_at(const Eigen::MatrixXd& E, std::size_t base, std::size_t s) const {
    const std::size_t k = channels();
    const std::size_t d = static_cast<std::size_t>(E.cols()) / k;
    if (s <= base) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    if (s >= g_.size() || static_cast<std::size_t>(E.rows()) < s - base + 1)
        throw std::invalid_argument("value_at: node outside the available rows");
    const double* row = psi_row(s);
    return compose(E, *w_, g_.step(), s - base, k, d, [&](std::size_t m) { return row + (base + m) * k; });
}

Eigen::MatrixXd DriverKernel::indefinite(const GridFunction& f, std::size_t base) const {
    require_same_grid(f, g_);
    result_dim(f, g_);
    return indefinite_from_scaled(scaled_left_derivative(f, *w_, base), base);
}

double DriverKernel::lambda(std::size_t i0, std::size_t i1) const {
    const std::size_t k = channels();
    double best = 0.0;
    for (std::size_t s = i0 + 1; s <= i1; ++s) {
        const double* row = psi_row(s);
        for (std::size_t r = i0; r < s; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < k; ++c) acc += row[r * k + c] * row[r * k + c];
            best = std::max(best, acc);
        }
    }
    return std::sqrt(best) / w_->gamma_one_minus_alpha;
}

Eigen::VectorXd stieltjes_integral(const GridFunction& f, const GridFunction& g, double alpha, double t, double s) {
    check_alpha(alpha);
    require_same_grid(f, g);
    const std::size_t d = result_dim(f, g);
    const std::size_t a = f.grid().index_of(t);
    const std::size_t e = f.grid().index_of(s);
    if (e < a) throw std::invalid_argument("stieltjes_integral requires t <= s");
    if (e == a) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    const auto w = KernelWeights::get(alpha, f.size());
    const std::size_t k = g.dim();
    std::vector<double> psi((e - a) * k);
    walk_right_derivative(g, *w, a, e, [&](std::size_t r, std::size_t ss, const std::vector<double>& p) {
        if (ss == e) std::copy(p.begin(), p.end(), psi.begin() + static_cast<std::ptrdiff_t>((r - a) * k));
    });
    const Eigen::MatrixXd E = scaled_left_derivative(f.slice(0, e), *w, a);
    Eigen::VectorXd out = compose(E, *w, f.step(), e - a, k, d, [&](std::size_t m) { return psi.data() + m * k; });
    if (!out.allFinite()) throw std::runtime_error("stieltjes_integral: non-finite result");
    return out;
}

GridFunction stieltjes_indefinite(const GridFunction& f, const GridFunction& g, double alpha, double t) {
    check_alpha(alpha);
    require_same_grid(f, g);
    const std::size_t a = f.grid().index_of(t);
    if (a + 1 >= f.size()) throw std::invalid_argument("no nodes after t");
    DriverKernel kernel(g, alpha);
    Eigen::MatrixXd G = kernel.indefinite(f, a);
    return GridFunction(UniformGrid(t, f.grid().t1, f.size() - a), G);
}

double sup_norm(const GridFunction& f, double t, double T) {
    const Window w = window_of(f, t, T);
    double best = 0.0;
    for (std::size_t i = w.a; i <= w.b; ++i) best = std::max(best, row_norm(f.values(), static_cast<Eigen::Index>(i)));
    return best;
}

namespace {

/// |f(s)| + int_t^s |f(s) - f(r)| / (s - r)^{alpha+1} dr at each node of the window.
std::vector<double> alpha_profile(const GridFunction& f, double alpha, const Window& w, std::vector<double>* inner_out = nullptr) {
    const auto kw = KernelWeights::get(alpha, f.size());
    const double hs = std::pow(f.step(), -alpha);
    const auto& F = f.values();
    std::vector<double> out(w.b - w.a + 1), inner(w.b - w.a + 1);
    for (std::size_t i = w.a; i <= w.b; ++i) {
        const std::size_t j = i - w.a;
        const auto ii = static_cast<Eigen::Index>(i);
        const double I = hs * kw->left.integrate(j, [&](std::size_t k) { return row_diff_norm(F, ii, ii - static_cast<Eigen::Index>(k)); });
        inner[j] = I;
        out[j] = row_norm(F, ii) + I;
    }
    if (inner_out) *inner_out = std::move(inner);
    return out;
}

}  // namespace

double norm_alpha_infty(const GridFunction& f, double alpha, double t, double T) {
    check_alpha(alpha);
    const auto prof = alpha_profile(f, alpha, window_of(f, t, T));
    return *std::max_element(prof.begin(), prof.end());
}

double norm_alpha_lambda(const GridFunction& f, double alpha, double lambda, double t, double T) {
    check_alpha(alpha);
    if (lambda < 0) throw std::domain_error("lambda must be nonnegative");
    const Window w = window_of(f, t, T);
    const auto prof = alpha_profile(f, alpha, w);
    double best = 0.0;
    for (std::size_t i = w.a; i <= w.b; ++i) best = std::max(best, std::exp(-lambda * f.time(i)) * prof[i - w.a]);
    return best;
}

double log_norm_alpha_lambda(const GridFunction& f, double alpha, double lambda, double t, double T) {
    check_alpha(alpha);
    if (lambda < 0) throw std::domain_error("lambda must be nonnegative");
    const Window w = window_of(f, t, T);
    const auto prof = alpha_profile(f, alpha, w);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = w.a; i <= w.b; ++i)
        if (prof[i - w.a] > 0) best = std::max(best, std::log(prof[i - w.a]) - lambda * f.time(i));
    return best;
}

double norm_alpha_one(const GridFunction& f, double alpha, double t, double T) {
    check_alpha(alpha);
    const Window w = window_of(f, t, T);
    std::vector<double> inner;
    alpha_profile(f, alpha, w, &inner);
    const auto kw = KernelWeights::get(alpha, f.size());
    const double h = f.step();
    const auto& F = f.values();
    const std::size_t J = w.b - w.a;
    double first = 0.0;
    for (std::size_t m = 0; m < J; ++m)
        first += kw->base.a[m] * row_norm(F, static_cast<Eigen::Index>(w.a + m)) +
                 kw->base.b[m] * row_norm(F, static_cast<Eigen::Index>(w.a + m + 1));
    first *= std::pow(h, 1.0 - alpha);
    double second = 0.0;
    for (std::size_t m = 0; m < J; ++m) second += 0.5 * h * (inner[m] + inner[m + 1]);
    return first + second;
}

double holder_constant(const GridFunction& f, double mu, double t, double T) {
    if (!(mu > 0 && mu <= 1)) throw std::domain_error("mu must lie in (0, 1]");
    const Window w = window_of(f, t, T);
    const double h = f.step();
    const auto& F = f.values();
    const std::size_t m = w.b - w.a;
    std::vector<double> powl(m + 1);
    for (std::size_t L = 1; L <= m; ++L) powl[L] = std::pow(static_cast<double>(L) * h, -mu);
    double best = 0.0;
    for (std::size_t i = w.a; i <= w.b; ++i)
        for (std::size_t j = i + 1; j <= w.b; ++j)
            best = std::max(best, row_diff_norm(F, static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * powl[j - i]);
    return best;
}

double holder_norm(const GridFunction& f, double mu, double t, double T) {
    return sup_norm(f, t, T) + holder_constant(f, mu, t, T);
}

double lambda_alpha(const GridFunction& g, double alpha, double t, double T) {
    check_alpha(alpha);
    const Window w = window_of(g, t, T);
    if (w.b - w.a + 1 < 4) throw std::invalid_argument("lambda_alpha needs at least 4 grid points");
    const auto kw = KernelWeights::get(alpha, g.size());
    double best = 0.0;
    walk_right_derivative(g, *kw, w.a, w.b, [&](std::size_t, std::size_t, const std::vector<double>& psi) {
        double acc = 0.0;
        for (double v : psi) acc += v * v;
        best = std::max(best, acc);
    });
    return std::sqrt(best) / kw->gamma_one_minus_alpha;
}

double delta_seminorm(const GridFunction& f, double alpha, double delta, double t, double T) {
    check_alpha(alpha);
    if (!(delta > alpha && delta <= 1.0)) throw std::domain_error("delta must lie in (alpha, 1]");
    const Window w = window_of(f, t, T);
    const PowerWeights pw(alpha + 1.0, w.b - w.a + 1, delta);
    const double hs = std::pow(f.step(), -alpha);
    const auto& F = f.values();
    double best = 0.0;
    for (std::size_t i = w.a; i <= w.b; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double I = hs * pw.integrate(i - w.a, [&](std::size_t k) {
            return std::pow(row_diff_norm(F, ii, ii - static_cast<Eigen::Index>(k)), delta);
        });
        best = std::max(best, I);
    }
    return best;
}

double norm_wtilde(const GridFunction& g, double alpha, double t, double T) {
    check_alpha(alpha);
    const Window w = window_of(g, t, T);
    const auto kw = KernelWeights::get(alpha, g.size());
    const double h = g.step();
    const auto& G = g.values();
    const double hs = std::pow(h, alpha - 1.0);
    double best = 0.0;
    for (std::size_t r = w.a; r < w.b; ++r) {
        const auto rr = static_cast<Eigen::Index>(r);
        double S = 0.0;
        for (std::size_t J = 1; r + J <= w.b; ++J) {
            const auto ss = static_cast<Eigen::Index>(r + J);
            const double phiJ = row_diff_norm(G, ss, rr);
            if (J == 1)
                S = kw->right.first_cell * phiJ;
            else
                S += kw->right.a[J - 1] * row_diff_norm(G, ss - 1, rr) + kw->right.b[J - 1] * phiJ;
            best = std::max(best, hs * (phiJ * std::pow(static_cast<double>(J), alpha - 1.0) + S));
        }
    }
    return row_norm(G, static_cast<Eigen::Index>(w.a)) + best;
}

NormReport norm_report(const GridFunction& f, const GridFunction* g, double alpha, double lambda, double mu,
                       double delta, double t, double T) {
    NormReport r;
    r.norm_alpha_infty = norm_alpha_infty(f, alpha, t, T);
    r.norm_alpha_lambda = norm_alpha_lambda(f, alpha, lambda, t, T);
    r.norm_alpha_one = norm_alpha_one(f, alpha, t, T);
    r.holder_norm = holder_norm(f, mu, t, T);
    r.delta_seminorm = delta_seminorm(f, alpha, delta, t, T);
    r.sup_norm = sup_norm(f, t, T);
    if (g) r.lambda_alpha = lambda_alpha(*g, alpha, t, T);
    return r;
}

bool CheckReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void CheckReport::add(std::string name, double lhs, double rhs, double constant, double rel_tol, double abs_tol) {
    Check c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.constant = constant;
    c.pass = std::isfinite(lhs) && !std::isnan(rhs) && lhs <= rhs * (1.0 + rel_tol) + abs_tol;
    checks.push_back(std::move(c));
}

double constant_A1(double alpha, double T) {
    return std::pow(T, 1.0 - alpha) / (1.0 - alpha) + T + 2.0 + std::pow(T, alpha);
}

double constant_A2(double alpha, double T) { return 4.0 / (1.0 - 2.0 * alpha) * (2.0 / alpha + std::pow(T, alpha)); }

CheckReport verify_integral_bound(const GridFunction& f, const GridFunction& g, double alpha, double t, double T) {
    CheckReport rep;
    const double lhs = stieltjes_integral(f, g, alpha, t, T).norm();
    const double lam = lambda_alpha(g, alpha, t, T);
    const double rhs = lam * norm_alpha_one(f, alpha, t, T);
    rep.add("integral-bound", lhs, rhs, lam, 1e-6 + kQuadratureSlack);
    return rep;
}

CheckReport verify_norm_bounds(const GridFunction& f, const GridFunction& g, double alpha, double lambda, double t,
                                double T) {
    check_alpha(alpha);
    if (!(lambda >= 1.0)) throw std::domain_error("norm bounds need lambda >= 1");
    CheckReport rep;
    const GridFunction G = stieltjes_indefinite(f, g, alpha, t);
    const double lam = lambda_alpha(g, alpha, t, T);
    const std::size_t a = f.grid().index_of(t);
    const std::size_t b = f.grid().index_of(T);
    const GridFunction Gw = b - a == G.size() - 1 ? G : G.slice(0, b - a);
    const double A1 = constant_A1(alpha, T);
    const double A2 = constant_A2(alpha, T);
    rep.add("holder-bound", holder_norm(Gw, 1.0 - alpha, t, T), A1 * lam * norm_alpha_infty(f, alpha, t, T), A1,
            1e-6 + kQuadratureSlack);
    rep.add("weighted-bound", norm_alpha_lambda(Gw, alpha, lambda, t, T),
            lam / std::pow(lambda, 1.0 - 2.0 * alpha) * A2 * norm_alpha_lambda(f, alpha, lambda, t, T), A2,
            1e-6 + kQuadratureSlack);
    return rep;
}

}  // namespace fracvia
