#include "fracvia/fsde.hpp"

#include "fracvia/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fracvia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd flatten_rows(const GridFunction& f, const CoefficientPair& c, bool diffusion) {
    const std::size_t n = f.size();
    const std::size_t cols = diffusion ? c.d * c.k : c.d;
    if (f.dim() != c.d) throw std::invalid_argument("path dimension does not match coefficients");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const Eigen::VectorXd x = f.values().row(ii).transpose();
        if (diffusion) {
            const Eigen::MatrixXd s = c.sigma(f.time(i), x);
            for (std::size_t a = 0; a < c.d; ++a)
                for (std::size_t b = 0; b < c.k; ++b)
                    out(ii, static_cast<Eigen::Index>(a * c.k + b)) = s(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        } else {
            out.row(ii) = c.b(f.time(i), x).transpose();
        }
    }
    return out;
}

Eigen::MatrixXd constant_rows(const Eigen::VectorXd& x0, std::size_t n) {
    return x0.transpose().replicate(static_cast<Eigen::Index>(n), 1);
}

double sup_rows(const Eigen::MatrixXd& m) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).norm());
    return best;
}

/// x0 + F(X) + G(X) on the window grid of the kernel.
Eigen::MatrixXd picard_map(const GridFunction& X, const CoefficientPair& c, const DriverKernel& K, const Eigen::VectorXd& x0) {
    const GridFunction S(X.grid(), flatten_rows(X, c, true));
    const Eigen::MatrixXd E = scaled_left_derivative(S, K.weights(), 0);
    Eigen::MatrixXd out = K.indefinite_from_scaled(E, 0);
    out += drift_indefinite(X, c, 0);
    out.rowwise() += x0.transpose();
    return out;
}

void check_state(const Eigen::MatrixXd& X) {
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        if (!X.row(i).allFinite()) throw std::runtime_error("non-finite state at node " + std::to_string(i));
}

SolveResult picard_window(const CoefficientPair& c, const GridFunction& gw, const Eigen::VectorXd& x0,
                          const SolverConfig& cfg, double lambda) {
    const std::size_t n = gw.size();
    DriverKernel K(gw, cfg.alpha);
    SolveResult res;
    res.lambda = lambda;
    GridFunction X(gw.grid(), constant_rows(x0, n));
    const double t = gw.grid().t0, T = gw.grid().t1;
    double prev_log = std::numeric_limits<double>::quiet_NaN();
    for (int m = 0; m < cfg.picard_max_iter; ++m) {
        Eigen::MatrixXd next = picard_map(X, c, K, x0);
        check_state(next);
        const Eigen::MatrixXd diff = next - X.values();
        const double change = sup_rows(diff);
        res.history.push_back(change);
        const double lg = log_norm_alpha_lambda(GridFunction(gw.grid(), diff), cfg.alpha, lambda, t, T);
        if (std::isfinite(prev_log) && std::isfinite(lg)) res.contraction_ratios.push_back(std::exp(lg - prev_log));
        prev_log = lg;
        X = GridFunction(gw.grid(), std::move(next));
        res.iterations = m + 1;
        if (change < cfg.picard_tol) {
            res.path = X;
            res.residual = sup_rows(picard_map(X, c, K, x0) - X.values());
            return res;
        }
    }
    std::ostringstream os;
    os << "Picard iteration did not converge in " << cfg.picard_max_iter << " iterations (last change "
       << (res.history.empty() ? kInf : res.history.back()) << ")";
    throw SolverError(os.str(), res.history);
}

SolveResult picard_stitched(const CoefficientPair& c, const GridFunction& gw, const Eigen::VectorXd& x0,
                            const SolverConfig& cfg, std::size_t depth) {
    const std::size_t n = gw.size();
    const double lam = lambda_alpha(gw, cfg.alpha, gw.grid().t0, gw.grid().t1);
    const EstimateLedger led = compute_ledger(c, cfg.alpha, lam, gw.grid().t1 - gw.grid().t0, x0.norm());
    const double lambda = cfg.lambda.value_or(led.lambda0);
    const bool too_stiff = !cfg.lambda && led.lambda0 > 1e6;
    if (!too_stiff) {
        try {
            return picard_window(c, gw, x0, cfg, lambda);
        } catch (const SolverError&) {
            if (n < 33 || depth > 12) throw;
        } catch (const std::runtime_error&) {
            if (n < 33 || depth > 12) throw;
        }
    } else if (n < 33 || depth > 12) {
        return picard_window(c, gw, x0, cfg, lambda);
    }
    const std::size_t mid = (n - 1) / 2;
    SolveResult left = picard_stitched(c, gw.slice(0, mid), x0, cfg, depth + 1);
    const Eigen::VectorXd xm = left.path.values().row(static_cast<Eigen::Index>(mid)).transpose();
    SolveResult right = picard_stitched(c, gw.slice(mid, n - 1), xm, cfg, depth + 1);
    Eigen::MatrixXd V(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(x0.size()));
    V.topRows(static_cast<Eigen::Index>(mid + 1)) = left.path.values();
    V.bottomRows(static_cast<Eigen::Index>(n - mid)) = right.path.values();
    SolveResult out;
    out.path = GridFunction(gw.grid(), V);
    out.iterations = std::max(left.iterations, right.iterations);
    out.residual = std::max(left.residual, right.residual);
    out.history = left.history;
    out.history.insert(out.history.end(), right.history.begin(), right.history.end());
    out.contraction_ratios = left.contraction_ratios;
    out.contraction_ratios.insert(out.contraction_ratios.end(), right.contraction_ratios.begin(),
                                  right.contraction_ratios.end());
    out.lambda = std::max(left.lambda, right.lambda);
    out.stitched = true;
    out.pieces = left.pieces + right.pieces;
    out.piece_starts = left.piece_starts;
    for (std::size_t a : right.piece_starts) out.piece_starts.push_back(a + mid);
    return out;
}

/// Re-solves each stitched piece against the equation based at the window
/// start, earlier pieces held fixed, so the residual is the global one.
void polish_pieces(SolveResult& res, const CoefficientPair& c, const GridFunction& gw, const Eigen::VectorXd& x0,
                   const SolverConfig& cfg) {
    const std::size_t n = gw.size();
    Eigen::MatrixXd X = res.path.values();
    for (std::size_t p = 0; p < res.piece_starts.size(); ++p) {
        const std::size_t a = res.piece_starts[p];
        const std::size_t b = p + 1 < res.piece_starts.size() ? res.piece_starts[p + 1] : n - 1;
        const GridFunction gp = gw.slice(0, b);
        const DriverKernel K(gp, cfg.alpha);
        const auto rows = static_cast<Eigen::Index>(b - a);
        bool done = false;
        for (int m = 0; m < cfg.picard_max_iter && !done; ++m) {
            const GridFunction Xp(gp.grid(), X.topRows(static_cast<Eigen::Index>(b + 1)));
            const Eigen::MatrixXd next = picard_map(Xp, c, K, x0);
            check_state(next);
            const double change = sup_rows(next.bottomRows(rows) - X.middleRows(static_cast<Eigen::Index>(a + 1), rows));
            X.middleRows(static_cast<Eigen::Index>(a + 1), rows) = next.bottomRows(rows);
            res.history.push_back(change);
            done = change < cfg.picard_tol;
        }
        if (!done) throw SolverError("stitched Picard polish did not converge on piece " + std::to_string(p), res.history);
    }
    res.path = GridFunction(gw.grid(), X);
    const DriverKernel K(gw, cfg.alpha);
    res.residual = sup_rows(picard_map(res.path, c, K, x0) - X);
}

}  // namespace

double solve_lambda(const std::function<double(double)>& f) {
    if (f(1.0) <= 0.5) return 1.0;
    double lo = 1.0, hi = 2.0;
    while (f(hi) > 0.5) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return kInf;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = std::sqrt(lo * hi);
        (f(mid) > 0.5 ? lo : hi) = mid;
    }
    return hi;
}

EstimateLedger compute_ledger(const CoefficientPair& c, double alpha, double Lambda, double T, double R,
                              std::optional<double> gamma) {
    check_alpha(alpha);
    c.validate();
    if (!(T > 0)) throw std::invalid_argument("ledger horizon must be positive");
    if (!(c.beta > alpha)) throw std::domain_error("ledger requires alpha < beta");
    if (!(alpha < c.delta / (1.0 + c.delta))) throw std::domain_error("ledger requires alpha < delta/(1+delta)");
    EstimateLedger L;
    L.alpha = alpha;
    L.T = T;
    L.Lambda = Lambda;
    L.R = R;
    const double a = alpha, b = c.beta, dl = c.delta;
    const double m = std::min(b - a, 1.0 - 2.0 * a);
    L.gamma = gamma.value_or(m);
    if (!(L.gamma > 0 && L.gamma <= m + 1e-15)) throw std::domain_error("gamma must lie in (0, min(beta-alpha, 1-2alpha)]");
    L.A1 = constant_A1(a, T);
    L.A2 = constant_A2(a, T);
    const double Ta = std::pow(T, a);
    const double tail = std::pow(T, 1.0 - 2.0 * a) / (1.0 - 2.0 * a);
    L.C0b1 = c.L0 * (T + Ta);
    L.C0b2 = c.L0 * (Ta + 1.0 / a) * tail;
    L.CRb3 = c.LR(R) * (Ta + 1.0 / a) * tail;
    const double hold = 1.0 + std::pow(T, b - a) / (b - a);
    const double Ks = (c.M0T(T) + c.M0) * hold;
    L.C0s1 = L.A1 * Ks;
    L.C0s2 = L.A2 * Ks;
    L.CRs3 = L.A2 * (c.M0 + c.MR(R)) * hold;
    L.CR1 = (R + 1.0 + T) * c.LR(R);
    L.CR3 = 2.0 * (1.0 + R) * c.L0;
    const double bm = b - a;
    L.CR2 = Lambda * c.M0 *
            (std::pow(T, bm - m) / (bm + 1.0) * (1.0 + 1.0 / bm) +
             R * std::pow(T, 1.0 - 2.0 * a - m) / (2.0 - 2.0 * a) * (1.0 + 1.0 / (1.0 - 2.0 * a)));
    L.CR4 = Lambda * c.M0 *
            (std::pow(T, b) / (1.0 - a) + R * std::pow(T, 1.0 - a) / (1.0 - a) + std::pow(T, b) / (bm * (bm + 1.0)) +
             R * std::pow(T, 1.0 - a) / ((1.0 - 2.0 * a) * (2.0 - 2.0 * a)));
    L.G_tilde0 = L.CR1 * std::pow(T, 1.0 - a - L.gamma) + L.CR2 * std::pow(T, m - L.gamma);
    L.G0 = L.CR3 * Ta + L.CR4;
    L.D0 = L.CR3 * Ta + L.CR4 + L.G0;
    L.B0 = R;

    // lambda0: the rule as printed together with the rule the chain actually needs
    const double e2 = 1.0 - 2.0 * a;
    const double Kb = L.C0b2, Ks2 = Lambda * L.C0s2;
    const double lam_printed = solve_lambda([&](double l) { return (Kb + Ks2) / std::pow(l, e2); });
    const double lam_chain = solve_lambda([&](double l) { return Kb / std::pow(l, a) + Ks2 / std::pow(l, e2); });
    L.lambda0 = std::max(lam_printed, lam_chain);
    const double K = L.C0b1 + Lambda * L.C0s1;
    const double lt = L.lambda0 * T;
    // C0 = max(1 + 2K e^{lt}, K (1 + 2 e^{lt})) evaluated in log space
    auto log_sum = [](double x, double y) {
        const double mx = std::max(x, y);
        if (!std::isfinite(mx)) return mx;
        return mx + std::log(std::exp(x - mx) + std::exp(y - mx));
    };
    const double logK = K > 0 ? std::log(K) : -kInf;
    const double l1 = log_sum(0.0, std::log(2.0) + logK + lt);
    const double l2 = K > 0 ? logK + log_sum(0.0, std::log(2.0) + lt) : -kInf;
    L.log_C0 = std::max(l1, l2);
    L.C0 = L.log_C0 > 700 ? kInf : std::exp(L.log_C0);

    const double kd = dl - a * (1.0 + dl);
    const double delta_bound = R * std::pow(T, kd) / kd;
    L.lambda_bar = solve_lambda([&](double l) {
        return L.CRb3 / std::pow(l, a) + L.CRs3 * Lambda * (1.0 + 2.0 * delta_bound) / std::pow(l, e2);
    });
    const double h = 0.5 - a;
    L.C_xi = T + std::pow(2.0 * T, h) * std::pow(L.D0, 0.5 + a) * std::pow(T, h * (1.0 + a)) / (h * (1.0 + a));
    return L;
}

GridFunction window(const GridFunction& g, double t, double T) {
    const std::size_t a = g.grid().index_of(t);
    const std::size_t b = g.grid().index_of(T);
    if (b <= a) throw std::invalid_argument("window requires t < T");
    if (a == 0 && b + 1 == g.size()) return g;
    return g.slice(a, b);
}

GridFunction drift_along(const GridFunction& f, const CoefficientPair& c) {
    return GridFunction(f.grid(), flatten_rows(f, c, false));
}

GridFunction sigma_along(const GridFunction& f, const CoefficientPair& c) {
    return GridFunction(f.grid(), flatten_rows(f, c, true));
}

Eigen::MatrixXd drift_indefinite(const GridFunction& f, const CoefficientPair& c, std::size_t base) {
    const Eigen::MatrixXd B = flatten_rows(f, c, false);
    const std::size_t n = f.size();
    if (base >= n) throw std::invalid_argument("base outside grid");
    const double h = f.step();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n - base), B.cols());
    for (std::size_t i = base + 1; i < n; ++i) {
        const auto j = static_cast<Eigen::Index>(i - base);
        out.row(j) = out.row(j - 1) + 0.5 * h * (B.row(static_cast<Eigen::Index>(i - 1)) + B.row(static_cast<Eigen::Index>(i)));
    }
    return out;
}

Eigen::VectorXd drift_operator(const GridFunction& f, const CoefficientPair& c, double t, double s) {
    const std::size_t a = f.grid().index_of(t);
    const std::size_t e = f.grid().index_of(s);
    if (e < a) throw std::invalid_argument("drift_operator requires t <= s");
    if (e == a) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c.d));
    const Eigen::MatrixXd I = drift_indefinite(f.slice(0, std::max<std::size_t>(e, 1)), c, a);
    return I.row(static_cast<Eigen::Index>(e - a)).transpose();
}

Eigen::VectorXd diffusion_operator(const GridFunction& f, const GridFunction& g, const CoefficientPair& c,
                                   double alpha, double t, double s) {
    if (g.dim() != c.k) throw std::invalid_argument("driver channels do not match coefficients");
    return stieltjes_integral(sigma_along(f, c), g, alpha, t, s);
}

SolveResult solve_picard(const CoefficientPair& c, const GridFunction& g, const Eigen::VectorXd& x0, double t, double T,
                         const SolverConfig& config) {
    c.validate();
    check_alpha(config.alpha);
    if (static_cast<std::size_t>(x0.size()) != c.d) throw std::invalid_argument("x0 dimension does not match coefficients");
    if (g.dim() != c.k) throw std::invalid_argument("driver channels do not match coefficients");
    const GridFunction gw = window(g, t, T);
    SolveResult res = picard_stitched(c, gw, x0, config, 0);
    if (res.stitched) polish_pieces(res, c, gw, x0, config);
    return res;
}

GridFunction solve_euler(const CoefficientPair& c, const GridFunction& g, const Eigen::VectorXd& x0, double t,
                         double T) {
    c.validate();
    if (static_cast<std::size_t>(x0.size()) != c.d) throw std::invalid_argument("x0 dimension does not match coefficients");
    if (g.dim() != c.k) throw std::invalid_argument("driver channels do not match coefficients");
    const GridFunction gw = window(g, t, T);
    const std::size_t n = gw.size();
    const double h = gw.step();
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c.d));
    Eigen::VectorXd x = x0;
    X.row(0) = x.transpose();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double ti = gw.time(i);
        const Eigen::VectorXd dg = (gw.values().row(static_cast<Eigen::Index>(i + 1)) - gw.values().row(static_cast<Eigen::Index>(i))).transpose();
        x = x + c.b(ti, x) * h + c.sigma(ti, x) * dg;
        if (!x.allFinite()) throw std::runtime_error("Euler blow-up at node " + std::to_string(i + 1));
        X.row(static_cast<Eigen::Index>(i + 1)) = x.transpose();
    }
    return GridFunction(gw.grid(), X);
}

double integral_residual(const GridFunction& X, const CoefficientPair& c, const GridFunction& g,
                         const Eigen::VectorXd& x0, double alpha) {
    require_same_grid(X, g);
    DriverKernel K(g, alpha);
    return sup_rows(picard_map(X, c, K, x0) - X.values());
}

double apriori_holder_bound(const Eigen::VectorXd& x0, const EstimateLedger& ledger) {
    const double l = log_apriori_holder_bound(x0, ledger);
    return l > 700 ? kInf : std::exp(l);
}

double log_apriori_holder_bound(const Eigen::VectorXd& x0, const EstimateLedger& ledger) {
    return ledger.log_C0 + std::log1p(x0.norm());
}

namespace {

GridFunction sigma_integral(const GridFunction& f, const GridFunction& g, const CoefficientPair& c, double alpha) {
    DriverKernel K(g, alpha);
    const Eigen::MatrixXd E = scaled_left_derivative(sigma_along(f, c), K.weights(), 0);
    return GridFunction(f.grid(), K.indefinite_from_scaled(E, 0));
}

GridFunction drift_integral(const GridFunction& f, const CoefficientPair& c) {
    return GridFunction(f.grid(), drift_indefinite(f, c, 0));
}

GridFunction minus(const GridFunction& a, const GridFunction& b) {
    return GridFunction(a.grid(), a.values() - b.values());
}

/// e^{log_num} <= e^{log_den} * factor, tolerant to underflow of both sides.
void add_log_check(CheckReport& rep, const std::string& name, double log_lhs, double log_rhs_base, double factor,
                   double constant) {
    if (!std::isfinite(log_lhs)) {
        rep.add(name, 0.0, std::isfinite(log_rhs_base) ? 1.0 : 0.0, constant, 0.0);
        return;
    }
    // rescale so that the rhs is representable
    const double shift = log_rhs_base;
    const double lhs = std::exp(log_lhs - shift);
    rep.add(name, lhs, factor, constant, 1e-6 + kQuadratureSlack, 1e-12);
}

}  // namespace

CheckReport verify_operator_estimates(const GridFunction& f, const GridFunction& h, const GridFunction& g,
                                      const CoefficientPair& c, double alpha, double lambda, double t, double T) {
    check_alpha(alpha);
    if (!(lambda >= 1.0)) throw std::domain_error("operator estimates need lambda >= 1");
    require_same_grid(f, g);
    require_same_grid(h, g);
    const GridFunction fw = window(f, t, T), hw = window(h, t, T), gw = window(g, t, T);
    const double Lam = lambda_alpha(gw, alpha, t, T);
    const double R = std::max(sup_norm(fw, t, T), sup_norm(hw, t, T));
    const EstimateLedger L = compute_ledger(c, alpha, Lam, T, R);
    const double e2 = 1.0 - 2.0 * alpha;
    const double tol = 1e-6 + kQuadratureSlack;

    const GridFunction Gf = sigma_integral(fw, gw, c, alpha);
    const GridFunction Gh = sigma_integral(hw, gw, c, alpha);
    const GridFunction Ff = drift_integral(fw, c);
    const GridFunction Fh = drift_integral(hw, c);

    CheckReport rep;
    rep.add("diffusion-holder", holder_norm(Gf, 1.0 - alpha, t, T), L.C0s1 * Lam * (1.0 + norm_alpha_infty(fw, alpha, t, T)), L.C0s1, tol);

    // weighted bounds are compared in log space: |||u|||_{a,l} <= K (1 + |||f|||_{a,l})
    const double lf = log_norm_alpha_lambda(fw, alpha, lambda, t, T);
    auto one_plus = [](double lg) { return std::isfinite(lg) ? std::log1p(std::exp(lg)) : 0.0; };
    add_log_check(rep, "diffusion-weighted", log_norm_alpha_lambda(Gf, alpha, lambda, t, T), one_plus(lf),
                  L.C0s2 * Lam / std::pow(lambda, e2), L.C0s2);

    const double Df = delta_seminorm(fw, alpha, c.delta, t, T);
    const double Dh = delta_seminorm(hw, alpha, c.delta, t, T);
    const double lfh = log_norm_alpha_lambda(minus(fw, hw), alpha, lambda, t, T);
    const double ldiff_G = log_norm_alpha_lambda(minus(Gf, Gh), alpha, lambda, t, T);
    const double ldiff_F = log_norm_alpha_lambda(minus(Ff, Fh), alpha, lambda, t, T);
    if (!std::isfinite(lfh)) {
        rep.add("diffusion-difference", std::isfinite(ldiff_G) ? std::exp(ldiff_G) : 0.0, 0.0, L.CRs3, tol);
        rep.add("drift-difference", std::isfinite(ldiff_F) ? std::exp(ldiff_F) : 0.0, 0.0, L.CRb3, tol);
    } else {
        add_log_check(rep, "diffusion-difference", ldiff_G, lfh, L.CRs3 * Lam / std::pow(lambda, e2) * (1.0 + Df + Dh), L.CRs3);
        add_log_check(rep, "drift-difference", ldiff_F, lfh, L.CRb3 / std::pow(lambda, alpha), L.CRb3);
    }
    rep.add("drift-holder", holder_norm(Ff, 1.0 - alpha, t, T), L.C0b1 * (1.0 + sup_norm(fw, t, T)), L.C0b1, tol);
    add_log_check(rep, "drift-weighted", log_norm_alpha_lambda(Ff, alpha, lambda, t, T), one_plus(lf),
                  L.C0b2 / std::pow(lambda, alpha), L.C0b2);
    return rep;
}

CheckReport verify_aux_estimates(const GridFunction& Y, const CoefficientPair& c, const GridFunction& g, double alpha,
                                 double t, std::optional<double> R) {
    check_alpha(alpha);
    require_same_grid(Y, g);
    const double T = Y.grid().t1;
    const GridFunction Yw = window(Y, t, T), gw = window(g, t, T);
    const double Lam = lambda_alpha(gw, alpha, t, T);
    const double radius = R.value_or(holder_norm(Yw, 1.0 - alpha, t, T));
    const EstimateLedger L = compute_ledger(c, alpha, Lam, T, radius);
    const double m = std::min(c.beta - alpha, 1.0 - 2.0 * alpha);
    const std::size_t n = Yw.size();
    const double h = Yw.step();
    const GridFunction B = drift_along(Yw, c);
    const GridFunction S = sigma_along(Yw, c);

    struct Worst {
        double lhs = 0.0, rhs = 0.0, ratio = -1.0;
    };
    Worst wa, wb, wc, wd;
    auto record = [](Worst& w, double lhs, double rhs) {
        const double r = rhs > 0 ? lhs / rhs : (lhs > 1e-12 ? kInf : 0.0);
        if (r > w.ratio) w = Worst{lhs, rhs, r};
    };
    std::vector<std::size_t> starts = {0, (n - 1) / 4, (n - 1) / 2};
    for (std::size_t i0 : starts) {
        const Eigen::RowVectorXd b0 = B.values().row(static_cast<Eigen::Index>(i0));
        const Eigen::RowVectorXd s0 = S.values().row(static_cast<Eigen::Index>(i0));
        Eigen::MatrixXd Bd = B.values().rowwise() - b0;
        Eigen::MatrixXd Sd = S.values().rowwise() - s0;
        const GridFunction Sdf(Yw.grid(), Sd);
        // cumulative trapezoid of the frozen drift deviation
        Eigen::MatrixXd cum = Eigen::MatrixXd::Zero(Bd.rows(), Bd.cols());
        for (Eigen::Index i = 1; i < Bd.rows(); ++i) cum.row(i) = cum.row(i - 1) + 0.5 * h * (Bd.row(i - 1) + Bd.row(i));
        for (std::size_t L2 = 1; i0 + L2 < n; L2 *= 2) {
            const std::size_t s = i0 + L2;
            const double ts = Yw.time(i0), ss = Yw.time(s);
            const double len = ss - ts;
            record(wa, (cum.row(static_cast<Eigen::Index>(s)) - cum.row(static_cast<Eigen::Index>(i0))).norm(),
                   L.CR1 * std::pow(len, 2.0 - alpha));
            record(wb, stieltjes_integral(Sdf, gw, alpha, ts, ss).norm(), L.CR2 * std::pow(len, 1.0 + m));
            for (std::size_t tau : {i0 + L2 / 2, i0 + (3 * L2) / 4}) {
                if (tau <= i0 || tau >= s) continue;
                const double tt = Yw.time(tau);
                record(wc, (cum.row(static_cast<Eigen::Index>(s)) - cum.row(static_cast<Eigen::Index>(tau))).norm(),
                       L.CR3 * (ss - tt));
                record(wd, stieltjes_integral(Sdf, gw, alpha, tt, ss).norm(), L.CR4 * std::pow(ss - tt, 1.0 - alpha));
            }
        }
    }
    const double tol = 1e-6 + kQuadratureSlack;
    CheckReport rep;
    rep.add("frozen-drift", wa.lhs, wa.rhs, L.CR1, tol);
    rep.add("frozen-diffusion", wb.lhs, wb.rhs, L.CR2, tol);
    rep.add("drift-increment", wc.lhs, wc.rhs, L.CR3, tol);
    rep.add("diffusion-increment", wd.lhs, wd.rhs, L.CR4, tol);
    return rep;
}

}  // namespace fracvia
