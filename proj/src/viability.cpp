#include "fracvia/viability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fracvia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNoiseFloor = 1e-14;
constexpr std::size_t kFitNodes = 10;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

Eigen::RowVectorXd flat_sigma(const CoefficientPair& c, double t, const Eigen::VectorXd& x) {
    const Eigen::MatrixXd s = c.sigma(t, x);
    Eigen::RowVectorXd out(static_cast<Eigen::Index>(c.d * c.k));
    for (std::size_t a = 0; a < c.d; ++a)
        for (std::size_t b = 0; b < c.k; ++b) out(ix(a * c.k + b)) = s(ix(a), ix(b));
    return out;
}

/// max_{i0 <= i < j} |M_j - M_i| / (t_j - t_i)^mu.
double holder_to(const Eigen::MatrixXd& M, std::size_t i0, std::size_t j, double h, double mu) {
    double best = 0.0;
    for (std::size_t i = i0; i < j; ++i) {
        const double dist = (M.row(ix(j)) - M.row(ix(i))).norm();
        if (dist == 0.0) continue;
        best = std::max(best, dist / std::pow(static_cast<double>(j - i) * h, mu));
    }
    return best;
}

double holder_all(const Eigen::MatrixXd& M, std::size_t i0, std::size_t i1, double h, double mu) {
    double best = 0.0;
    for (std::size_t j = i0 + 1; j <= i1; ++j) best = std::max(best, holder_to(M, i0, j, h, mu));
    return best;
}

/// Least-squares slope of log y on log x over pairs with y above the noise floor.
double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > kNoiseFloor) || !(x[i] > 0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) return std::numeric_limits<double>::quiet_NaN();
    const double den = static_cast<double>(m) * sxx - sx * sx;
    if (!(std::abs(den) > 0)) return std::numeric_limits<double>::quiet_NaN();
    return (static_cast<double>(m) * sxy - sx * sy) / den;
}

std::size_t cells_of(double span, double h) {
    return static_cast<std::size_t>(std::floor(span / h * (1.0 + 1e-12) + 1e-9));
}

}  // namespace

ContingencyCertificate contingency_check(double t, const Eigen::VectorXd& x, const CoefficientPair& c,
                                         const GridFunction& g, const ConstraintTube& tube, double h_bar, double alpha,
                                         double gamma, double budget) {
    check_alpha(alpha);
    if (!(h_bar > 0)) throw std::invalid_argument("h_bar must be positive");
    if (g.dim() != c.k) throw std::invalid_argument("driver channels do not match coefficients");
    if (!tube.contains(t, x)) throw std::domain_error("contingency check needs x in K(t)");
    const std::size_t i0 = g.grid().index_of(t);
    const std::size_t m = cells_of(h_bar, g.step());
    if (m == 0) throw std::invalid_argument("h_bar is below the grid step");
    if (i0 + m >= g.size()) throw std::invalid_argument("h_bar runs past the end of the driver");

    ContingencyCertificate cert;
    cert.t = t;
    cert.x = x;
    cert.h_bar = static_cast<double>(m) * g.step();
    cert.gamma = gamma;
    cert.budget = budget;

    const Eigen::VectorXd b0 = c.b(t, x);
    const Eigen::MatrixXd s0 = c.sigma(t, x);
    const Eigen::VectorXd g0 = g.row(i0);
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(ix(m + 1), static_cast<Eigen::Index>(c.d));
    bool any = false;
    for (std::size_t j = 1; j <= m; ++j) {
        const double s = g.time(i0 + j);
        const Eigen::VectorXd P = x + b0 * (s - t) + s0 * (g.row(i0 + j) - g0);
        const Eigen::VectorXd q = tube.project(s, P) - P;
        Q.row(ix(j)) = q.transpose();
        if (q.norm() > 0) any = true;
    }
    const double h = g.step();
    double worst = 0.0;
    std::vector<double> fx, fy;
    for (std::size_t j = 1; j <= m; ++j) {
        const double ds = static_cast<double>(j) * h;
        const double q = Q.row(ix(j)).norm();
        const double ratio = q / std::pow(ds, 1.0 + gamma);
        worst = std::max(worst, ratio);
        if (cert.first_violation == 0 && q > budget * std::pow(ds, 1.0 + gamma)) cert.first_violation = j;
        if (j <= kFitNodes) {
            fx.push_back(ds);
            fy.push_back(q);
        }
    }
    cert.G_tilde_R = worst;
    cert.G_R = any ? holder_all(Q, 0, m, h, 1.0 - alpha) : 0.0;
    cert.growth_exponent = log_slope(fx, fy);
    cert.holds = std::isfinite(cert.G_R) && std::isfinite(worst) && worst <= budget;
    cert.worst_margin = budget - worst;
    cert.Q = GridFunction(UniformGrid(t, g.time(i0 + m), m + 1), Q);
    return cert;
}

TangencyCertificate tangency_check(double t, const GridFunction& Y, const CoefficientPair& c, const GridFunction& g,
                                   const ConstraintTube& tube, double h_bar, double alpha, double tol) {
    check_alpha(alpha);
    if (Y.size() < 2) throw std::invalid_argument("tangency check needs a local path; run the builder first");
    const GridFunction gw = window(g, Y.grid().t0, Y.grid().t1);
    require_same_grid(Y, gw);
    const std::size_t i0 = Y.grid().index_of(t);
    const std::size_t m = cells_of(h_bar, Y.step());
    if (m == 0 || i0 + m >= Y.size()) throw std::invalid_argument("h_bar does not fit the local path");
    const GridFunction Yw = Y.slice(i0, i0 + m);
    const GridFunction gl = gw.slice(i0, i0 + m);

    TangencyCertificate cert;
    cert.t = t;
    cert.x = Y.row(i0);
    cert.h_bar = static_cast<double>(m) * Y.step();
    const Eigen::VectorXd b0 = c.b(t, cert.x);
    const Eigen::RowVectorXd s0 = flat_sigma(c, t, cert.x);
    Eigen::MatrixXd U(ix(m + 1), static_cast<Eigen::Index>(c.d));
    Eigen::MatrixXd V(ix(m + 1), static_cast<Eigen::Index>(c.d * c.k));
    for (std::size_t j = 0; j <= m; ++j) {
        const double r = Yw.time(j);
        U.row(ix(j)) = (c.b(r, Yw.row(j)) - b0).transpose();
        V.row(ix(j)) = flat_sigma(c, r, Yw.row(j)) - s0;
    }
    const double h = Y.step();
    cert.D_R = holder_all(U, 0, m, h, 1.0 - alpha);
    cert.D_tilde_R = holder_all(V, 0, m, h, std::min(c.beta, 1.0 - alpha));
    cert.U = GridFunction(Yw.grid(), U);
    cert.V = GridFunction(Yw.grid(), V);

    const DriverKernel K(gl, alpha);
    Eigen::MatrixXd recon = K.indefinite(sigma_along(Yw, c), 0) + drift_indefinite(Yw, c, 0);
    recon.rowwise() += cert.x.transpose();
    double worst = -kInf;
    for (std::size_t j = 0; j <= m; ++j)
        worst = std::max(worst, tube.signed_distance(Yw.time(j), recon.row(ix(j)).transpose()));
    cert.max_signed_distance = worst;
    cert.holds = std::isfinite(cert.D_R) && std::isfinite(cert.D_tilde_R) && worst <= tol;
    return cert;
}

GridFunction error_function(const GridFunction& X, const CoefficientPair& c, const GridFunction& g,
                            const Eigen::VectorXd& x0, double alpha, double t) {
    check_alpha(alpha);
    const GridFunction gw = window(g, X.grid().t0, X.grid().t1);
    require_same_grid(X, gw);
    const std::size_t i0 = X.grid().index_of(t);
    if (i0 + 1 >= X.size()) throw std::invalid_argument("error function needs a node after t");
    const GridFunction Xw = X.slice(i0, X.size() - 1);
    const GridFunction gl = gw.slice(i0, gw.size() - 1);
    const DriverKernel K(gl, alpha);
    Eigen::MatrixXd xi = Xw.values() - K.indefinite(sigma_along(Xw, c), 0) - drift_indefinite(Xw, c, 0);
    xi.rowwise() -= x0.transpose();
    return GridFunction(Xw.grid(), xi);
}

double select_step(double epsilon, const EstimateLedger& ledger, double alpha, double beta, double gamma,
                   double horizon, double g_tilde) {
    if (!(epsilon > 0) || !(horizon > 0)) throw std::invalid_argument("select_step needs eps > 0 and a positive horizon");
    const double m = std::min(beta - alpha, 1.0 - 2.0 * alpha);
    for (int j = 0; j < 64; ++j) {
        const double h = std::ldexp(horizon, -j);
        const double lhs = ledger.CR1 * std::pow(h, 1.0 - alpha) + ledger.CR2 * std::pow(h, m) + g_tilde * std::pow(h, gamma);
        if (lhs <= epsilon) return h;
    }
    return 0.0;
}

ApproximateSolution build_viable_solution(double t, const Eigen::VectorXd& x0, const CoefficientPair& c,
                                          const GridFunction& g, const ConstraintTube& tube, double epsilon,
                                          const ViabilityConfig& config) {
    c.validate();
    check_alpha(config.alpha);
    const double alpha = config.alpha;
    if (!(epsilon > 0)) throw std::invalid_argument("eps must be positive");
    if (static_cast<std::size_t>(x0.size()) != c.d) throw std::invalid_argument("x0 dimension does not match coefficients");
    if (g.dim() != c.k) throw std::invalid_argument("driver channels do not match coefficients");
    if (!tube.is_convex()) throw std::invalid_argument("builder requires a convex tube");
    if (!tube.contains(t, x0)) throw std::invalid_argument("x0 is not in K(t)");

    const GridFunction gw = window(g, t, g.grid().t1);
    const std::size_t n = gw.size();
    const double h = gw.step();
    const double horizon = gw.grid().t1 - t;
    const double mu = 1.0 - alpha;
    const DriverKernel K(gw, alpha);

    ApproximateSolution out;
    out.epsilon = epsilon;
    if (config.B0) {
        out.B0 = *config.B0;
    } else {
        const GridFunction ref = solve_euler(c, gw, x0, t, gw.grid().t1);
        out.B0 = x0.norm() + 1.0 + 2.0 * holder_norm(ref, mu, t, gw.grid().t1);
    }
    out.ledger = compute_ledger(c, alpha, K.lambda(0, n - 1), horizon, out.B0, config.gamma);
    out.D0 = out.ledger.D0;
    const double gamma = out.ledger.gamma;
    const double budget = out.ledger.G_tilde0;

    const auto d = static_cast<Eigen::Index>(c.d);
    const auto dk = static_cast<Eigen::Index>(c.d * c.k);
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(ix(n), d);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(ix(n), dk);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(ix(n), d);
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(ix(n), d);
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(ix(n), dk);
    Eigen::MatrixXd Xi = Eigen::MatrixXd::Zero(ix(n), d);

    auto set_node = [&](std::size_t j, const Eigen::VectorXd& x) {
        const double s = gw.time(j);
        X.row(ix(j)) = x.transpose();
        S.row(ix(j)) = flat_sigma(c, s, x);
        B.row(ix(j)) = c.b(s, x).transpose();
        if (j > 0) F.row(ix(j)) = F.row(ix(j - 1)) + 0.5 * h * (B.row(ix(j - 1)) + B.row(ix(j)));
        E.row(ix(j)) = scaled_left_row(S, K.weights(), 0, j);
        const Eigen::VectorXd G = K.value_at(E, 0, j);
        Xi.row(ix(j)) = X.row(ix(j)) - x0.transpose() - F.row(ix(j)) - G.transpose();
    };
    set_node(0, x0);

    double holder_X = 0.0, sup_X = x0.norm(), holder_xi = 0.0;
    std::size_t cur = 0;
    double g_tilde = 0.0;
    while (cur + 1 < n) {
        if (out.steps >= config.max_steps) throw ResolutionError("step limit reached at t = " + fmt(gw.time(cur)));
        const double tc = gw.time(cur);
        const Eigen::VectorXd xc = X.row(ix(cur)).transpose();
        const double hb = select_step(epsilon, out.ledger, alpha, c.beta, gamma, horizon, g_tilde);
        std::size_t m = std::min(cells_of(hb, h), n - 1 - cur);
        if (m == 0)
            throw ResolutionError("grid too coarse: eps = " + fmt(epsilon) + " needs a step below h = " + fmt(h) +
                                  " at t = " + fmt(tc));

        const ContingencyCertificate cert =
            contingency_check(tc, xc, c, gw, tube, static_cast<double>(m) * h, alpha, gamma, budget);
        if (!cert.holds && cert.first_violation <= 1) {
            Violation v;
            v.time = tc;
            v.point = xc;
            v.q_growth_exponent = cert.growth_exponent;
            const std::size_t fit = std::min(kFitNodes, n - 1 - cur);
            if (m < fit)
                v.q_growth_exponent =
                    contingency_check(tc, xc, c, gw, tube, static_cast<double>(fit) * h, alpha, gamma, budget).growth_exponent;
            v.G_tilde_measured = cert.G_tilde_R;
            v.budget = budget;
            out.violations.push_back(std::move(v));
            out.certificates.push_back({tc, cert.h_bar, cert.G_R, cert.G_tilde_R, false, 0});
            break;
        }
        std::size_t accept = m;
        if (!cert.holds) {
            accept = cert.first_violation - 1;
            ++out.partial_accepts;
        }
        // G~ measured on the accepted prefix, then the step inequality with it
        auto prefix_growth = [&](std::size_t len) {
            double best = 0.0;
            for (std::size_t j = 1; j <= len; ++j)
                best = std::max(best, cert.Q.values().row(ix(j)).norm() / std::pow(static_cast<double>(j) * h, 1.0 + gamma));
            return best;
        };
        const double mexp = std::min(c.beta - alpha, 1.0 - 2.0 * alpha);
        double gt = prefix_growth(accept);
        while (accept > 1) {
            const double hm = static_cast<double>(accept) * h;
            const double lhs = out.ledger.CR1 * std::pow(hm, 1.0 - alpha) + out.ledger.CR2 * std::pow(hm, mexp) +
                               gt * std::pow(hm, gamma);
            if (lhs <= epsilon) break;
            accept /= 2;
            ++out.halvings;
            gt = prefix_growth(accept);
        }
        g_tilde = std::max(g_tilde, gt);

        const Eigen::VectorXd bc = c.b(tc, xc);
        const Eigen::MatrixXd sc = c.sigma(tc, xc);
        std::size_t done = 0;
        for (std::size_t j = 1; j <= accept; ++j) {
            const std::size_t node = cur + j;
            const double s = gw.time(node);
            const Eigen::VectorXd P = xc + bc * (s - tc) + sc * (gw.row(node) - gw.row(cur));
            set_node(node, P + cert.Q.row(j));
            const double xi_norm = Xi.row(ix(node)).norm();
            const double allowed = epsilon * (s - t);
            if (xi_norm > allowed * (1.0 + 1e-9) + 1e-13) break;
            done = j;
        }
        if (done == 0)
            throw ResolutionError("|xi| exceeds eps (s - t) one step after t = " + fmt(tc) + "; refine the driver grid");
        if (done < accept) ++out.partial_accepts;

        for (std::size_t j = cur + 1; j <= cur + done; ++j) {
            holder_X = std::max(holder_X, holder_to(X, 0, j, h, mu));
            sup_X = std::max(sup_X, X.row(ix(j)).norm());
            holder_xi = std::max(holder_xi, holder_to(Xi, 0, j, h, mu));
            out.max_xi_ratio = std::max(out.max_xi_ratio, Xi.row(ix(j)).norm() / (epsilon * (gw.time(j) - t)));
        }
        out.B0_measured = sup_X + holder_X;
        if (out.B0_measured > out.B0)
            throw BudgetError("Holder norm " + fmt(out.B0_measured) + " exceeds the radius budget " + fmt(out.B0) +
                              " at t = " + fmt(gw.time(cur + done)));
        out.certificates.push_back({tc, cert.h_bar, cert.G_R, cert.G_tilde_R, cert.holds, done});
        cur += done;
        ++out.steps;
    }

    const std::size_t last = cur;
    const UniformGrid grid(t, gw.time(last), last + 1);
    if (last == 0) {
        out.X = GridFunction();
        out.xi = GridFunction();
    } else {
        out.X = GridFunction(grid, X.topRows(ix(last + 1)));
        out.xi = GridFunction(grid, Xi.topRows(ix(last + 1)));
    }
    out.D0_measured = holder_xi;
    out.viable = out.violations.empty() && last + 1 == n;
    out.xi_bound_ok = out.max_xi_ratio <= 1.0 + 1e-9;
    out.budget_ok = out.B0_measured <= out.B0;
    out.membership_ok = true;
    for (std::size_t j = 0; j <= last; ++j)
        if (!tube.contains(gw.time(j), X.row(ix(j)).transpose())) out.membership_ok = false;
    return out;
}

RefineReport refine_to_limit(double t, const Eigen::VectorXd& x0, const CoefficientPair& c, const GridFunction& g,
                             const ConstraintTube& tube, const std::vector<double>& eps_sequence,
                             const ViabilityConfig& config) {
    if (eps_sequence.empty()) throw std::invalid_argument("refinement needs at least one eps value");
    for (std::size_t i = 0; i < eps_sequence.size(); ++i) {
        if (!(eps_sequence[i] > 0)) throw std::invalid_argument("eps values must be positive");
        if (i > 0 && !(eps_sequence[i] < eps_sequence[i - 1]))
            throw std::invalid_argument("eps sequence must be strictly decreasing");
    }
    RefineReport rep;
    rep.eps = eps_sequence;
    rep.target_exponent = 0.5 - config.alpha;
    for (double eps : eps_sequence) {
        ApproximateSolution s = build_viable_solution(t, x0, c, g, tube, eps, config);
        if (!s.viable) throw ConvergenceError("build for eps = " + fmt(eps) + " stopped at a violation", rep);
        rep.builds.push_back(std::move(s));
    }
    const double p = 0.5 - config.alpha;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i + 1 < rep.builds.size(); ++i) {
        const auto& A = rep.builds[i];
        const auto& Bb = rep.builds[i + 1];
        double dist = 0.0;
        for (Eigen::Index r = 0; r < A.X.values().rows(); ++r)
            dist = std::max(dist, (A.X.values().row(r) - Bb.X.values().row(r)).norm());
        rep.distances.push_back(dist);
        const EstimateLedger& L = Bb.ledger;
        const double e = rep.eps[i], eta = rep.eps[i + 1];
        const double log_bound = std::log(2.0 * L.C_xi) + L.lambda_bar * L.T + std::log(std::pow(e, p) + std::pow(eta, p));
        rep.bounds.push_back(std::exp(log_bound));
        lx.push_back(e);
        ly.push_back(dist);
    }
    rep.fitted_exponent = log_slope(lx, ly);
    for (std::size_t i = 1; i < rep.distances.size(); ++i)
        if (rep.distances[i] > 1.1 * rep.distances[i - 1] + 1e-12) rep.monotone = false;
    rep.finest = rep.builds.back().X;
    if (!rep.monotone) throw ConvergenceError("successive distances are not decreasing", rep);
    return rep;
}

InvarianceReport invariance_sweep(const GridFunction& X, const ConstraintTube& tube) {
    InvarianceReport rep;
    rep.nodes = X.size();
    for (std::size_t i = 0; i < X.size(); ++i) {
        const Eigen::VectorXd x = X.row(i);
        rep.max_signed_distance = std::max(rep.max_signed_distance, tube.signed_distance(X.time(i), x));
        if (rep.pass && !tube.contains(X.time(i), x)) {
            rep.pass = false;
            rep.first_exit = i;
        }
    }
    return rep;
}

}  // namespace fracvia
