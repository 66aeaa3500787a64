#include "fracvia/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fracvia {

Eigen::VectorXd CoefficientPair::b(double t, const Eigen::VectorXd& x) const {
    Eigen::VectorXd v = drift(t, x);
    if (static_cast<std::size_t>(v.size()) != d) throw std::runtime_error("drift returned wrong dimension");
    if (!v.allFinite()) throw std::runtime_error("drift evaluation is not finite");
    return v;
}

Eigen::MatrixXd CoefficientPair::sigma(double t, const Eigen::VectorXd& x) const {
    Eigen::MatrixXd m = diffusion(t, x);
    if (static_cast<std::size_t>(m.rows()) != d || static_cast<std::size_t>(m.cols()) != k)
        throw std::runtime_error("diffusion returned wrong shape");
    if (!m.allFinite()) throw std::runtime_error("diffusion evaluation is not finite");
    return m;
}

std::vector<Eigen::MatrixXd> CoefficientPair::grad_sigma(double t, const Eigen::VectorXd& x) const {
    if (gradient) return gradient(t, x);
    std::vector<Eigen::MatrixXd> out(d);
    const double step = 1e-6 * (1.0 + x.norm());
    for (std::size_t l = 0; l < d; ++l) {
        Eigen::VectorXd xp = x, xm = x;
        xp(static_cast<Eigen::Index>(l)) += step;
        xm(static_cast<Eigen::Index>(l)) -= step;
        out[l] = (sigma(t, xp) - sigma(t, xm)) / (2.0 * step);
    }
    return out;
}

double CoefficientPair::M0T(double T) const {
    return sigma(0.0, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d))).norm() + M0 + M0 * T;
}

double CoefficientPair::alpha0() const { return std::min({0.5, beta, delta / (1.0 + delta)}); }

void CoefficientPair::validate() const {
    if (d == 0 || k == 0) throw std::invalid_argument("coefficient dimensions must be positive");
    if (!drift || !diffusion || !MR || !LR) throw std::invalid_argument("coefficient maps are not set");
    if (M0 < 0 || L0 < 0) throw std::invalid_argument("constants must be nonnegative");
    for (double e : {beta, delta, mu})
        if (!(e > 0 && e <= 1)) throw std::invalid_argument("exponents must lie in (0, 1]");
}

CoefficientPair linear_coefficients(double a, double c, double s, double s0, std::size_t d) {
    CoefficientPair p;
    p.name = "linear";
    p.d = d;
    p.k = d;
    p.drift = [a, c](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return (a * x.array() + c).matrix(); };
    p.diffusion = [s, s0](double, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        return (s * x.array() + s0).matrix().asDiagonal();
    };
    p.gradient = [s, d](double, const Eigen::VectorXd&) {
        std::vector<Eigen::MatrixXd> g(d, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
        for (std::size_t l = 0; l < d; ++l) g[l](static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)) = s;
        return g;
    };
    const double cn = std::abs(c) * std::sqrt(static_cast<double>(d));
    p.M0 = std::abs(s);
    p.L0 = std::max(std::abs(a), cn);
    p.MR = [](double) { return 0.0; };
    p.LR = [a](double) { return std::abs(a); };
    p.params = {{"a", a}, {"c", c}, {"s", s}, {"s0", s0}, {"d", static_cast<double>(d)}};
    return p;
}

CoefficientPair sin_coefficients(double a, double c, double amp) {
    CoefficientPair p;
    p.name = "sin";
    p.drift = [a, c](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return (a * x.array() + c).matrix(); };
    p.diffusion = [amp](double, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        return Eigen::MatrixXd::Constant(1, 1, amp * std::sin(x(0)));
    };
    p.gradient = [amp](double, const Eigen::VectorXd& x) {
        return std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Constant(1, 1, amp * std::cos(x(0)))};
    };
    p.M0 = std::abs(amp);
    p.L0 = std::max(std::abs(a), std::abs(c));
    p.MR = [amp](double) { return std::abs(amp); };
    p.LR = [a](double) { return std::abs(a); };
    p.params = {{"a", a}, {"c", c}, {"amp", amp}};
    return p;
}

CoefficientPair ball_control_coefficients(double kappa, double s0, double rho) {
    if (!(rho > 0)) throw std::invalid_argument("ball radius must be positive");
    CoefficientPair p;
    p.name = "ball-control";
    p.drift = [kappa](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return -kappa * x; };
    p.diffusion = [s0, rho](double, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        const double ax = std::abs(x(0));
        const double v = ax <= rho ? s0 * (1.0 - ax * ax / (rho * rho)) : -2.0 * s0 * (ax - rho) / rho;
        return Eigen::MatrixXd::Constant(1, 1, v);
    };
    p.gradient = [s0, rho](double, const Eigen::VectorXd& x) {
        const double ax = std::abs(x(0));
        const double sg = x(0) < 0 ? -1.0 : 1.0;
        const double v = ax <= rho ? -2.0 * s0 * x(0) / (rho * rho) : -2.0 * s0 * sg / rho;
        return std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Constant(1, 1, v)};
    };
    p.M0 = 2.0 * std::abs(s0) / rho;
    p.L0 = std::abs(kappa);
    p.MR = [s0, rho](double) { return 2.0 * std::abs(s0) / (rho * rho); };
    p.LR = [kappa](double) { return std::abs(kappa); };
    p.params = {{"kappa", kappa}, {"s0", s0}, {"rho", rho}};
    return p;
}

CoefficientPair constant_noise_coefficients(double kappa, double s1) {
    CoefficientPair p;
    p.name = "constant-noise";
    p.drift = [kappa](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return -kappa * x; };
    p.diffusion = [s1](double, const Eigen::VectorXd&) -> Eigen::MatrixXd { return Eigen::MatrixXd::Constant(1, 1, s1); };
    p.gradient = [](double, const Eigen::VectorXd&) { return std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Zero(1, 1)}; };
    p.M0 = 0.0;
    p.L0 = std::abs(kappa);
    p.MR = [](double) { return 0.0; };
    p.LR = [kappa](double) { return std::abs(kappa); };
    p.params = {{"kappa", kappa}, {"s1", s1}};
    return p;
}

CoefficientPair zero_coefficients(std::size_t d, std::size_t k) {
    CoefficientPair p;
    p.name = "none";
    p.d = d;
    p.k = k;
    p.drift = [d](double, const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d)); };
    p.diffusion = [d, k](double, const Eigen::VectorXd&) -> Eigen::MatrixXd {
        return Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k));
    };
    p.gradient = [d, k](double, const Eigen::VectorXd&) {
        return std::vector<Eigen::MatrixXd>(d, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k)));
    };
    p.MR = [](double) { return 0.0; };
    p.LR = [](double) { return 0.0; };
    p.params = {{"d", static_cast<double>(d)}, {"k", static_cast<double>(k)}};
    return p;
}

std::vector<std::string> builtin_names() { return {"linear", "sin", "ball-control", "constant-noise", "none"}; }

std::map<std::string, double> builtin_defaults(const std::string& name) {
    if (name == "linear") return {{"a", 0.0}, {"c", 0.0}, {"s", 0.5}, {"s0", 0.0}, {"d", 1}};
    if (name == "sin") return {{"a", -1.0}, {"c", 0.0}, {"amp", 1.0}};
    if (name == "ball-control") return {{"kappa", 1.0}, {"s0", 0.5}, {"rho", 2.0}};
    if (name == "constant-noise") return {{"kappa", 1.0}, {"s1", 1.0}};
    if (name == "none") return {{"d", 1}, {"k", 1}};
    throw std::invalid_argument("unknown builtin coefficients: " + name);
}

CoefficientPair make_coefficients(const std::string& name, const std::map<std::string, double>& params) {
    auto p = builtin_defaults(name);
    for (const auto& [key, v] : params) {
        if (!p.count(key)) throw std::invalid_argument("parameter '" + key + "' is not used by " + name);
        p[key] = v;
    }
    auto dim = [](double v) {
        if (!(v >= 1) || v != std::floor(v)) throw std::invalid_argument("dimension must be a positive integer");
        return static_cast<std::size_t>(v);
    };
    if (name == "linear") return linear_coefficients(p["a"], p["c"], p["s"], p["s0"], dim(p["d"]));
    if (name == "sin") return sin_coefficients(p["a"], p["c"], p["amp"]);
    if (name == "ball-control") return ball_control_coefficients(p["kappa"], p["s0"], p["rho"]);
    if (name == "constant-noise") return constant_noise_coefficients(p["kappa"], p["s1"]);
    return zero_coefficients(dim(p["d"]), dim(p["k"]));
}

namespace {

double frob_diff(const std::vector<Eigen::MatrixXd>& a, const std::vector<Eigen::MatrixXd>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]).squaredNorm();
    return std::sqrt(acc);
}

}  // namespace

AssumptionReport check_assumptions(const CoefficientPair& c, double alpha, double hurst, double T, double radius,
                                   int lattice) {
    c.validate();
    AssumptionReport rep;
    auto gate = [&](std::string name, double margin) {
        AssumptionGate g{std::move(name), margin, margin > 0};
        rep.gates.push_back(g);
    };
    const double a0 = c.alpha0();
    gate("1-H<beta", c.beta - (1.0 - hurst));
    gate("delta>(1-H)/H", c.delta - (1.0 - hurst) / hurst);
    gate("1-H<alpha", alpha - (1.0 - hurst));
    gate("alpha<alpha0", a0 - alpha);
    gate("1-mu<alpha", alpha - (1.0 - c.mu));
    gate("mu>1-alpha0", c.mu - (1.0 - a0));

    // lattice of times and points
    const std::size_t d = c.d;
    std::vector<double> times, coords;
    for (int i = 0; i < lattice; ++i) {
        const double u = lattice == 1 ? 0.0 : static_cast<double>(i) / (lattice - 1);
        times.push_back(u * T);
        coords.push_back(-radius + 2.0 * radius * u);
    }
    std::vector<Eigen::VectorXd> points;
    for (double x : coords) {
        Eigen::VectorXd p = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d), x);
        if (d > 1) p(0) = -x;
        points.push_back(p);
    }
    const double slack = 1e-9;
    const double M0T = c.M0T(T);
    double sigma_margin = 0.0, grad_margin = 0.0, drift_margin = 0.0, drift_growth_margin = 0.0, growth = 0.0;
    for (double t : times) {
        for (const auto& x : points) {
            const Eigen::MatrixXd sx = c.sigma(t, x);
            const Eigen::VectorXd bx = c.b(t, x);
            const auto gx = c.grad_sigma(t, x);
            growth = std::min(growth, M0T * (1.0 + x.norm()) * (1.0 + slack) - sx.norm());
            drift_growth_margin = std::min(drift_growth_margin, c.L0 * (1.0 + x.norm()) * (1.0 + slack) - bx.norm());
            for (double s : times) {
                for (const auto& y : points) {
                    if (s == t && (x - y).norm() == 0.0) continue;
                    const double R = std::max(x.norm(), y.norm());
                    const double dt = std::abs(t - s);
                    const double dx = (x - y).norm();
                    const double sig = (sx - c.sigma(s, y)).norm();
                    sigma_margin = std::min(sigma_margin, c.M0 * (dx + std::pow(dt, c.beta)) * (1.0 + slack) + slack - sig);
                    const double bd = (bx - c.b(s, y)).norm();
                    drift_margin = std::min(drift_margin, c.LR(R) * (std::pow(dt, c.mu) + dx) * (1.0 + slack) + slack - bd);
                    const auto gy = c.grad_sigma(s, y);
                    const double bound = c.MR(R) * (std::pow(dt, c.beta) + std::pow(dx, c.delta));
                    grad_margin = std::min(grad_margin, bound * (1.0 + 1e-4) + 1e-5 - frob_diff(gx, gy));
                }
            }
        }
    }
    gate("sigma-lipschitz", sigma_margin == 0.0 ? 1.0 : sigma_margin);
    gate("sigma-gradient-holder", grad_margin == 0.0 ? 1.0 : grad_margin);
    gate("sigma-growth", growth == 0.0 ? 1.0 : growth);
    gate("drift-lipschitz", drift_margin == 0.0 ? 1.0 : drift_margin);
    gate("drift-growth", drift_growth_margin == 0.0 ? 1.0 : drift_growth_margin);

    rep.tightest_margin = std::numeric_limits<double>::infinity();
    for (const auto& g : rep.gates) {
        if (!g.pass) {
            rep.pass = false;
            if (g.margin < rep.tightest_margin || rep.tightest_violation.empty()) {
                rep.tightest_margin = g.margin;
                rep.tightest_violation = g.name;
            }
        }
    }
    if (rep.pass) {
        for (const auto& g : rep.gates) rep.tightest_margin = std::min(rep.tightest_margin, g.margin);
    }
    return rep;
}

}  // namespace fracvia
