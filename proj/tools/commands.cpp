#include "commands.hpp"

#include "fracvia/coefficients.hpp"
#include "fracvia/fbm.hpp"
#include "fracvia/frac_calc.hpp"
#include "fracvia/fsde.hpp"
#include "fracvia/io.hpp"
#include "fracvia/rng.hpp"
#include "fracvia/tube.hpp"
#include "fracvia/viability.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>

namespace fracvia::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::vector<std::string> kParamNames = {"a", "c", "s", "s0", "amp", "kappa", "rho", "s1", "d", "k"};

struct CoeffOpts {
    std::string coeffs = "linear";
    std::map<std::string, std::optional<double>> params;
};

struct DriverOpts {
    std::string driver = "fbm";
    std::size_t n = 513;
    double t0 = 0.0;
    double t1 = 1.0;
    std::string method = "circulant";
};

struct Common {
    std::optional<std::uint64_t> seed;
    std::string manifest;
};

void add_coeff_options(CLI::App* sub, CoeffOpts& o) {
    sub->add_option("--coeffs", o.coeffs, "linear | builtin:<name> | none")->capture_default_str();
    for (const auto& name : kParamNames) sub->add_option("--" + name, o.params[name], "coefficient parameter " + name);
}

void add_driver_options(CLI::App* sub, DriverOpts& o) {
    sub->add_option("--driver", o.driver, "CSV file, or fbm[:<hurst>] sampled with --seed")->capture_default_str();
    sub->add_option("--n", o.n, "grid points of a sampled driver")->capture_default_str();
    sub->add_option("--t0", o.t0)->capture_default_str();
    sub->add_option("--t1", o.t1)->capture_default_str();
    sub->add_option("--fbm-method", o.method, "cholesky | circulant")->capture_default_str();
}

CoefficientPair build_coeffs(const CoeffOpts& o) {
    std::string name = o.coeffs;
    if (name.rfind("builtin:", 0) == 0) name = name.substr(8);
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw UsageError("unknown coefficients '" + o.coeffs + "'");
    std::map<std::string, double> p;
    for (const auto& [k, v] : o.params)
        if (v) p[k] = *v;
    return make_coefficients(name, p);
}

std::optional<double> driver_hurst(const DriverOpts& o) {
    if (o.driver == "fbm") return 0.75;
    if (o.driver.rfind("fbm:", 0) == 0) return std::stod(o.driver.substr(4));
    return std::nullopt;
}

GridFunction build_driver(const DriverOpts& o, const Common& common, std::size_t channels) {
    if (auto H = driver_hurst(o)) {
        if (!common.seed) throw UsageError("--seed is required for a sampled driver");
        FbmSpec spec;
        spec.hurst = *H;
        spec.channels = channels;
        spec.t0 = o.t0;
        spec.t1 = o.t1;
        spec.grid_points = o.n;
        spec.seed = *common.seed;
        return parse_fbm_method(o.method) == FbmMethod::cholesky ? sample_fbm_cholesky(spec) : sample_fbm_circulant(spec);
    }
    GridFunction g = read_csv(o.driver);
    if (g.dim() != channels) throw std::invalid_argument("driver has " + std::to_string(g.dim()) + " channels, expected " + std::to_string(channels));
    return g;
}

Eigen::VectorXd parse_point(const std::string& s, std::size_t d) {
    if (s.empty()) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.size() == 1 && d > 1) v.assign(d, v[0]);
    if (v.size() != d) throw UsageError("point '" + s + "' does not have dimension " + std::to_string(d));
    Eigen::VectorXd x(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) x(static_cast<Eigen::Index>(i)) = v[i];
    return x;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    return v;
}

Json vec_json(const Eigen::VectorXd& x) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back(json_number(x(i)));
    return a;
}

Json check_json(const CheckReport& rep) {
    Json a = Json::array();
    for (const auto& c : rep.checks)
        a.push_back({{"name", c.name},
                     {"lhs", json_number(c.lhs)},
                     {"rhs", json_number(c.rhs)},
                     {"constant_used", json_number(c.constant)},
                     {"pass", c.pass}});
    return a;
}

Json ledger_json(const EstimateLedger& L) {
    return {{"alpha", L.alpha},          {"T", L.T},
            {"Lambda", json_number(L.Lambda)}, {"R", L.R},
            {"gamma", L.gamma},          {"A1", L.A1},
            {"A2", L.A2},                {"C0b1", L.C0b1},
            {"C0b2", L.C0b2},            {"CRb3", L.CRb3},
            {"C0s1", L.C0s1},            {"C0s2", L.C0s2},
            {"CRs3", L.CRs3},            {"CR1", L.CR1},
            {"CR2", L.CR2},              {"CR3", L.CR3},
            {"CR4", L.CR4},              {"B0", L.B0},
            {"D0", L.D0},                {"G0", L.G0},
            {"G_tilde0", L.G_tilde0},    {"lambda0", json_number(L.lambda0)},
            {"lambda_bar", json_number(L.lambda_bar)}, {"C0", json_number(L.C0)},
            {"log_C0", json_number(L.log_C0)},         {"C_xi", json_number(L.C_xi)}};
}

Json gates_json(const AssumptionReport& r) {
    Json a = Json::array();
    for (const auto& g : r.gates) a.push_back({{"name", g.name}, {"margin", json_number(g.margin)}, {"pass", g.pass}});
    return {{"pass", r.pass}, {"tightest", r.tightest_violation}, {"tightest_margin", json_number(r.tightest_margin)}, {"gates", a}};
}

std::string path_csv(const GridFunction& f, std::size_t dim) {
    if (f.values().rows() == 0) {
        std::string s = "time";
        for (std::size_t c = 0; c < dim; ++c) s += ",ch" + std::to_string(c);
        return s + "\n";
    }
    return to_csv(f);
}

struct Outputs {
    std::vector<std::pair<std::string, std::string>> files;
    void write(const std::string& path, const std::string& text) {
        write_text(path, text);
        files.emplace_back(path, fnv1a_hex(text));
    }
};

void write_run_manifest(const std::string& sub, const std::vector<std::string>& args, CLI::App* app, const Common& common,
                        Json grid, const Outputs& outs, const std::string& fallback) {
    if (outs.files.empty() && common.manifest.empty()) return;
    RunManifest m;
    m.subcommand = sub;
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--help") continue;
        std::string v;
        for (const auto& r : opt->results()) v += (v.empty() ? "" : ",") + r;
        m.flags[opt->get_name()] = opt->get_expected_min() == 0 && v.empty() ? "true" : v;
    }
    m.argv = args;
    m.seed = common.seed;
    m.grid = std::move(grid);
    m.version = FRACVIA_VERSION;
    m.outputs = outs.files;
    const std::string path = !common.manifest.empty() ? common.manifest
                             : !outs.files.empty()    ? outs.files.front().first + ".manifest.json"
                                                      : fallback;
    write_manifest(path, m);
}

Json grid_json(const UniformGrid& g) { return {{"t0", g.t0}, {"t1", g.t1}, {"n", g.n}}; }

// ---- fbm -------------------------------------------------------------------

struct FbmOpts {
    double hurst = 0.75;
    std::size_t channels = 1;
    double t0 = 0.0, t1 = 1.0;
    std::size_t n = 256;
    std::size_t paths = 1;
    std::string method = "circulant";
    std::string out = "fbm.csv";
    bool long_format = false;
};

int cmd_fbm(const FbmOpts& o, const Common& common, const std::vector<std::string>& args, CLI::App* app) {
    if (!common.seed) throw UsageError("--seed is required for fbm");
    FbmSpec spec;
    spec.hurst = o.hurst;
    spec.channels = o.channels;
    spec.t0 = o.t0;
    spec.t1 = o.t1;
    spec.grid_points = o.n;
    spec.seed = *common.seed;
    spec.validate();
    const auto paths = sample_fbm_paths(spec, o.paths, parse_fbm_method(o.method));
    Outputs outs;
    if (o.long_format || o.paths == 1) {
        outs.write(o.out, o.long_format ? to_csv_long(paths) : to_csv(paths.front()));
    } else {
        const auto dot = o.out.rfind(".csv");
        const std::string stem = dot == std::string::npos ? o.out : o.out.substr(0, dot);
        for (std::size_t r = 0; r < paths.size(); ++r) outs.write(stem + "_rep" + std::to_string(r) + ".csv", to_csv(paths[r]));
    }
    write_run_manifest("fbm", args, app, common, grid_json(spec.grid()), outs, o.out + ".manifest.json");
    std::cout << "wrote " << outs.files.size() << " file(s), " << o.paths << " path(s)\n";
    return kExitOk;
}

// ---- calc ------------------------------------------------------------------

struct CalcOpts {
    std::string op;
    double alpha = 0.3;
    double lambda = 1.0;
    std::string in_f, in_g;
    std::string out;
};

bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

int cmd_calc(const CalcOpts& o, const Common& common, const std::vector<std::string>& args, CLI::App* app) {
    auto need = [](const std::string& p, const char* flag) {
        if (p.empty()) throw UsageError(std::string(flag) + " is required for this op");
        return read_csv(p);
    };
    Outputs outs;
    int code = kExitOk;
    std::string text;
    UniformGrid grid;
    if (o.op == "derivative-left") {
        const GridFunction f = need(o.in_f, "--in-f");
        grid = f.grid();
        text = to_csv(left_frac_derivative(f, o.alpha, f.grid().t0));
    } else if (o.op == "derivative-right") {
        const GridFunction g = need(o.in_g, "--in-g");
        grid = g.grid();
        text = to_csv(right_frac_derivative_real(g, o.alpha, g.grid().t1));
    } else if (o.op == "integral") {
        const GridFunction f = need(o.in_f, "--in-f"), g = need(o.in_g, "--in-g");
        grid = f.grid();
        text = to_csv(stieltjes_indefinite(f, g, o.alpha, f.grid().t0));
    } else if (o.op == "norms") {
        const GridFunction f = need(o.in_f, "--in-f");
        std::optional<GridFunction> g;
        if (!o.in_g.empty()) g = read_csv(o.in_g);
        grid = f.grid();
        const double t = f.grid().t0, T = f.grid().t1;
        const NormReport r = norm_report(f, g ? &*g : nullptr, o.alpha, o.lambda, 1.0 - o.alpha, std::min(1.0, 2.0 * o.alpha + 0.1), t, T);
        Json j = {{"alpha", o.alpha},
                  {"lambda", o.lambda},
                  {"norm_alpha_infty", json_number(r.norm_alpha_infty)},
                  {"norm_alpha_lambda", json_number(r.norm_alpha_lambda)},
                  {"norm_alpha_one", json_number(r.norm_alpha_one)},
                  {"holder_norm", json_number(r.holder_norm)},
                  {"sup_norm", json_number(r.sup_norm)},
                  {"delta_seminorm", json_number(r.delta_seminorm)}};
        if (g) j["lambda_alpha"] = json_number(r.lambda_alpha);
        text = j.dump(2) + "\n";
    } else if (o.op == "verify") {
        const GridFunction f = need(o.in_f, "--in-f"), g = need(o.in_g, "--in-g");
        grid = f.grid();
        const double t = f.grid().t0, T = f.grid().t1;
        CheckReport rep = verify_integral_bound(f, g, o.alpha, t, T);
        for (auto& c : verify_norm_bounds(f, g, o.alpha, o.lambda, t, T).checks) rep.checks.push_back(c);
        text = Json{{"checks", check_json(rep)}, {"pass", rep.pass()}}.dump(2) + "\n";
        if (!rep.pass()) code = kExitError;
    } else {
        throw UsageError("unknown --op '" + o.op + "'");
    }
    if (o.out.empty()) {
        std::cout << text;
    } else {
        outs.write(o.out, text);
    }
    write_run_manifest("calc", args, app, common, grid_json(grid), outs, "");
    return code;
}

// ---- solve -----------------------------------------------------------------

struct SolveOpts {
    CoeffOpts coeffs;
    DriverOpts driver;
    std::string x0;
    double alpha = 0.3;
    std::string method = "picard";
    std::string out = "solve.csv";
    std::string report;
    double tol = 1e-10;
};

int cmd_solve(const SolveOpts& o, const Common& common, const std::vector<std::string>& args, CLI::App* app) {
    if (o.method != "picard" && o.method != "euler" && o.method != "both") throw UsageError("--method must be picard, euler or both");
    const CoefficientPair c = build_coeffs(o.coeffs);
    const GridFunction g = build_driver(o.driver, common, c.k);
    const Eigen::VectorXd x0 = parse_point(o.x0, c.d);
    const double t = g.grid().t0, T = g.grid().t1;
    Outputs outs;
    Json rep;
    std::optional<GridFunction> picard, euler;
    if (o.method != "euler") {
        SolverConfig cfg;
        cfg.alpha = o.alpha;
        cfg.picard_tol = o.tol;
        const SolveResult r = solve_picard(c, g, x0, t, T, cfg);
        picard = r.path;
        rep["iterations"] = r.iterations;
        rep["residual"] = json_number(r.residual);
        rep["weight_lambda"] = json_number(r.lambda);
        rep["stitched"] = r.stitched;
        rep["pieces"] = r.pieces;
        outs.write(o.out, to_csv(r.path));
    }
    if (o.method != "picard") {
        euler = solve_euler(c, g, x0, t, T);
        const std::string p = o.method == "both" ? (ends_with(o.out, ".csv") ? o.out.substr(0, o.out.size() - 4) : o.out) + ".euler.csv" : o.out;
        outs.write(p, to_csv(*euler));
    }
    if (picard && euler) {
        double d = 0.0;
        for (Eigen::Index i = 0; i < picard->values().rows(); ++i)
            d = std::max(d, (picard->values().row(i) - euler->values().row(i)).norm());
        rep["picard_euler_sup_distance"] = d;
    }
    const GridFunction& X = picard ? *picard : *euler;
    Json bounds = Json::array();
    try {
        const EstimateLedger L = compute_ledger(c, o.alpha, lambda_alpha(g, o.alpha, t, T), T - t, x0.norm());
        rep["lambda0"] = json_number(L.lambda0);
        rep["ledger"] = ledger_json(L);
        const double lhs = holder_norm(X, 1.0 - o.alpha, t, T);
        const double log_rhs = log_apriori_holder_bound(x0, L);
        bounds.push_back({{"name", "apriori-holder"},
                          {"lhs", lhs},
                          {"rhs", json_number(apriori_holder_bound(x0, L))},
                          {"log_rhs", json_number(log_rhs)},
                          {"constant_used", json_number(L.C0)},
                          {"pass", std::log(lhs) <= log_rhs}});
    } catch (const std::domain_error& e) {
        rep["lambda0"] = nullptr;
        rep["ledger"] = nullptr;
        rep["ledger_error"] = e.what();
    }
    if (picard) {
        const double res = integral_residual(*picard, c, g, x0, o.alpha);
        bounds.push_back({{"name", "picard-residual"}, {"lhs", res}, {"rhs", 10.0 * o.tol}, {"constant_used", 10.0}, {"pass", res <= 10.0 * o.tol}});
    }
    rep["bounds_checked"] = bounds;
    if (!o.report.empty()) outs.write(o.report, rep.dump(2) + "\n");
    write_run_manifest("solve", args, app, common, grid_json(g.grid()), outs, "");
    std::cout << "solved on " << g.size() << " nodes\n";
    return kExitOk;
}

// ---- viability -------------------------------------------------------------

struct ViabilityOpts {
    CoeffOpts coeffs;
    DriverOpts driver;
    std::string tube = "ball:2";
    std::string x0;
    std::optional<double> epsilon;
    std::string eps_sweep;
    double alpha = 0.3;
    std::optional<double> gamma;
    std::string out = "viability.csv";
    std::string report;
};

Json solution_json(const ApproximateSolution& s) {
    Json certs = Json::array();
    for (const auto& c : s.certificates)
        certs.push_back({{"t", c.t}, {"h_bar", c.h_bar}, {"G_R", json_number(c.G_R)}, {"G_tilde_R", json_number(c.G_tilde_R)},
                         {"holds", c.holds}, {"accepted_nodes", c.accepted_nodes}});
    Json viol = Json::array();
    for (const auto& v : s.violations)
        viol.push_back({{"time", v.time}, {"point", vec_json(v.point)}, {"q_growth_exponent", json_number(v.q_growth_exponent)},
                        {"G_tilde_measured", json_number(v.G_tilde_measured)}, {"budget", json_number(v.budget)}});
    return {{"epsilon", s.epsilon},
            {"viable", s.viable},
            {"steps", s.steps},
            {"partial_accepts", s.partial_accepts},
            {"halvings", s.halvings},
            {"B0", s.B0},
            {"B0_measured", s.B0_measured},
            {"D0", json_number(s.D0)},
            {"D0_measured", s.D0_measured},
            {"max_xi_ratio", s.max_xi_ratio},
            {"xi_bound_ok", s.xi_bound_ok},
            {"membership_ok", s.membership_ok},
            {"budget_ok", s.budget_ok},
            {"violations", viol},
            {"certificates", certs},
            {"ledger", ledger_json(s.ledger)}};
}

Json rate_json(const RefineReport& r) {
    Json j = {{"eps", r.eps}, {"distances", r.distances}, {"fitted_exponent", json_number(r.fitted_exponent)},
              {"target_exponent", r.target_exponent}, {"monotone", r.monotone}};
    Json b = Json::array();
    for (double v : r.bounds) b.push_back(json_number(v));
    j["bounds"] = b;
    return j;
}

int cmd_viability(const ViabilityOpts& o, const Common& common, const std::vector<std::string>& args, CLI::App* app) {
    if (o.epsilon.has_value() == !o.eps_sweep.empty()) throw UsageError("give exactly one of --epsilon and --eps-sweep");
    const CoefficientPair c = build_coeffs(o.coeffs);
    const GridFunction g = build_driver(o.driver, common, c.k);
    const TubePtr tube = parse_tube(o.tube, c.d);
    const Eigen::VectorXd x0 = parse_point(o.x0, c.d);
    const double t = g.grid().t0;
    ViabilityConfig cfg;
    cfg.alpha = o.alpha;
    cfg.gamma = o.gamma;

    Json rep;
    rep["tube"] = tube->description();
    if (auto H = driver_hurst(o.driver)) {
        const AssumptionReport gates = check_assumptions(c, o.alpha, *H, g.grid().t1);
        rep["assumptions"] = gates_json(gates);
        if (!gates.pass) throw std::domain_error("assumption gate fails: " + gates.tightest_violation);
    }
    Outputs outs;
    int code = kExitOk;
    GridFunction path;
    if (o.epsilon) {
        const ApproximateSolution s = build_viable_solution(t, x0, c, g, *tube, *o.epsilon, cfg);
        rep["viable"] = s.viable;
        rep["violations"] = solution_json(s)["violations"];
        rep["certificates"] = solution_json(s)["certificates"];
        rep["builds"] = Json::array({solution_json(s)});
        rep["rate_fit"] = nullptr;
        path = s.X;
        if (!s.violations.empty()) code = kExitViolation;
    } else {
        const std::vector<double> eps = parse_list(o.eps_sweep);
        RefineReport r;
        try {
            r = refine_to_limit(t, x0, c, g, *tube, eps, cfg);
        } catch (const ConvergenceError& e) {
            r = e.report();
            rep["error"] = e.what();
            code = kExitError;
            for (const auto& b : r.builds)
                if (!b.violations.empty()) code = kExitViolation;
        }
        Json builds = Json::array(), viol = Json::array();
        bool viable = !r.builds.empty();
        for (const auto& b : r.builds) {
            Json sj = solution_json(b);
            for (const auto& v : sj["violations"]) viol.push_back(v);
            sj.erase("certificates");
            builds.push_back(sj);
            viable = viable && b.viable;
        }
        rep["viable"] = viable && code == kExitOk;
        rep["violations"] = viol;
        rep["certificates"] = r.builds.empty() ? Json::array() : solution_json(r.builds.back())["certificates"];
        rep["builds"] = builds;
        rep["rate_fit"] = rate_json(r);
        if (!r.builds.empty()) path = r.builds.back().X;
    }
    outs.write(o.out, path_csv(path, c.d));
    if (!o.report.empty()) outs.write(o.report, rep.dump(2) + "\n");
    write_run_manifest("viability", args, app, common, grid_json(g.grid()), outs, "");
    std::cout << (code == kExitViolation ? "viability violation detected\n" : code == kExitOk ? "viable\n" : "no convergence\n");
    return code;
}

// ---- verify-all ------------------------------------------------------------

struct VerifyOpts {
    std::size_t n = 512;
    std::size_t paths = 1000;
    std::size_t triples = 20;
    std::string report = "verify_all.json";
};

struct Row {
    std::string group, name;
    double lhs = 0, rhs = 0, constant = 0;
    bool pass = false;
};

GridFunction smooth_random(const UniformGrid& grid, std::size_t dim, NormalStream& rng) {
    Eigen::MatrixXd V(static_cast<Eigen::Index>(grid.n), static_cast<Eigen::Index>(dim));
    for (std::size_t c = 0; c < dim; ++c) {
        const double c0 = rng.next();
        double a[3], ph[3];
        for (int m = 0; m < 3; ++m) {
            a[m] = rng.next();
            ph[m] = 2.0 * std::numbers::pi * rng.uniform();
        }
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double x = grid.time(i);
            double v = c0;
            for (int m = 0; m < 3; ++m) v += a[m] * std::sin((m + 1) * std::numbers::pi * x + ph[m]) / (m + 1);
            V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return GridFunction(grid, V);
}

int cmd_verify_all(const VerifyOpts& o, const Common& common, const std::vector<std::string>& args, CLI::App* app) {
    if (!common.seed) throw UsageError("--seed is required for verify-all");
    const std::uint64_t seed = *common.seed;
    const auto t_start = std::chrono::steady_clock::now();
    std::vector<Row> rows;
    auto add_report = [&](const std::string& group, const CheckReport& rep, const std::string& suffix) {
        for (const auto& c : rep.checks) rows.push_back({group, c.name + suffix, c.lhs, c.rhs, c.constant, c.pass});
    };

    for (double H : {0.6, 0.75, 0.9}) {
        for (FbmMethod m : {FbmMethod::cholesky, FbmMethod::circulant}) {
            FbmSpec spec;
            spec.hurst = H;
            spec.grid_points = 16;
            spec.seed = seed;
            const auto paths = sample_fbm_paths(spec, o.paths, m);
            const auto rep = increment_moment_check(paths, H);
            double zmax = 0.0;
            for (const auto& l : rep.lags) zmax = std::max(zmax, std::abs(l.z));
            std::ostringstream name;
            name << "increment-moments H=" << H << " " << to_string(m);
            rows.push_back({"fbm", name.str(), zmax, 4.0, 4.0, !rep.any_flagged});
        }
    }

    const UniformGrid grid(0.0, 1.0, o.n);
    NormalStream rng(stream_seed(seed, 0, 7));
    const GridFunction one(grid, Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(o.n), 1));
    double worst_cal = 0.0;
    for (std::size_t i = 0; i < o.triples; ++i) {
        const GridFunction g = smooth_random(grid, 1, rng);
        const double I = stieltjes_integral(one, g, 0.3, 0.0, 1.0)(0);
        const double exact = g(o.n - 1) - g(0);
        worst_cal = std::max(worst_cal, std::abs(I - exact) / std::max(std::abs(exact), 1e-12));
    }
    rows.push_back({"frac-calc", "integral-of-one", worst_cal, 10.0 / static_cast<double>(o.n), 10.0, worst_cal < 10.0 / static_cast<double>(o.n)});

    const double alpha = 0.3;
    const CoefficientPair lin = linear_coefficients(-0.5, 0.2, 0.4, 0.1, 1);
    for (std::size_t i = 0; i < o.triples; ++i) {
        const GridFunction f = smooth_random(grid, 1, rng);
        const GridFunction h = smooth_random(grid, 1, rng);
        const GridFunction g = smooth_random(grid, 1, rng);
        const std::string tag = " #" + std::to_string(i);
        add_report("frac-calc", verify_integral_bound(f, g, alpha, 0.0, 1.0), tag);
        for (double lambda : {1.0, 4.0, 16.0}) {
            std::ostringstream s;
            s << tag << " lambda=" << lambda;
            add_report("frac-calc", verify_norm_bounds(f, g, alpha, lambda, 0.0, 1.0), s.str());
            add_report("fsde", verify_operator_estimates(f, h, g, lin, alpha, lambda, 0.0, 1.0), s.str());
        }
    }

    FbmSpec dspec;
    dspec.hurst = 0.75;
    dspec.grid_points = o.n;
    dspec.seed = seed;
    const GridFunction fbm = sample_fbm_circulant(dspec);
    const CoefficientPair sinc = sin_coefficients(-1.0, 0.0, 0.5);
    for (const auto& [label, c] : {std::pair{"linear", lin}, std::pair{"sin", sinc}}) {
        SolverConfig cfg;
        cfg.alpha = alpha;
        const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, 0.5);
        const SolveResult r = solve_picard(c, fbm, x0, 0.0, 1.0, cfg);
        add_report("fsde", verify_aux_estimates(r.path, c, fbm, alpha, 0.0), std::string(" ") + label);
        const EstimateLedger L = compute_ledger(c, alpha, lambda_alpha(fbm, alpha, 0.0, 1.0), 1.0, x0.norm());
        const double lhs = holder_norm(r.path, 1.0 - alpha, 0.0, 1.0);
        const double log_rhs = log_apriori_holder_bound(x0, L);
        rows.push_back({"fsde", std::string("apriori-holder ") + label, lhs, apriori_holder_bound(x0, L), L.C0, std::log(lhs) <= log_rhs});
    }

    bool all = true;
    Json table = Json::array();
    std::size_t failed = 0;
    for (const auto& r : rows) {
        all = all && r.pass;
        if (!r.pass) ++failed;
        table.push_back({{"group", r.group}, {"name", r.name}, {"lhs", json_number(r.lhs)}, {"rhs", json_number(r.rhs)},
                         {"constant_used", json_number(r.constant)}, {"pass", r.pass}});
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    std::size_t shown = 0;
    for (const auto& r : rows) {
        if (r.pass && shown >= 12) continue;
        std::printf("%-5s %-10s %-44s lhs=%-12.5g rhs=%-12.5g\n", r.pass ? "PASS" : "FAIL", r.group.c_str(), r.name.c_str(), r.lhs, r.rhs);
        ++shown;
    }
    std::printf("%zu checks, %zu failed, %.1f s\n", rows.size(), failed, secs);
    Outputs outs;
    outs.write(o.report, Json{{"pass", all}, {"checks", table}}.dump(2) + "\n");
    write_run_manifest("verify-all", args, app, common, grid_json(grid), outs, "");
    return all ? kExitOk : kExitError;
}

int replay(const std::string& manifest_path) {
    const RunManifest m = read_manifest(manifest_path);
    if (m.argv.empty()) throw UsageError("manifest has no argv to replay");
    std::vector<std::string> args = m.argv;
    const int code = run(args);
    bool same = true;
    for (const auto& [path, digest] : m.outputs) {
        const std::string now = file_digest(path);
        std::cout << (now == digest ? "same " : "DIFF ") << path << " " << now << "\n";
        same = same && now == digest;
    }
    if (code != kExitOk && code != kExitViolation) return code;
    return same ? kExitOk : kExitError;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"fracvia: fractional SDEs driven by Holder paths and their viability", "fracvia"};
    app.set_version_flag("--version", std::string(FRACVIA_VERSION));
    Common common;
    std::string replay_path;
    app.add_option("--replay", replay_path, "re-run a manifest and compare output digests");
    app.require_subcommand(0, 1);

    FbmOpts fo;
    CLI::App* fbm = app.add_subcommand("fbm", "sample fractional Brownian motion paths");
    fbm->add_option("--hurst", fo.hurst)->required();
    fbm->add_option("--channels", fo.channels)->capture_default_str();
    fbm->add_option("--t0", fo.t0)->capture_default_str();
    fbm->add_option("--t1", fo.t1)->capture_default_str();
    fbm->add_option("--n", fo.n, "grid points")->capture_default_str();
    fbm->add_option("--paths", fo.paths)->capture_default_str();
    fbm->add_option("--method", fo.method, "cholesky | circulant")->capture_default_str();
    fbm->add_option("--out", fo.out)->capture_default_str();
    fbm->add_flag("--long", fo.long_format, "single file with a rep column");

    CalcOpts co;
    CLI::App* calc = app.add_subcommand("calc", "fractional derivatives, integrals, norms and bound checks");
    calc->add_option("--op", co.op, "derivative-left | derivative-right | integral | norms | verify")->required();
    calc->add_option("--alpha", co.alpha)->capture_default_str();
    calc->add_option("--lambda", co.lambda)->capture_default_str();
    calc->add_option("--in-f", co.in_f);
    calc->add_option("--in-g", co.in_g);
    calc->add_option("--out", co.out, "CSV or JSON file; stdout when empty");

    SolveOpts so;
    CLI::App* solve = app.add_subcommand("solve", "solve the integral equation pathwise");
    add_coeff_options(solve, so.coeffs);
    add_driver_options(solve, so.driver);
    solve->add_option("--x0", so.x0, "comma separated initial point");
    solve->add_option("--alpha", so.alpha)->capture_default_str();
    solve->add_option("--method", so.method, "picard | euler | both")->capture_default_str();
    solve->add_option("--tol", so.tol)->capture_default_str();
    solve->add_option("--out", so.out)->capture_default_str();
    solve->add_option("--report", so.report);

    ViabilityOpts vo;
    CLI::App* via = app.add_subcommand("viability", "build eps-approximate viable solutions");
    add_coeff_options(via, vo.coeffs);
    add_driver_options(via, vo.driver);
    via->add_option("--tube", vo.tube, "ball:<rho> | box:<lo>,<hi> | halfspace:<a..>,<c> | moving-ball:<r0>,<r1>")
        ->capture_default_str();
    via->add_option("--x0", vo.x0);
    via->add_option("--epsilon", vo.epsilon);
    via->add_option("--eps-sweep", vo.eps_sweep, "comma separated, strictly decreasing");
    via->add_option("--alpha", vo.alpha)->capture_default_str();
    via->add_option("--gamma", vo.gamma);
    via->add_option("--out", vo.out)->capture_default_str();
    via->add_option("--report", vo.report);

    VerifyOpts verify_opts;
    CLI::App* va = app.add_subcommand("verify-all", "run the inequality battery");
    va->add_option("--n", verify_opts.n)->capture_default_str();
    va->add_option("--paths", verify_opts.paths)->capture_default_str();
    va->add_option("--triples", verify_opts.triples)->capture_default_str();
    va->add_option("--report", verify_opts.report)->capture_default_str();

    for (CLI::App* sub : {fbm, calc, solve, via, va}) {
        sub->add_option("--seed", common.seed, "master seed");
        sub->add_option("--manifest", common.manifest, "manifest path (default: <first output>.manifest.json)");
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (!replay_path.empty()) {
            if (app.get_subcommands().size() > 0) throw UsageError("--replay takes no subcommand");
            return replay(replay_path);
        }
        if (fbm->parsed()) return cmd_fbm(fo, common, args, fbm);
        if (calc->parsed()) return cmd_calc(co, common, args, calc);
        if (solve->parsed()) return cmd_solve(so, common, args, solve);
        if (via->parsed()) return cmd_viability(vo, common, args, via);
        if (va->parsed()) return cmd_verify_all(verify_opts, common, args, va);
        std::cerr << app.help();
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace fracvia::cli
