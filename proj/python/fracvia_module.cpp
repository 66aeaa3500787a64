#include "commands.hpp"

#include "fracvia/coefficients.hpp"
#include "fracvia/fbm.hpp"
#include "fracvia/frac_calc.hpp"
#include "fracvia/fsde.hpp"
#include "fracvia/tube.hpp"
#include "fracvia/viability.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fracvia;

namespace {

GridFunction on_grid(const Eigen::MatrixXd& values, double t0, double t1) {
    return GridFunction(UniformGrid(t0, t1, static_cast<std::size_t>(values.rows())), values);
}

py::dict solution_dict(const ApproximateSolution& s) {
    py::list viol;
    for (const auto& v : s.violations) {
        py::dict d;
        d["time"] = v.time;
        d["point"] = v.point;
        d["q_growth_exponent"] = v.q_growth_exponent;
        d["G_tilde_measured"] = v.G_tilde_measured;
        d["budget"] = v.budget;
        viol.append(d);
    }
    py::dict out;
    out["epsilon"] = s.epsilon;
    out["viable"] = s.viable;
    out["times"] = s.X.grid().times();
    out["X"] = s.X.values();
    out["xi"] = s.xi.values();
    out["violations"] = viol;
    out["steps"] = s.steps;
    out["max_xi_ratio"] = s.max_xi_ratio;
    out["membership_ok"] = s.membership_ok;
    out["xi_bound_ok"] = s.xi_bound_ok;
    out["B0"] = s.B0;
    out["B0_measured"] = s.B0_measured;
    out["gamma"] = s.ledger.gamma;
    return out;
}

}  // namespace

PYBIND11_MODULE(_fracvia, m) {
    m.doc() = "Fractional calculus, pathwise fractional SDE solvers and viability checks.";
    m.attr("__version__") = FRACVIA_VERSION;

    m.def("covariance", &covariance, py::arg("s"), py::arg("t"), py::arg("hurst"));

    m.def(
        "sample_fbm",
        [](double hurst, std::size_t n, std::uint64_t seed, std::size_t paths, std::size_t channels,
           const std::string& method, double t0, double t1) {
            FbmSpec spec;
            spec.hurst = hurst;
            spec.grid_points = n;
            spec.seed = seed;
            spec.channels = channels;
            spec.t0 = t0;
            spec.t1 = t1;
            std::vector<Eigen::MatrixXd> out;
            for (const auto& p : sample_fbm_paths(spec, paths, parse_fbm_method(method))) out.push_back(p.values());
            return out;
        },
        py::arg("hurst"), py::arg("n"), py::arg("seed"), py::arg("paths") = 1, py::arg("channels") = 1,
        py::arg("method") = "circulant", py::arg("t0") = 0.0, py::arg("t1") = 1.0,
        "List of (n, channels) arrays, one per path.");

    m.def(
        "stieltjes_integral",
        [](const Eigen::MatrixXd& f, const Eigen::MatrixXd& g, double alpha, double t0, double t1) {
            return stieltjes_integral(on_grid(f, t0, t1), on_grid(g, t0, t1), alpha, t0, t1);
        },
        py::arg("f"), py::arg("g"), py::arg("alpha"), py::arg("t0") = 0.0, py::arg("t1") = 1.0);

    m.def(
        "lambda_alpha",
        [](const Eigen::MatrixXd& g, double alpha, double t0, double t1) {
            return lambda_alpha(on_grid(g, t0, t1), alpha, t0, t1);
        },
        py::arg("g"), py::arg("alpha"), py::arg("t0") = 0.0, py::arg("t1") = 1.0);

    m.def(
        "holder_norm",
        [](const Eigen::MatrixXd& f, double mu, double t0, double t1) { return holder_norm(on_grid(f, t0, t1), mu, t0, t1); },
        py::arg("f"), py::arg("mu"), py::arg("t0") = 0.0, py::arg("t1") = 1.0);

    m.def("builtin_names", &builtin_names);

    m.def(
        "solve",
        [](const std::string& coeffs, const std::map<std::string, double>& params, const Eigen::MatrixXd& driver,
           const Eigen::VectorXd& x0, double alpha, const std::string& method, double t0, double t1) {
            const CoefficientPair c = make_coefficients(coeffs, params);
            const GridFunction g = on_grid(driver, t0, t1);
            if (method == "euler") return solve_euler(c, g, x0, t0, t1).values();
            if (method != "picard") throw std::invalid_argument("method must be picard or euler");
            SolverConfig cfg;
            cfg.alpha = alpha;
            return solve_picard(c, g, x0, t0, t1, cfg).path.values();
        },
        py::arg("coeffs"), py::arg("params"), py::arg("driver"), py::arg("x0"), py::arg("alpha") = 0.3,
        py::arg("method") = "picard", py::arg("t0") = 0.0, py::arg("t1") = 1.0);

    m.def(
        "build_viable",
        [](const std::string& coeffs, const std::map<std::string, double>& params, const Eigen::MatrixXd& driver,
           const std::string& tube, const Eigen::VectorXd& x0, double epsilon, double alpha, double t0, double t1) {
            const CoefficientPair c = make_coefficients(coeffs, params);
            ViabilityConfig cfg;
            cfg.alpha = alpha;
            const TubePtr K = parse_tube(tube, c.d);
            return solution_dict(build_viable_solution(t0, x0, c, on_grid(driver, t0, t1), *K, epsilon, cfg));
        },
        py::arg("coeffs"), py::arg("params"), py::arg("driver"), py::arg("tube"), py::arg("x0"), py::arg("epsilon"),
        py::arg("alpha") = 0.3, py::arg("t0") = 0.0, py::arg("t1") = 1.0);

    m.def(
        "run_cli", [](const std::vector<std::string>& args) { return cli::run(args); }, py::arg("args"),
        "Runs one command line invocation in-process and returns its exit code.");
}
