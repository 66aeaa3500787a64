#include "fracvia/fbm.hpp"

#include "fracvia/frac_calc.hpp"
#include "fracvia/parallel.hpp"
#include "fracvia/rng.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace fracvia {

void FbmSpec::validate() const {
    if (!(hurst > 0.5 && hurst < 1.0)) throw std::domain_error("hurst must lie in (1/2, 1)");
    if (channels == 0) throw std::invalid_argument("channels must be positive");
    if (!(t0 >= 0.0) || !(t0 < t1)) throw std::invalid_argument("need 0 <= t0 < t1");
    if (grid_points < 2) throw std::invalid_argument("grid_points must be >= 2");
}

FbmMethod parse_fbm_method(const std::string& name) {
    if (name == "cholesky") return FbmMethod::cholesky;
    if (name == "circulant") return FbmMethod::circulant;
    throw std::invalid_argument("unknown fbm method: " + name);
}

std::string to_string(FbmMethod m) { return m == FbmMethod::cholesky ? "cholesky" : "circulant"; }

double covariance(double s, double t, double hurst) {
    if (s < 0 || t < 0) throw std::domain_error("covariance: negative time");
    if (!(hurst > 0 && hurst < 1)) throw std::domain_error("covariance: hurst outside (0,1)");
    const double e = 2.0 * hurst;
    return 0.5 * (std::pow(t, e) + std::pow(s, e) - std::pow(std::abs(t - s), e));
}

double increment_autocovariance(long j, double hurst, double dt) {
    const double e = 2.0 * hurst;
    const double a = static_cast<double>(std::labs(j));
    const double v = std::pow(a + 1.0, e) + std::pow(std::abs(a - 1.0), e) - 2.0 * std::pow(a, e);
    return 0.5 * v * std::pow(dt, e);
}

namespace {

struct CholeskyFactor {
    Eigen::MatrixXd L;
    std::vector<std::size_t> active;  // grid indices with t > 0
};

CholeskyFactor cholesky_factor(const FbmSpec& spec) {
    spec.validate();
    if (spec.grid_points > 8192) throw std::invalid_argument("cholesky sampler limited to n <= 8192");
    const UniformGrid grid = spec.grid();
    CholeskyFactor f;
    for (std::size_t i = 0; i < grid.n; ++i)
        if (grid.time(i) > 0.0) f.active.push_back(i);
    const auto m = static_cast<Eigen::Index>(f.active.size());
    Eigen::MatrixXd C(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b <= a; ++b) {
            const double c = covariance(grid.time(f.active[a]), grid.time(f.active[b]), spec.hurst);
            C(a, b) = c;
            C(b, a) = c;
        }
    if (m > 0) {
        const double jitter = 1e-12 * C.trace() / static_cast<double>(m);
        C.diagonal().array() += jitter;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() != Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
        std::ostringstream os;
        os << "covariance not positive definite after jitter; smallest eigenvalue " << es.eigenvalues().minCoeff();
        throw std::runtime_error(os.str());
    }
    f.L = llt.matrixL();
    return f;
}

GridFunction draw_cholesky(const CholeskyFactor& f, const FbmSpec& spec, std::uint64_t rep) {
    GridFunction out(spec.grid(), spec.channels);
    const auto m = static_cast<Eigen::Index>(f.active.size());
    Eigen::VectorXd z(m);
    for (std::size_t c = 0; c < spec.channels; ++c) {
        NormalStream ns(stream_seed(spec.seed, rep, c));
        for (Eigen::Index i = 0; i < m; ++i) z(i) = ns.next();
        const Eigen::VectorXd x = f.L.triangularView<Eigen::Lower>() * z;
        for (Eigen::Index i = 0; i < m; ++i) out(f.active[i], c) = x(i);
    }
    return out;
}

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

/// Forward complex DFT of length n, in place.
void dft(std::vector<std::complex<double>>& data) {
    const int n = static_cast<int>(data.size());
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * data.size()));
    if (!buf) throw std::bad_alloc();
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (int i = 0; i < n; ++i) {
        buf[i][0] = data[i].real();
        buf[i][1] = data[i].imag();
    }
    fftw_execute(plan);
    for (int i = 0; i < n; ++i) data[i] = {buf[i][0], buf[i][1]};
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
}

std::size_t embedding_half(std::size_t n_increments) {
    std::size_t m = 1;
    while (m < n_increments) m <<= 1;
    return m;
}

struct CirculantPlan {
    std::size_t offset = 0;        // grid nodes before t0 on the extended grid
    std::size_t n_increments = 0;  // increments sampled from time 0
    std::size_t M = 0;
    std::vector<double> sqrt_weights;  // per frequency, already scaled
};

CirculantPlan circulant_plan(const FbmSpec& spec) {
    spec.validate();
    const UniformGrid grid = spec.grid();
    const double h = grid.step();
    CirculantPlan p;
    const double k = spec.t0 / h;
    const double kr = std::round(k);
    if (std::abs(k - kr) > 1e-9 * std::max(1.0, k))
        throw std::invalid_argument("circulant sampler needs t0 to be a multiple of the grid step");
    p.offset = static_cast<std::size_t>(kr);
    p.n_increments = p.offset + grid.n - 1;
    p.M = embedding_half(p.n_increments);
    const std::vector<double> lambda = circulant_eigenvalues(spec.hurst, h, p.n_increments);
    const std::size_t size = 2 * p.M;
    p.sqrt_weights.resize(size);
    for (std::size_t j = 0; j < size; ++j) {
        const double denom = (j == 0 || j == p.M) ? 2.0 * static_cast<double>(p.M) : 4.0 * static_cast<double>(p.M);
        p.sqrt_weights[j] = std::sqrt(lambda[j] / denom);
    }
    return p;
}

GridFunction draw_circulant(const CirculantPlan& p, const FbmSpec& spec, std::uint64_t rep) {
    GridFunction out(spec.grid(), spec.channels);
    const std::size_t size = 2 * p.M;
    std::vector<std::complex<double>> w(size);
    for (std::size_t c = 0; c < spec.channels; ++c) {
        NormalStream ns(stream_seed(spec.seed, rep, c));
        w[0] = {p.sqrt_weights[0] * ns.next(), 0.0};
        w[p.M] = {p.sqrt_weights[p.M] * ns.next(), 0.0};
        for (std::size_t j = 1; j < p.M; ++j) {
            const double a = ns.next();
            const double b = ns.next();
            w[j] = {p.sqrt_weights[j] * a, p.sqrt_weights[j] * b};
            w[size - j] = std::conj(w[j]);
        }
        dft(w);
        double b = 0.0;
        if (p.offset == 0) out(0, c) = 0.0;
        for (std::size_t i = 0; i < p.n_increments; ++i) {
            b += w[i].real();
            if (i + 1 >= p.offset) out(i + 1 - p.offset, c) = b;
        }
    }
    return out;
}

}  // namespace

std::vector<double> circulant_eigenvalues(double hurst, double dt, std::size_t n_increments) {
    const std::size_t M = embedding_half(std::max<std::size_t>(n_increments, 1));
    const std::size_t size = 2 * M;
    std::vector<std::complex<double>> row(size);
    for (std::size_t j = 0; j <= M; ++j) row[j] = increment_autocovariance(static_cast<long>(j), hurst, dt);
    for (std::size_t j = M + 1; j < size; ++j) row[j] = row[size - j];
    dft(row);
    std::vector<double> lambda(size);
    double scale = 0.0;
    for (std::size_t j = 0; j < size; ++j) scale = std::max(scale, std::abs(row[j].real()));
    for (std::size_t j = 0; j < size; ++j) {
        double v = row[j].real();
        if (v < 0) {
            if (v < -1e-10 * scale) {
                std::ostringstream os;
                os << "circulant embedding has negative eigenvalue " << v;
                throw std::runtime_error(os.str());
            }
            v = 0.0;
        }
        lambda[j] = v;
    }
    return lambda;
}

GridFunction sample_fbm_cholesky(const FbmSpec& spec, std::uint64_t replication) {
    return draw_cholesky(cholesky_factor(spec), spec, replication);
}

GridFunction sample_fbm_circulant(const FbmSpec& spec, std::uint64_t replication) {
    return draw_circulant(circulant_plan(spec), spec, replication);
}

std::vector<GridFunction> sample_fbm_paths(const FbmSpec& spec, std::size_t paths, FbmMethod method) {
    std::vector<GridFunction> out(paths);
    if (method == FbmMethod::cholesky) {
        const CholeskyFactor f = cholesky_factor(spec);
        parallel_for(paths, [&](std::size_t r) { out[r] = draw_cholesky(f, spec, r); });
    } else {
        const CirculantPlan p = circulant_plan(spec);
        parallel_for(paths, [&](std::size_t r) { out[r] = draw_circulant(p, spec, r); });
    }
    return out;
}

IncrementMomentReport increment_moment_check(const std::vector<GridFunction>& paths, double hurst,
                                             std::vector<std::size_t> lag_steps) {
    if (paths.empty()) throw std::invalid_argument("increment_moment_check: no paths");
    if (!(hurst > 0 && hurst < 1)) throw std::domain_error("hurst outside (0,1)");
    const UniformGrid grid = paths.front().grid();
    for (const auto& p : paths) require_same_grid(p, paths.front());
    const std::size_t n = grid.n;
    if (lag_steps.empty())
        for (std::size_t L = 1; L < n; L <<= 1) lag_steps.push_back(L);

    IncrementMomentReport rep;
    bool all_zero = true;
    for (const auto& p : paths)
        if (p.values().cwiseAbs().maxCoeff() > 0) all_zero = false;
    if (all_zero) {
        rep.degenerate = true;
        rep.any_flagged = true;
        return rep;
    }
    if (paths.size() < 100) throw std::invalid_argument("increment_moment_check needs at least 100 paths");

    const double h = grid.step();
    for (std::size_t L : lag_steps) {
        if (L == 0 || L >= n) throw std::invalid_argument("lag out of range");
        std::vector<double> per_path;
        per_path.reserve(paths.size());
        for (const auto& p : paths) {
            double acc = 0.0;
            std::size_t cnt = 0;
            for (std::size_t c = 0; c < p.dim(); ++c)
                for (std::size_t i = 0; i + L < n; ++i) {
                    const double d = p(i + L, c) - p(i, c);
                    acc += d * d;
                    ++cnt;
                }
            per_path.push_back(acc / static_cast<double>(cnt));
        }
        double mean = 0.0;
        for (double v : per_path) mean += v;
        mean /= static_cast<double>(per_path.size());
        double var = 0.0;
        for (double v : per_path) var += (v - mean) * (v - mean);
        var /= static_cast<double>(per_path.size() - 1);
        IncrementMomentReport::Lag lag;
        lag.lag = static_cast<double>(L) * h;
        lag.empirical = mean;
        lag.target = std::pow(lag.lag, 2.0 * hurst);
        lag.std_error = std::sqrt(var / static_cast<double>(per_path.size()));
        if (lag.std_error == 0.0) {
            rep.degenerate = true;
            lag.flagged = true;
        } else {
            lag.z = (lag.empirical - lag.target) / lag.std_error;
            lag.flagged = std::abs(lag.z) > 4.0;
        }
        rep.any_flagged = rep.any_flagged || lag.flagged;
        rep.lags.push_back(lag);
    }
    return rep;
}

double holder_exponent_estimate(const std::vector<GridFunction>& paths) {
    if (paths.empty()) throw std::invalid_argument("holder_exponent_estimate: no paths");
    const std::size_t n = paths.front().size();
    const double h = paths.front().step();
    std::vector<double> xs, ys;
    for (std::size_t L = 1; 4 * L < n; L <<= 1) {
        double acc = 0.0;
        for (const auto& p : paths) {
            double sup = 0.0;
            for (std::size_t c = 0; c < p.dim(); ++c)
                for (std::size_t i = 0; i + L < n; ++i) sup = std::max(sup, std::abs(p(i + L, c) - p(i, c)));
            acc += sup;
        }
        xs.push_back(std::log(static_cast<double>(L) * h));
        ys.push_back(std::log(acc / static_cast<double>(paths.size())));
    }
    if (xs.size() < 2) throw std::invalid_argument("grid too coarse for exponent estimate");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

double pathwise_lambda(const GridFunction& path, double alpha) {
    if (path.size() < 8) throw std::invalid_argument("pathwise_lambda: grid too coarse (n < 8)");
    double best = 0.0;
    for (std::size_t c = 0; c < path.dim(); ++c)
        best = std::max(best, lambda_alpha(path.channel(c), alpha, path.grid().t0, path.grid().t1));
    return best;
}

}  // namespace fracvia
