#pragma once

#include "fracvia/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fracvia {

struct FbmSpec {
    double hurst = 0.75;
    std::size_t channels = 1;
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t grid_points = 2;
    std::uint64_t seed = 0;

    /// Throws std::domain_error / std::invalid_argument on bad fields.
    void validate() const;
    UniformGrid grid() const { return UniformGrid(t0, t1, grid_points); }
};

enum class FbmMethod { cholesky, circulant };

FbmMethod parse_fbm_method(const std::string& name);
std::string to_string(FbmMethod m);

/// R_H(s, t) = (t^{2H} + s^{2H} - |t - s|^{2H}) / 2.
double covariance(double s, double t, double hurst);

/// Autocovariance of fBm increments on spacing dt at integer lag j.
double increment_autocovariance(long j, double hurst, double dt);

/// Exact sampler by Cholesky factorization of the covariance on the grid
/// nodes (absolute times, so B_0 = 0). Guarded to n <= 8192.
GridFunction sample_fbm_cholesky(const FbmSpec& spec, std::uint64_t replication = 0);

/// Davies-Harte circulant embedding of the stationary increments.
GridFunction sample_fbm_circulant(const FbmSpec& spec, std::uint64_t replication = 0);

/// Replications 0..paths-1, generated in parallel. Output does not depend on
/// the worker count.
std::vector<GridFunction> sample_fbm_paths(const FbmSpec& spec, std::size_t paths, FbmMethod method);

/// Eigenvalues of the circulant embedding of N increments (size 2M, M >= N).
std::vector<double> circulant_eigenvalues(double hurst, double dt, std::size_t n_increments);

struct IncrementMomentReport {
    struct Lag {
        double lag = 0.0;
        double empirical = 0.0;
        double target = 0.0;
        double std_error = 0.0;
        double z = 0.0;
        bool flagged = false;
    };
    std::vector<Lag> lags;
    bool degenerate = false;
    bool any_flagged = false;
};

/// Compares E|B_t - B_s|^2 against |t - s|^{2H} per lag (in grid steps).
/// Empty lag list means dyadic lags 1, 2, 4, ...
IncrementMomentReport increment_moment_check(const std::vector<GridFunction>& paths, double hurst,
                                             std::vector<std::size_t> lag_steps = {});

/// Regression slope of log E[sup_i |B_{i+L} - B_i|] against log(L h) over
/// dyadic lags L.
double holder_exponent_estimate(const std::vector<GridFunction>& paths);

/// Maximum over channels of lambda_alpha on the whole path.
double pathwise_lambda(const GridFunction& path, double alpha);

}  // namespace fracvia
