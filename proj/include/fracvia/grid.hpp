#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fracvia {

/// Uniform time grid t_i = t0 + i*h, i = 0..n-1.
struct UniformGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t n = 2;

    UniformGrid() = default;
    UniformGrid(double t0_, double t1_, std::size_t n_);

    double step() const { return (t1 - t0) / static_cast<double>(n - 1); }
    double time(std::size_t i) const;
    std::vector<double> times() const;

    /// Index of the node closest to time t; throws if t is off-grid.
    std::size_t index_of(double t) const;

    bool operator==(const UniformGrid& o) const;
};

/// Vector valued function sampled on a uniform grid. Row i holds the value at
/// times[i]. Matrix valued functions (d x k) are stored row-major per node,
/// so entry (a, b) sits in column a * k + b.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(UniformGrid grid, Eigen::MatrixXd values);
    GridFunction(UniformGrid grid, std::size_t dim);

    /// Build from explicit times; checks monotonicity and uniform spacing.
    static GridFunction from_samples(const std::vector<double>& times, Eigen::MatrixXd values);

    const UniformGrid& grid() const { return grid_; }
    std::size_t size() const { return grid_.n; }
    std::size_t dim() const { return static_cast<std::size_t>(values_.cols()); }
    double time(std::size_t i) const { return grid_.time(i); }
    double step() const { return grid_.step(); }

    const Eigen::MatrixXd& values() const { return values_; }
    Eigen::MatrixXd& values() { return values_; }
    double operator()(std::size_t i, std::size_t c = 0) const { return values_(i, c); }
    double& operator()(std::size_t i, std::size_t c = 0) { return values_(i, c); }
    Eigen::VectorXd row(std::size_t i) const { return values_.row(i).transpose(); }

    /// Restriction to nodes [i0, i1] (inclusive).
    GridFunction slice(std::size_t i0, std::size_t i1) const;
    GridFunction channel(std::size_t c) const;

    void check_finite() const;

private:
    UniformGrid grid_;
    Eigen::MatrixXd values_;
};

/// Thrown on grid mismatch or malformed grid input.
class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

void require_same_grid(const GridFunction& a, const GridFunction& b);

}  // namespace fracvia
