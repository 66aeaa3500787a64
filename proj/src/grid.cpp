#include "fracvia/grid.hpp"

#include <cmath>
#include <string>

namespace fracvia {

UniformGrid::UniformGrid(double t0_, double t1_, std::size_t n_) : t0(t0_), t1(t1_), n(n_) {
    if (!(t0 < t1) || !std::isfinite(t0) || !std::isfinite(t1))
        throw GridError("grid requires finite t0 < t1");
    if (n < 2) throw GridError("grid requires at least 2 points");
}

double UniformGrid::time(std::size_t i) const {
    if (i + 1 == n) return t1;
    return t0 + static_cast<double>(i) * step();
}

std::vector<double> UniformGrid::times() const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = time(i);
    return out;
}

std::size_t UniformGrid::index_of(double t) const {
    const double h = step();
    const double x = (t - t0) / h;
    const double r = std::round(x);
    if (r < 0 || r > static_cast<double>(n - 1) || std::abs(x - r) > 1e-8)
        throw GridError("time " + std::to_string(t) + " is not a grid node");
    return static_cast<std::size_t>(r);
}

bool UniformGrid::operator==(const UniformGrid& o) const {
    if (n != o.n) return false;
    const double scale = std::max({1.0, std::abs(t0), std::abs(t1)});
    return std::abs(t0 - o.t0) <= 1e-12 * scale && std::abs(t1 - o.t1) <= 1e-12 * scale;
}

GridFunction::GridFunction(UniformGrid grid, Eigen::MatrixXd values)
    : grid_(grid), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.rows()) != grid_.n)
        throw GridError("value rows do not match grid size");
}

GridFunction::GridFunction(UniformGrid grid, std::size_t dim)
    : grid_(grid), values_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.n), static_cast<Eigen::Index>(dim))) {}

GridFunction GridFunction::from_samples(const std::vector<double>& times, Eigen::MatrixXd values) {
    if (times.size() < 2) throw GridError("need at least two samples");
    const std::size_t n = times.size();
    UniformGrid g(times.front(), times.back(), n);
    const double h = g.step();
    for (std::size_t i = 1; i < n; ++i) {
        const double d = times[i] - times[i - 1];
        if (!(d > 0)) throw GridError("times must be strictly increasing");
        if (std::abs(d - h) > 1e-12 * std::max(1.0, std::abs(times.back())) + 1e-9 * h)
            throw GridError("times are not uniformly spaced");
    }
    GridFunction f(g, std::move(values));
    f.check_finite();
    return f;
}

GridFunction GridFunction::slice(std::size_t i0, std::size_t i1) const {
    if (i0 >= i1 || i1 >= grid_.n) throw GridError("invalid slice");
    UniformGrid g(time(i0), time(i1), i1 - i0 + 1);
    return GridFunction(g, values_.middleRows(static_cast<Eigen::Index>(i0), static_cast<Eigen::Index>(i1 - i0 + 1)));
}

GridFunction GridFunction::channel(std::size_t c) const {
    if (c >= dim()) throw GridError("channel out of range");
    return GridFunction(grid_, values_.col(static_cast<Eigen::Index>(c)));
}

void GridFunction::check_finite() const {
    if (!values_.allFinite()) throw GridError("grid function contains non-finite values");
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid() == b.grid())) throw GridError("functions are sampled on different grids");
}

}  // namespace fracvia
