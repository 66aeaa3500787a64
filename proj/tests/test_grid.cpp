#include <doctest.h>

#include "fracvia/grid.hpp"

using namespace fracvia;

TEST_CASE("uniform grid nodes") {
    const UniformGrid g(0.0, 2.0, 5);
    CHECK(g.step() == doctest::Approx(0.5));
    CHECK(g.time(4) == 2.0);
    CHECK(g.index_of(1.5) == 3);
    CHECK_THROWS(g.index_of(1.3));
    CHECK_THROWS(UniformGrid(1.0, 0.0, 5));
    CHECK_THROWS(UniformGrid(0.0, 1.0, 1));
}

TEST_CASE("from_samples requires uniform spacing") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(3, 1);
    CHECK_NOTHROW(GridFunction::from_samples({0.0, 0.5, 1.0}, v));
    CHECK_THROWS_AS(GridFunction::from_samples({0.0, 0.2, 1.0}, v), GridError);
    CHECK_THROWS(GridFunction::from_samples({0.0, 1.0, 0.5}, v));
}

TEST_CASE("slice keeps times and values") {
    Eigen::MatrixXd v(5, 2);
    for (int i = 0; i < 5; ++i) v.row(i) << i, 10 * i;
    const GridFunction f(UniformGrid(0.0, 1.0, 5), v);
    const GridFunction s = f.slice(1, 3);
    CHECK(s.size() == 3);
    CHECK(s.time(0) == doctest::Approx(0.25));
    CHECK(s(2, 1) == 30.0);
    CHECK(f.channel(1)(4) == 40.0);
}

TEST_CASE("non-finite values are rejected") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(3, 1);
    v(1, 0) = std::nan("");
    const GridFunction f(UniformGrid(0.0, 1.0, 3), v);
    CHECK_THROWS(f.check_finite());
}
