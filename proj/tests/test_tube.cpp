#include <doctest.h>

#include "fracvia/tube.hpp"

using namespace fracvia;

namespace {
Eigen::VectorXd v2(double a, double b) {
    Eigen::VectorXd x(2);
    x << a, b;
    return x;
}
}  // namespace

TEST_CASE("ball projection and distance") {
    const BallTube b(Eigen::VectorXd::Zero(2), 1.0);
    CHECK(b.contains(0.0, v2(0.6, 0.8)));
    CHECK_FALSE(b.contains(0.0, v2(0.6, 0.81)));
    const Eigen::VectorXd p = b.project(0.0, v2(3.0, 4.0));
    CHECK(p(0) == doctest::Approx(0.6));
    CHECK(p(1) == doctest::Approx(0.8));
    CHECK(b.signed_distance(0.0, v2(0.0, 0.25)) == doctest::Approx(-0.75));
}

TEST_CASE("box and halfspace") {
    const BoxTube box(v2(-1, -1), v2(1, 2));
    const Eigen::VectorXd p = box.project(0.0, v2(5, -3));
    CHECK(p(0) == 1.0);
    CHECK(p(1) == -1.0);
    const HalfspaceTube h(v2(1, 1), 1.0);
    CHECK(h.signed_distance(0.0, v2(1, 1)) == doctest::Approx(1.0 / std::sqrt(2.0)));
    const Eigen::VectorXd q = h.project(0.0, v2(1, 1));
    CHECK(q(0) + q(1) == doctest::Approx(1.0));
}

TEST_CASE("moving ball radius must stay positive") {
    const MovingBallTube m(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1), 1.0, -2.0);
    CHECK(m.contains(0.25, Eigen::VectorXd::Constant(1, 0.4)));
    CHECK_FALSE(m.contains(0.25, Eigen::VectorXd::Constant(1, 0.6)));
    CHECK_THROWS_AS(m.contains(0.75, Eigen::VectorXd::Zero(1)), std::domain_error);
}

TEST_CASE("tube specs") {
    CHECK(parse_tube("ball:2", 1)->contains(0.0, Eigen::VectorXd::Constant(1, 1.9)));
    CHECK(parse_tube("halfspace:1,0,3", 2)->contains(0.0, v2(2.9, 100)));
    CHECK(parse_tube("none", 3)->contains(0.0, Eigen::VectorXd::Constant(3, 1e9)));
    CHECK_THROWS(parse_tube("ball:x", 1));
    CHECK_THROWS(parse_tube("sphere:1", 1));
    CHECK_THROWS(parse_tube("halfspace:1,2", 2));
}
