#include "fracvia/tube.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fracvia {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + item + "' in tube spec");
        }
        if (pos != item.size()) throw std::invalid_argument("bad number '" + item + "' in tube spec");
        out.push_back(v);
    }
    return out;
}

Eigen::VectorXd project_ball(const Eigen::VectorXd& c, double r, const Eigen::VectorXd& x) {
    const Eigen::VectorXd d = x - c;
    const double nd = d.norm();
    if (nd <= r) return x;
    return c + d * (r / nd);
}

}  // namespace

double ConstraintTube::signed_distance(double t, const Eigen::VectorXd& x) const {
    if (contains(t, x)) return 0.0;
    return (project(t, x) - x).norm();
}

BallTube::BallTube(Eigen::VectorXd center, double radius) : center_(std::move(center)), radius_(radius) {
    if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
}

bool BallTube::contains(double, const Eigen::VectorXd& x) const {
    return (x - center_).norm() <= radius_ * (1.0 + kTubeTolerance) + kTubeTolerance;
}

Eigen::VectorXd BallTube::project(double, const Eigen::VectorXd& x) const { return project_ball(center_, radius_, x); }

double BallTube::signed_distance(double, const Eigen::VectorXd& x) const { return (x - center_).norm() - radius_; }

std::string BallTube::description() const { return "ball(radius=" + fmt(radius_) + ")"; }

BoxTube::BoxTube(Eigen::VectorXd lo, Eigen::VectorXd hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size() || (lo_.array() > hi_.array()).any()) throw std::invalid_argument("box requires lo <= hi");
}

bool BoxTube::contains(double, const Eigen::VectorXd& x) const {
    return ((x.array() >= lo_.array() - kTubeTolerance) && (x.array() <= hi_.array() + kTubeTolerance)).all();
}

Eigen::VectorXd BoxTube::project(double, const Eigen::VectorXd& x) const {
    return x.cwiseMax(lo_).cwiseMin(hi_);
}

std::string BoxTube::description() const { return "box"; }

HalfspaceTube::HalfspaceTube(Eigen::VectorXd a, double c) : a_(std::move(a)), c_(c) {
    if (!(a_.norm() > 0)) throw std::invalid_argument("halfspace normal must be nonzero");
}

bool HalfspaceTube::contains(double, const Eigen::VectorXd& x) const {
    return a_.dot(x) <= c_ + kTubeTolerance * (1.0 + std::abs(c_));
}

Eigen::VectorXd HalfspaceTube::project(double, const Eigen::VectorXd& x) const {
    const double v = a_.dot(x) - c_;
    if (v <= 0) return x;
    return x - a_ * (v / a_.squaredNorm());
}

double HalfspaceTube::signed_distance(double, const Eigen::VectorXd& x) const { return (a_.dot(x) - c_) / a_.norm(); }

std::string HalfspaceTube::description() const { return "halfspace(c=" + fmt(c_) + ")"; }

MovingBallTube::MovingBallTube(Eigen::VectorXd c0, Eigen::VectorXd v, double r0, double r1)
    : c0_(std::move(c0)), v_(std::move(v)), r0_(r0), r1_(r1) {
    if (!(r0 > 0)) throw std::invalid_argument("moving ball needs r0 > 0");
}

double MovingBallTube::radius(double t) const {
    const double r = r0_ + r1_ * t;
    if (!(r > 0)) throw std::domain_error("moving ball radius is not positive at t = " + fmt(t));
    return r;
}

Eigen::VectorXd MovingBallTube::center(double t) const { return c0_ + v_ * t; }

bool MovingBallTube::contains(double t, const Eigen::VectorXd& x) const {
    const double r = radius(t);
    return (x - center(t)).norm() <= r * (1.0 + kTubeTolerance) + kTubeTolerance;
}

Eigen::VectorXd MovingBallTube::project(double t, const Eigen::VectorXd& x) const {
    return project_ball(center(t), radius(t), x);
}

double MovingBallTube::signed_distance(double t, const Eigen::VectorXd& x) const {
    return (x - center(t)).norm() - radius(t);
}

std::string MovingBallTube::description() const {
    return "moving-ball(r0=" + fmt(r0_) + ", r1=" + fmt(r1_) + ")";
}

CustomTube::CustomTube(std::function<bool(double, const Eigen::VectorXd&)> contains,
                       std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> project, bool convex,
                       std::string desc)
    : contains_(std::move(contains)), project_(std::move(project)), convex_(convex), desc_(std::move(desc)) {}

TubePtr parse_tube(const std::string& spec, std::size_t d) {
    if (spec == "none" || spec.empty()) return std::make_shared<UnconstrainedTube>();
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("tube spec needs 'kind:params': " + spec);
    const std::string kind = spec.substr(0, colon);
    const std::vector<double> p = parse_list(spec.substr(colon + 1));
    const auto dd = static_cast<Eigen::Index>(d);
    if (kind == "ball") {
        if (p.size() != 1) throw std::invalid_argument("ball:<rho>");
        return std::make_shared<BallTube>(Eigen::VectorXd::Zero(dd), p[0]);
    }
    if (kind == "box") {
        if (p.size() != 2) throw std::invalid_argument("box:<lo>,<hi>");
        return std::make_shared<BoxTube>(Eigen::VectorXd::Constant(dd, p[0]), Eigen::VectorXd::Constant(dd, p[1]));
    }
    if (kind == "halfspace") {
        if (p.size() != d + 1) throw std::invalid_argument("halfspace:<a1>,...,<ad>,<c>");
        Eigen::VectorXd a(dd);
        for (std::size_t i = 0; i < d; ++i) a(static_cast<Eigen::Index>(i)) = p[i];
        return std::make_shared<HalfspaceTube>(a, p[d]);
    }
    if (kind == "moving-ball") {
        if (p.size() != 2) throw std::invalid_argument("moving-ball:<r0>,<r1>");
        return std::make_shared<MovingBallTube>(Eigen::VectorXd::Zero(dd), Eigen::VectorXd::Zero(dd), p[0], p[1]);
    }
    throw std::invalid_argument("unknown tube kind: " + kind);
}

}  // namespace fracvia
