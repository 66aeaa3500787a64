#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>

namespace fracvia {

/// Time-indexed closed set K(t) with membership and a projection map.
class ConstraintTube {
public:
    virtual ~ConstraintTube() = default;
    virtual bool contains(double t, const Eigen::VectorXd& x) const = 0;
    virtual Eigen::VectorXd project(double t, const Eigen::VectorXd& x) const = 0;
    virtual bool is_convex() const = 0;
    virtual std::string description() const = 0;
    /// Positive outside (distance to the projection), nonpositive inside.
    virtual double signed_distance(double t, const Eigen::VectorXd& x) const;
};

using TubePtr = std::shared_ptr<const ConstraintTube>;

/// Membership slack used by all builtin tubes.
inline constexpr double kTubeTolerance = 1e-12;

class UnconstrainedTube : public ConstraintTube {
public:
    bool contains(double, const Eigen::VectorXd& x) const override { return x.allFinite(); }
    Eigen::VectorXd project(double, const Eigen::VectorXd& x) const override { return x; }
    bool is_convex() const override { return true; }
    std::string description() const override { return "R^d"; }
    double signed_distance(double, const Eigen::VectorXd&) const override { return 0.0; }
};

class BallTube : public ConstraintTube {
public:
    BallTube(Eigen::VectorXd center, double radius);
    bool contains(double t, const Eigen::VectorXd& x) const override;
    Eigen::VectorXd project(double t, const Eigen::VectorXd& x) const override;
    bool is_convex() const override { return true; }
    std::string description() const override;
    double signed_distance(double t, const Eigen::VectorXd& x) const override;

private:
    Eigen::VectorXd center_;
    double radius_;
};

class BoxTube : public ConstraintTube {
public:
    BoxTube(Eigen::VectorXd lo, Eigen::VectorXd hi);
    bool contains(double t, const Eigen::VectorXd& x) const override;
    Eigen::VectorXd project(double t, const Eigen::VectorXd& x) const override;
    bool is_convex() const override { return true; }
    std::string description() const override;

private:
    Eigen::VectorXd lo_, hi_;
};

/// {y : <a, y> <= c}.
class HalfspaceTube : public ConstraintTube {
public:
    HalfspaceTube(Eigen::VectorXd a, double c);
    bool contains(double t, const Eigen::VectorXd& x) const override;
    Eigen::VectorXd project(double t, const Eigen::VectorXd& x) const override;
    bool is_convex() const override { return true; }
    std::string description() const override;
    double signed_distance(double t, const Eigen::VectorXd& x) const override;

private:
    Eigen::VectorXd a_;
    double c_;
};

/// Ball with center c(t) = c0 + v t and radius r(t) = r0 + r1 t (r(t) > 0 required).
class MovingBallTube : public ConstraintTube {
public:
    MovingBallTube(Eigen::VectorXd c0, Eigen::VectorXd v, double r0, double r1);
    bool contains(double t, const Eigen::VectorXd& x) const override;
    Eigen::VectorXd project(double t, const Eigen::VectorXd& x) const override;
    bool is_convex() const override { return true; }
    std::string description() const override;
    double signed_distance(double t, const Eigen::VectorXd& x) const override;
    double radius(double t) const;
    Eigen::VectorXd center(double t) const;

private:
    Eigen::VectorXd c0_, v_;
    double r0_, r1_;
};

/// User supplied membership and projection; convexity is declared by the caller.
class CustomTube : public ConstraintTube {
public:
    CustomTube(std::function<bool(double, const Eigen::VectorXd&)> contains,
               std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> project, bool convex, std::string desc);
    bool contains(double t, const Eigen::VectorXd& x) const override { return contains_(t, x); }
    Eigen::VectorXd project(double t, const Eigen::VectorXd& x) const override { return project_(t, x); }
    bool is_convex() const override { return convex_; }
    std::string description() const override { return desc_; }

private:
    std::function<bool(double, const Eigen::VectorXd&)> contains_;
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> project_;
    bool convex_;
    std::string desc_;
};

/// Parses "none", "ball:<rho>", "box:<lo>,<hi>", "halfspace:<a1>,...,<ad>,<c>",
/// "moving-ball:<r0>,<r1>" (centered at 0) for dimension d.
TubePtr parse_tube(const std::string& spec, std::size_t d);

}  // namespace fracvia
