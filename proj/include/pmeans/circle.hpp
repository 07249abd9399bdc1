#ifndef PMEANS_CIRCLE_HPP
#define PMEANS_CIRCLE_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pmeans {

inline constexpr double pi = std::numbers::pi_v<double>;
inline constexpr double two_pi = 2.0 * std::numbers::pi_v<double>;

/// Canonical representative of an angle in (-pi, pi].
/// The antipodal boundary maps to +pi (anticlockwise convention).
inline double canonical(double angle) {
  // fast paths first: already canonical, or one period off (the common cases
  // in the simulation loop); std::remainder only for far-out inputs
  if (angle > -pi && angle <= pi) return angle;
  if (angle > pi && angle <= 3.0 * pi) return angle - two_pi;
  if (angle > -3.0 * pi && angle <= -pi) return angle + two_pi;
  if (!std::isfinite(angle))
    throw std::invalid_argument("canonical: non-finite angle");
  double r = std::remainder(angle, two_pi);  // in [-pi, pi]
  if (r <= -pi) r = pi;
  return r;
}

/// Point on the circle T = R/(2*pi*Z), stored as its canonical angle.
struct CirclePoint {
  double theta = 0.0;

  CirclePoint() = default;
  explicit CirclePoint(double angle) : theta(canonical(angle)) {}

  friend bool operator==(const CirclePoint& a, const CirclePoint& b) {
    return a.theta == b.theta;
  }
};

/// Representative of y - x in (-pi, pi]; returns exactly +pi when y is the
/// antipode of x.
inline double signed_gap(CirclePoint x, CirclePoint y) {
  return canonical(y.theta - x.theta);
}

/// Geodesic distance, in [0, pi].
inline double dist(CirclePoint x, CirclePoint y) {
  return std::fabs(signed_gap(x, y));
}

inline CirclePoint antipode(CirclePoint x) { return CirclePoint(x.theta + pi); }

/// Point at arclength s along the minimal geodesic from x heading towards y.
/// May pass beyond y. Undefined direction when x == y and s != 0.
inline CirclePoint geodesic_point(CirclePoint x, CirclePoint y, double s) {
  const double g = signed_gap(x, y);
  if (g == 0.0) {
    if (s == 0.0) return x;
    throw std::domain_error("geodesic_point: direction undefined at x == y");
  }
  const double dir = (g > 0.0) ? 1.0 : -1.0;
  return CirclePoint(x.theta + s * dir);
}

/// Jump map: the point gamma(x, y, s * d^(p-1)(x, y)), with d^0 := 1 when
/// p == 1. Returns x unchanged when x == y.
inline CirclePoint jump_target(CirclePoint x, CirclePoint y, double p, double s) {
  if (p < 1.0) throw std::invalid_argument("jump_target: requires p >= 1");
  if (s < 0.0) throw std::invalid_argument("jump_target: requires s >= 0");
  const double g = signed_gap(x, y);
  if (p == 2.0) return CirclePoint(x.theta + s * g);  // s d dir = s g
  if (g == 0.0) return x;
  const double d = std::fabs(g);
  const double arc = (p == 1.0) ? s : s * std::pow(d, p - 1.0);
  const double dir = (g > 0.0) ? 1.0 : -1.0;
  return CirclePoint(x.theta + arc * dir);
}

}  // namespace pmeans

#endif
