#ifndef PMEANS_POTENTIAL_HPP
#define PMEANS_POTENTIAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmeans/circle.hpp"
#include "pmeans/measure.hpp"

namespace pmeans {

namespace detail {

inline double pow_p(double d, double q) {
  if (q == 0.0) return 1.0;
  if (q == 1.0) return d;
  if (q == 2.0) return d * d;
  return std::pow(d, q);
}

/// Golden-section minimization of f on [lo, hi] down to interval width tol.
template <typename F>
double golden_section(const F& f, double lo, double hi, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// U_p(x) = int d^p(x, y) nu(dy). Exact sum for atoms, periodic trapezoid
/// quadrature for density variants.
inline double u_value(double p, const CircleMeasure& m, CirclePoint x, int n = 4096) {
  if (p < 1.0) throw std::invalid_argument("u_value: requires p >= 1");
  if (m.is_empirical()) {
    const auto& e = m.empirical_data();
    double acc = 0.0;
    for (std::size_t i = 0; i < e.atoms.size(); ++i)
      acc += e.weights[i] * detail::pow_p(dist(x, CirclePoint(e.atoms[i])), p);
    return acc;
  }
  // midpoint rule in the chart centered at x: the d^p kinks at u = 0 and at
  // the antipode land on cell boundaries, keeping the error O(n^-2)
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = -pi + two_pi * (i + 0.5) / n;
    acc += m.density(CirclePoint(x.theta + u)) * detail::pow_p(std::fabs(u), p);
  }
  return acc / n;
}

/// U_p'(x) = p ( int_{x-pi}^{x} (x-y)^{p-1} nu(dy)
///             - int_{x}^{x+pi} (y-x)^{p-1} nu(dy) ).
/// For p = 1 this is nu((x-pi, x)) - nu((x, x+pi)).
inline double u_grad(double p, const CircleMeasure& m, CirclePoint x, int n = 4096) {
  if (p < 1.0) throw std::invalid_argument("u_grad: requires p >= 1");
  if (m.is_empirical()) {
    const auto& e = m.empirical_data();
    double acc = 0.0;
    for (std::size_t i = 0; i < e.atoms.size(); ++i) {
      const double g = signed_gap(x, CirclePoint(e.atoms[i]));
      if (p < 2.0 && (std::fabs(g) < 1e-12 || pi - std::fabs(g) < 1e-12))
        throw std::domain_error("u_grad: singular point (atom or antipode, p < 2)");
      const double sgn = (g > 0.0) ? 1.0 : (g < 0.0 ? -1.0 : 0.0);
      acc -= e.weights[i] * sgn * detail::pow_p(std::fabs(g), p - 1.0);
    }
    return p * acc;
  }
  // same centered chart as u_value: the sign jump at the antipode sits on a
  // cell boundary instead of straddling a cell
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = -pi + two_pi * (i + 0.5) / n;
    const double sgn = (u > 0.0) ? 1.0 : -1.0;
    acc -= m.density(CirclePoint(x.theta + u)) * sgn *
           detail::pow_p(std::fabs(u), p - 1.0);
  }
  return p * acc / n;
}

/// U_p''(x) for measures with a continuous density:
///   p > 1: p(p-1) int d^{p-2}(y, x) nu(dy) - p pi^{p-2} nu(x')
///   p = 1: (nu(x) - nu(x')) / pi
/// For p in (1,2) the integrable singularity at y = x is handled by a
/// symmetric exclusion of radius 1e-4 with an analytic local correction.
inline double u_hess(double p, const CircleMeasure& m, CirclePoint x, int n = 4096) {
  if (p < 1.0) throw std::invalid_argument("u_hess: requires p >= 1");
  if (m.is_empirical())
    throw std::domain_error("u_hess: only distributional for atomic measures");
  const double nu_anti = m.density(antipode(x));
  if (p == 1.0) return (m.density(x) - nu_anti) / pi;
  // centered chart with midpoint nodes; for p < 2 the symmetric exclusion
  // window is widened to a whole number of cells so its edge sits on a cell
  // boundary, and the excluded mass is restored analytically
  const double h = two_pi / n;
  double eps = 0.0;
  if (p < 2.0) eps = h * std::ceil(std::max(1e-4, h) / h);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = -pi + two_pi * (i + 0.5) / n;
    if (std::fabs(u) < eps) continue;
    acc += m.density(CirclePoint(x.theta + u)) * detail::pow_p(std::fabs(u), p - 2.0);
  }
  double integral = acc / n;
  if (eps > 0.0)
    integral += m.density(x) * std::pow(eps, p - 1.0) / ((p - 1.0) * pi);
  return p * (p - 1.0) * integral - p * detail::pow_p(pi, p - 2.0) * nu_anti;
}

struct Minimum {
  CirclePoint location;
  double value;
};

/// Discretized potential with its global minima, grid Lipschitz bound and
/// (for constant landscapes) a degeneracy flag.
struct PotentialGrid {
  double p = 2.0;
  int n = 0;
  std::vector<double> values;
  double min_value = 0.0;
  double max_value = 0.0;
  double lipschitz = 0.0;  // max |U'| estimated from grid differences
  bool degenerate = false;
  std::vector<Minimum> minima;

  double theta(int i) const { return -pi + two_pi * i / n; }
};

namespace detail {

inline void finish_grid(PotentialGrid& g) {
  const int n = g.n;
  g.min_value = *std::min_element(g.values.begin(), g.values.end());
  g.max_value = *std::max_element(g.values.begin(), g.values.end());
  double lip = 0.0;
  const double h = two_pi / n;
  for (int i = 0; i < n; ++i) {
    const double d = std::fabs(g.values[(i + 1) % n] - g.values[i]) / h;
    lip = std::max(lip, d);
  }
  g.lipschitz = lip;
  g.degenerate =
      (g.max_value - g.min_value) <= 1e-10 * (1.0 + std::fabs(g.max_value));
}

inline std::vector<int> grid_local_minima(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    const double prev = v[(i + n - 1) % n];
    const double next = v[(i + 1) % n];
    if (v[i] <= prev && v[i] <= next && (v[i] < prev || v[i] < next))
      out.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Scan the n-grid of U_p, refine each local basin by golden section to width
/// tol, and keep the refined minimizers lying within
/// lipschitz * (2 pi / n) + tol of the global minimum.
inline std::vector<Minimum> find_minima(double p, const CircleMeasure& m, int n,
                                        double tol, bool* degenerate_flag = nullptr,
                                        int quad_n = 4096) {
  if (n < 64) throw std::invalid_argument("find_minima: n >= 64 required");
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i)
    vals[i] = u_value(p, m, CirclePoint(-pi + two_pi * i / n), quad_n);
  const double vmin = *std::min_element(vals.begin(), vals.end());
  const double vmax = *std::max_element(vals.begin(), vals.end());
  if (degenerate_flag) *degenerate_flag = false;
  if (vmax - vmin <= 1e-10 * (1.0 + std::fabs(vmax))) {
    if (degenerate_flag) *degenerate_flag = true;
    return {};  // constant potential: every point is a minimizer
  }
  const double h = two_pi / n;
  double lip = 0.0;
  for (int i = 0; i < n; ++i)
    lip = std::max(lip, std::fabs(vals[(i + 1) % n] - vals[i]) / h);

  auto f = [&](double x) { return u_value(p, m, CirclePoint(x), quad_n); };
  std::vector<Minimum> refined;
  for (int i : detail::grid_local_minima(vals)) {
    const double center = -pi + two_pi * i / n;
    const double x = detail::golden_section(f, center - h, center + h, tol);
    refined.push_back({CirclePoint(x), f(x)});
  }
  double best = 1e300;
  for (const auto& r : refined) best = std::min(best, r.value);
  std::vector<Minimum> out;
  const double cutoff = best + lip * h + tol;
  for (const auto& r : refined) {
    if (r.value > cutoff) continue;
    bool dup = false;
    for (const auto& o : out)
      if (dist(o.location, r.location) < std::max(10.0 * tol, h)) dup = true;
    if (!dup) out.push_back(r);
  }
  std::sort(out.begin(), out.end(),
            [](const Minimum& a, const Minimum& b) {
              return a.location.theta < b.location.theta;
            });
  return out;
}

inline PotentialGrid build_potential_grid(double p, const CircleMeasure& m,
                                          int n = 4096, double tol = 1e-10,
                                          int quad_n = 4096) {
  PotentialGrid g;
  g.p = p;
  g.n = n;
  g.values.resize(n);
  for (int i = 0; i < n; ++i)
    g.values[i] = u_value(p, m, CirclePoint(g.theta(i)), quad_n);
  detail::finish_grid(g);
  if (!g.degenerate) g.minima = find_minima(p, m, n, tol, nullptr, quad_n);
  return g;
}

/// Hand-built potential from raw grid values (tests, schedules validation).
inline PotentialGrid potential_from_values(double p, std::vector<double> values) {
  PotentialGrid g;
  g.p = p;
  g.n = static_cast<int>(values.size());
  g.values = std::move(values);
  detail::finish_grid(g);
  for (int i : detail::grid_local_minima(g.values))
    if (g.values[i] <= g.min_value + 1e-12 * (1.0 + std::fabs(g.min_value)))
      g.minima.push_back({CirclePoint(g.theta(i)), g.values[i]});
  return g;
}

namespace detail {

// Sparse table for O(1) range maxima over the doubled grid.
struct RangeMax {
  int n = 0;
  std::vector<std::vector<double>> table;

  explicit RangeMax(const std::vector<double>& v) : n(static_cast<int>(v.size())) {
    std::vector<double> doubled(v);
    doubled.insert(doubled.end(), v.begin(), v.end());
    int levels = 1;
    while ((1 << levels) <= 2 * n) ++levels;
    table.assign(levels, doubled);
    for (int l = 1; l < levels; ++l) {
      const int half = 1 << (l - 1);
      for (int i = 0; i + (1 << l) <= 2 * n; ++i)
        table[l][i] = std::max(table[l - 1][i], table[l - 1][i + half]);
    }
  }

  // max over doubled-array indices [a, b] inclusive, a <= b
  double query(int a, int b) const {
    const int len = b - a + 1;
    const int l = 31 - __builtin_clz(len);
    return std::max(table[l][a], table[l][b + 1 - (1 << l)]);
  }
};

}  // namespace detail

/// Minimal elevation between grid points i and j: the smaller of the two
/// running maxima along the two arcs (endpoints included).
inline double elevation(const PotentialGrid& g, int i, int j) {
  if (i < 0 || j < 0 || i >= g.n || j >= g.n)
    throw std::out_of_range("elevation: bad index");
  if (i == j) return g.values[i];
  if (i > j) std::swap(i, j);
  double m1 = -1e300, m2 = -1e300;
  for (int k = i; k <= j; ++k) m1 = std::max(m1, g.values[k]);
  for (int k = j; k <= i + g.n; ++k) m2 = std::max(m2, g.values[k % g.n]);
  return std::min(m1, m2);
}

struct CriticalDepth {
  double b = 0.0;        // max_{x,y} U(x,y) - U(x) - U(y) + min U
  double b_alt = 0.0;    // max_y U(x0, y) - U(y), one global minimizer x0
  double b_prime = 0.0;  // min over x0 in M of the b_alt expression
};

/// Brute-force critical depth over all grid pairs, with O(1) arc maxima.
inline CriticalDepth critical_depth(const PotentialGrid& g) {
  const int n = g.n;
  const auto& v = g.values;
  detail::RangeMax rm(v);
  const double vmin = g.min_value;

  auto elev = [&](int i, int j) {  // requires i <= j
    if (i == j) return v[i];
    return std::min(rm.query(i, j), rm.query(j, i + n));
  };

  CriticalDepth out;
  double b = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      b = std::max(b, elev(i, j) - v[i] - v[j] + vmin);
  out.b = b;

  std::vector<int> mins;
  for (int i = 0; i < n; ++i)
    if (v[i] <= vmin + 1e-12 * (1.0 + std::fabs(vmin))) mins.push_back(i);
  if (mins.empty()) mins.push_back(0);

  auto alt_at = [&](int i0) {
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      const double e = (i0 <= j) ? elev(i0, j) : elev(j, i0);
      best = std::max(best, e - v[j]);
    }
    return best;
  };
  out.b_alt = alt_at(mins.front());
  double bp = 1e300;
  for (int i0 : mins) bp = std::min(bp, alt_at(i0));
  out.b_prime = bp;
  return out;
}

/// Fourier-series evaluator of U_2 and its derivatives for density measures.
/// Built once, then O(K) per evaluation; used by the adjoint diagnostics.
struct FourierPotential2 {
  double base = pi * pi / 3.0;
  std::vector<double> ac, bc;  // premultiplied: U(x) = base + sum ac_k cos((k+1)x) + bc_k sin((k+1)x)

  double value(double x) const {
    double v = base;
    for (std::size_t k = 0; k < ac.size(); ++k) {
      const double kk = static_cast<double>(k + 1);
      v += ac[k] * std::cos(kk * x) + bc[k] * std::sin(kk * x);
    }
    return v;
  }
  double grad(double x) const {
    double v = 0.0;
    for (std::size_t k = 0; k < ac.size(); ++k) {
      const double kk = static_cast<double>(k + 1);
      v += kk * (-ac[k] * std::sin(kk * x) + bc[k] * std::cos(kk * x));
    }
    return v;
  }
  double hess(double x) const {
    double v = 0.0;
    for (std::size_t k = 0; k < ac.size(); ++k) {
      const double kk = static_cast<double>(k + 1);
      v -= kk * kk * (ac[k] * std::cos(kk * x) + bc[k] * std::sin(kk * x));
    }
    return v;
  }
};

/// d^2(x, y) on the circle has the cosine series
///   pi^2/3 + 4 sum_k (-1)^k cos(k (y - x)) / k^2,
/// so U_2 follows from the trigonometric moments of nu.
inline FourierPotential2 build_fourier_p2(const CircleMeasure& m, int k_max = 2048,
                                          int n_quad = 8192) {
  if (!m.has_density())
    throw std::domain_error("build_fourier_p2: density measures only");
  FourierPotential2 f;
  std::vector<double> dens(n_quad);
  for (int i = 0; i < n_quad; ++i)
    dens[i] = m.density(-pi + two_pi * i / n_quad);
  int quiet = 0;
  for (int k = 1; k <= k_max; ++k) {
    double a = 0.0, b = 0.0;
    for (int i = 0; i < n_quad; ++i) {
      const double y = -pi + two_pi * i / n_quad;
      a += dens[i] * std::cos(k * y);
      b += dens[i] * std::sin(k * y);
    }
    a /= n_quad;
    b /= n_quad;
    const double scale = 4.0 * ((k % 2 == 0) ? 1.0 : -1.0) / (k * k);
    f.ac.push_back(scale * a);
    f.bc.push_back(scale * b);
    quiet = (std::fabs(a) + std::fabs(b) < 1e-15) ? quiet + 1 : 0;
    if (quiet >= 8) break;
  }
  return f;
}

}  // namespace pmeans

#endif
