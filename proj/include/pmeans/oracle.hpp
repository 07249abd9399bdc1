#ifndef PMEANS_ORACLE_HPP
#define PMEANS_ORACLE_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pmeans/circle.hpp"
#include "pmeans/measure.hpp"
#include "pmeans/potential.hpp"

namespace pmeans {

struct OracleResult {
  std::vector<Minimum> minima;
  bool degenerate = false;  // constant potential, every point minimizes
};

/// Brute-force reference minimizer of U_p: n-grid scan plus golden-section
/// refinement of every local basin.
inline OracleResult grid_minimize(double p, const CircleMeasure& m, int n = 8192,
                                  double tol = 1e-10) {
  if (n < 256) throw std::invalid_argument("grid_minimize: n >= 256 required");
  OracleResult out;
  out.minima = find_minima(p, m, n, tol, &out.degenerate);
  return out;
}

/// Exact p = 2 mean of a weighted atomic measure by cut enumeration: cutting
/// the circle at an atom's antipode makes U_2 an ordinary quadratic in the
/// unrolled coordinate, minimized by the weighted arithmetic mean.
inline OracleResult exact_mean_p2_empirical(const std::vector<CirclePoint>& atoms,
                                            const std::vector<double>& weights) {
  const std::size_t n = atoms.size();
  if (n == 0 || weights.size() != n)
    throw std::invalid_argument("exact_mean_p2_empirical: bad input sizes");
  double wsum = 0.0;
  for (double w : weights) {
    if (w <= 0.0)
      throw std::invalid_argument("exact_mean_p2_empirical: weights must be > 0");
    wsum += w;
  }
  if (std::fabs(wsum - 1.0) > 1e-9)
    throw std::invalid_argument("exact_mean_p2_empirical: weights must sum to 1");

  auto u2 = [&](CirclePoint x) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = dist(x, atoms[i]);
      v += weights[i] * d * d;
    }
    return v;
  };

  // U2 is piecewise quadratic in x with kinks exactly at atom antipodes, so
  // the global minimum is either an interior stationary point of one smooth
  // piece or a kink. The smooth pieces correspond to the antipode landing in
  // one of the gaps between consecutive sorted atoms; cutting the circle in
  // that gap unrolls the data around the piece and the stationary point is
  // the plain weighted mean of the unrolled angles. Evaluating the true U2 at
  // every candidate makes consistency filtering unnecessary.
  std::vector<double> sorted;
  sorted.reserve(n);
  for (const auto& a : atoms) sorted.push_back(a.theta);
  std::sort(sorted.begin(), sorted.end());

  std::vector<Minimum> candidates;
  for (std::size_t g = 0; g < n; ++g) {
    const double lo = sorted[g];
    const double hi = (g + 1 < n) ? sorted[g + 1] : sorted[0] + two_pi;
    // cut at the midpoint of the gap between atoms g and g+1; the candidate
    // mean's antipode belongs here when this piece holds the minimum
    const double q = 0.5 * (lo + hi);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double y = atoms[i].theta;
      while (y <= q) y += two_pi;
      while (y > q + two_pi) y -= two_pi;
      mean += weights[i] * y;
    }
    candidates.push_back({CirclePoint(mean), u2(CirclePoint(mean))});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const CirclePoint k = antipode(atoms[i]);
    candidates.push_back({k, u2(k)});
  }

  double best = candidates.front().value;
  for (const auto& c : candidates) best = std::min(best, c.value);
  OracleResult out;
  for (const auto& c : candidates) {
    if (c.value > best + 1e-12) continue;
    bool dup = false;
    for (const auto& o : out.minima)
      if (dist(o.location, c.location) < 1e-9) dup = true;
    if (!dup) out.minima.push_back(c);
  }
  std::sort(out.minima.begin(), out.minima.end(),
            [](const Minimum& a, const Minimum& b) {
              return a.location.theta < b.location.theta;
            });
  return out;
}

/// Histogram mass of bins whose centers lie within delta of some minimizer.
/// hist holds per-bin probability masses over B equal bins covering (-pi, pi].
inline double neighborhood_mass(const std::vector<double>& hist,
                                const std::vector<CirclePoint>& minima,
                                double delta) {
  const int B = static_cast<int>(hist.size());
  if (B == 0) throw std::invalid_argument("neighborhood_mass: empty histogram");
  if (delta < two_pi / B)
    throw std::invalid_argument("neighborhood_mass: delta below bin width");
  double acc = 0.0;
  for (int i = 0; i < B; ++i) {
    const CirclePoint center(-pi + two_pi * (i + 0.5) / B);
    for (const auto& mpt : minima) {
      if (dist(center, mpt) <= delta) {
        acc += hist[i];
        break;
      }
    }
  }
  return acc;
}

}  // namespace pmeans

#endif
