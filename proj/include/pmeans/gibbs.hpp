#ifndef PMEANS_GIBBS_HPP
#define PMEANS_GIBBS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pmeans/circle.hpp"
#include "pmeans/measure.hpp"
#include "pmeans/potential.hpp"

namespace pmeans {

/// mu_beta = exp(-beta U) / Z w.r.t. lambda, tabulated on the potential grid.
struct GibbsGrid {
  double beta = 0.0;
  int n = 0;
  std::vector<double> density;  // w.r.t. lambda, integrates to 1
  double log_z = 0.0;           // log Z after the min-shift

  double theta(int i) const { return -pi + two_pi * i / n; }
};

/// Min-shifted so beta up to a few hundred stays in range; the shift cancels
/// in the normalized density.
inline GibbsGrid gibbs_build(const PotentialGrid& g, double beta) {
  if (beta < 0.0) throw std::invalid_argument("gibbs_build: beta >= 0 required");
  GibbsGrid out;
  out.beta = beta;
  out.n = g.n;
  out.density.resize(g.n);
  double z = 0.0;
  for (int i = 0; i < g.n; ++i) {
    out.density[i] = std::exp(-beta * (g.values[i] - g.min_value));
    z += out.density[i];
  }
  z /= g.n;  // uniform-grid trapezoid of a periodic function
  for (double& d : out.density) d /= z;
  out.log_z = std::log(z) - beta * g.min_value;
  return out;
}

/// mu_beta of the union of delta-balls around the centers.
inline double gibbs_mass(const GibbsGrid& g, const std::vector<CirclePoint>& centers,
                         double delta) {
  if (delta <= 0.0) throw std::invalid_argument("gibbs_mass: delta > 0 required");
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const CirclePoint x(g.theta(i));
    for (const auto& c : centers) {
      if (dist(x, c) <= delta) {
        acc += g.density[i];
        break;
      }
    }
  }
  return acc / g.n;
}

/// Total variation (1/2) int |d1 - d2| dlambda between grid densities.
inline double tv_grid(const std::vector<double>& d1, const std::vector<double>& d2) {
  if (d1.size() != d2.size() || d1.empty())
    throw std::invalid_argument("tv_grid: grid mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < d1.size(); ++i) acc += std::fabs(d1[i] - d2[i]);
  return 0.5 * acc / static_cast<double>(d1.size());
}

/// Chi-square discrepancy int (hist/mu - 1)^2 dmu, the grid proxy for the
/// paper's I_t functional. hist is a density w.r.t. lambda on the same grid.
inline double chi2_grid(const std::vector<double>& hist, const GibbsGrid& g) {
  if (static_cast<int>(hist.size()) != g.n)
    throw std::invalid_argument("chi2_grid: grid mismatch");
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i) {
    if (g.density[i] <= 0.0)
      throw std::domain_error("chi2_grid: zero Gibbs density cell");
    const double r = hist[i] / g.density[i] - 1.0;
    acc += r * r * g.density[i];
  }
  return acc / g.n;
}

/// Zero-temperature limit weights: each minimizer x gets mass proportional to
/// (1 - nu(x'))^{-1/2} where x' is its antipode.
inline std::vector<double> hwang_weights(const std::vector<CirclePoint>& minima,
                                         const CircleMeasure& m) {
  if (!m.has_density())
    throw std::domain_error("hwang_weights: density measures only");
  std::vector<double> w;
  w.reserve(minima.size());
  double total = 0.0;
  for (const auto& x : minima) {
    const double nu_anti = m.density(antipode(x));
    if (nu_anti >= 1.0)
      throw std::domain_error("hwang_weights: degenerate limit, nu(antipode) >= 1");
    const double wi = 1.0 / std::sqrt(1.0 - nu_anti);
    w.push_back(wi);
    total += wi;
  }
  for (double& wi : w) wi /= total;
  return w;
}

}  // namespace pmeans

#endif
