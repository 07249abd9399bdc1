#ifndef PMEANS_DIAGNOSTICS_HPP
#define PMEANS_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pmeans/circle.hpp"
#include "pmeans/measure.hpp"
#include "pmeans/potential.hpp"
#include "pmeans/stats.hpp"

namespace pmeans {

inline void check_adjoint_params(double alpha, double beta) {
  if (alpha <= 0.0 || beta < 1.0)
    throw std::invalid_argument("adjoint: alpha > 0 and beta >= 1 required");
  if (alpha * beta >= 0.5 || alpha * beta * beta > 0.5)
    throw std::invalid_argument(
        "adjoint: need alpha*beta < 1/2 and alpha*beta^2 <= 1/2");
}

/// Discrepancy-from-invariance of the Gibbs family under the p = 2 jump
/// generator:
///   (beta^2/2)(U')^2 - (beta/2)U'' - 1/alpha
///   + (1/(alpha(1-alpha beta))) int_{|u| < (1-alpha beta) pi}
///       exp(beta [U(x) - U(x - eta u)]) nu(x+u) lambda(du),
/// eta = alpha beta / (1 - alpha beta). Identically 0 for the uniform law.
inline double lstar_one_p2(const CircleMeasure& m, const FourierPotential2& u,
                           double alpha, double beta, CirclePoint x,
                           int n_quad = 4096) {
  check_adjoint_params(alpha, beta);
  const double ab = alpha * beta;
  const double eta = ab / (1.0 - ab);
  const double half = (1.0 - ab) * pi;

  const double ux = u.value(x.theta);
  const double g = u.grad(x.theta);
  const double h = u.hess(x.theta);

  // closed trapezoid on the chart u in [-half, half]
  const double step = 2.0 * half / n_quad;
  double integral = 0.0;
  for (int i = 0; i <= n_quad; ++i) {
    const double off = -half + step * i;
    const double weight = (i == 0 || i == n_quad) ? 0.5 : 1.0;
    const double dens = m.density(canonical(x.theta + off));
    const double e = std::exp(beta * (ux - u.value(x.theta - eta * off)));
    integral += weight * dens * e;
  }
  integral *= step / two_pi;  // lambda is normalized to total mass 1

  return 0.5 * beta * beta * g * g - 0.5 * beta * h - 1.0 / alpha +
         integral / (alpha * (1.0 - ab));
}

inline double lstar_one_p2(const CircleMeasure& m, double alpha, double beta,
                           CirclePoint x, int n_quad = 4096) {
  return lstar_one_p2(m, build_fourier_p2(m), alpha, beta, x, n_quad);
}

struct ScalingRow {
  double alpha;
  double beta;
  double sup_abs;  // sup over the evaluation grid of |L* 1|
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;
  std::vector<double> slopes;  // log-log slope in alpha, one per beta
  double holder_a = 1.0;
  bool slope_ok = false;  // every slope within [a - 0.15, 1.15]
};

/// Sup-norm table of the adjoint discrepancy over (alpha, beta) pairs, with a
/// least-squares log-log fit of the alpha-scaling at each fixed beta.
inline ScalingStudy lstar_scaling_study(const CircleMeasure& m,
                                        const std::vector<double>& alpha_list,
                                        const std::vector<double>& beta_list,
                                        int grid_n = 256, int n_quad = 4096) {
  if (alpha_list.empty() || beta_list.empty())
    throw std::invalid_argument("lstar_scaling_study: empty parameter list");
  const FourierPotential2 u = build_fourier_p2(m);
  ScalingStudy out;
  out.holder_a = m.holder_a();
  for (double beta : beta_list) {
    std::vector<double> la, ls;
    for (double alpha : alpha_list) {
      double sup = 0.0;
      for (int i = 0; i < grid_n; ++i) {
        const CirclePoint x(-pi + two_pi * i / grid_n);
        sup = std::max(sup, std::fabs(lstar_one_p2(m, u, alpha, beta, x, n_quad)));
      }
      out.rows.push_back({alpha, beta, sup});
      if (sup > 0.0) {
        la.push_back(std::log(alpha));
        ls.push_back(std::log(sup));
      }
    }
    double slope = 0.0;
    if (la.size() >= 2) {
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < la.size(); ++i) { mx += la[i]; my += ls[i]; }
      mx /= la.size();
      my /= la.size();
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < la.size(); ++i) {
        num += (la[i] - mx) * (ls[i] - my);
        den += (la[i] - mx) * (la[i] - mx);
      }
      slope = num / den;
    }
    out.slopes.push_back(slope);
  }
  out.slope_ok = true;
  for (double s : out.slopes)
    if (s < out.holder_a - 0.15 || s > 1.15) out.slope_ok = false;
  return out;
}

/// Wrapped Gaussian density on (-pi, pi], series truncated at |n| <= 8
/// (error below 1e-15 for s <= 4).
inline double wrapped_gaussian_pdf(double x, double s) {
  if (s <= 0.0) throw std::invalid_argument("wrapped_gaussian_pdf: s > 0");
  double acc = 0.0;
  for (int n = -8; n <= 8; ++n) {
    const double z = x + two_pi * n;
    acc += std::exp(-z * z / (2.0 * s));
  }
  return acc / std::sqrt(two_pi * s);
}

/// CDF of the wrapped Gaussian over (-pi, x], x in (-pi, pi].
inline double wrapped_gaussian_cdf(double x, double s) {
  if (s <= 0.0) throw std::invalid_argument("wrapped_gaussian_cdf: s > 0");
  const double sd = std::sqrt(s);
  auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  double acc = 0.0;
  for (int n = -8; n <= 8; ++n) {
    acc += phi((x + two_pi * n) / sd) - phi((-pi + two_pi * n) / sd);
  }
  return std::clamp(acc, 0.0, 1.0);
}

/// KS statistic of circle samples against the centered wrapped Gaussian with
/// variance parameter s.
inline double wrapped_gaussian_ks(const std::vector<CirclePoint>& samples,
                                  double s) {
  std::vector<double> xs;
  xs.reserve(samples.size());
  for (const auto& p : samples) xs.push_back(p.theta);
  return ks_statistic(xs, [s](double x) { return wrapped_gaussian_cdf(x, s); });
}

}  // namespace pmeans

#endif
