#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pmeans/diagnostics.hpp"
#include "pmeans/rng.hpp"
#include "pmeans/stats.hpp"

using namespace pmeans;

TEST_CASE("adjoint vanishes for the uniform measure", "[diagnostics]") {
  const auto u = CircleMeasure::uniform();
  const auto f = build_fourier_p2(u);
  for (double alpha : {1e-3, 1e-2}) {
    for (double beta : {1.0, 2.0}) {
      for (int i = 0; i < 16; ++i) {
        const CirclePoint x(-pi + two_pi * i / 16);
        CHECK(lstar_one_p2(u, f, alpha, beta, x) == Catch::Approx(0.0).margin(1e-6));
      }
    }
  }
}

TEST_CASE("adjoint parameter domain", "[diagnostics]") {
  const auto u = CircleMeasure::uniform();
  CHECK_THROWS_AS(lstar_one_p2(u, 0.3, 2.0, CirclePoint(0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(lstar_one_p2(u, 0.1, 3.0, CirclePoint(0.0)),
                  std::invalid_argument);
}

TEST_CASE("adjoint symmetry point", "[diagnostics]") {
  // even density: U2' vanishes at 0, so the gradient term drops out
  const auto m = CircleMeasure::trig_poly({0.4, 0.1}, {});
  const auto f = build_fourier_p2(m);
  CHECK(f.grad(0.0) == Catch::Approx(0.0).margin(1e-12));
  const double alpha = 1e-3, beta = 2.0;
  const double full = lstar_one_p2(m, f, alpha, beta, CirclePoint(0.0));
  // recompute the reduced display (without the gradient term) independently
  const double ab = alpha * beta;
  const double eta = ab / (1.0 - ab), half = (1.0 - ab) * pi;
  const int n = 4096;
  double integral = 0.0;
  const double step = 2.0 * half / n;
  for (int i = 0; i <= n; ++i) {
    const double off = -half + step * i;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    integral += w * m.density(canonical(off)) *
                std::exp(beta * (f.value(0.0) - f.value(-eta * off)));
  }
  integral *= step / two_pi;
  const double reduced =
      -0.5 * beta * f.hess(0.0) - 1.0 / alpha + integral / (alpha * (1.0 - ab));
  CHECK(full == Catch::Approx(reduced).margin(1e-10));
}

TEST_CASE("adjoint rotation equivariance", "[diagnostics]") {
  Rng rng(77);
  const std::vector<double> cosc = {0.3, -0.1}, sinc = {0.2};
  const auto base = CircleMeasure::trig_poly(cosc, sinc);
  const auto fb = build_fourier_p2(base);
  for (int rep = 0; rep < 10; ++rep) {
    const double shift = rng.uniform_circle().theta;
    // rotated density nu(x - shift) as a trig poly
    std::vector<double> rc(2), rs(2);
    rc[0] = cosc[0] * std::cos(shift) - sinc[0] * std::sin(shift);
    rs[0] = sinc[0] * std::cos(shift) + cosc[0] * std::sin(shift);
    rc[1] = cosc[1] * std::cos(2.0 * shift);
    rs[1] = cosc[1] * std::sin(2.0 * shift);
    const auto rot = CircleMeasure::trig_poly(rc, rs);
    const auto fr = build_fourier_p2(rot);
    const CirclePoint x = rng.uniform_circle();
    CHECK(lstar_one_p2(rot, fr, 1e-3, 2.0, CirclePoint(x.theta + shift)) ==
          Catch::Approx(lstar_one_p2(base, fb, 1e-3, 2.0, x)).margin(1e-8));
  }
}

TEST_CASE("adjoint quadrature convergence", "[diagnostics]") {
  const auto m = CircleMeasure::trig_poly({0.4}, {0.2});
  const auto f = build_fourier_p2(m);
  const double a = lstar_one_p2(m, f, 1e-3, 2.0, CirclePoint(0.7), 8192);
  const double b = lstar_one_p2(m, f, 1e-3, 2.0, CirclePoint(0.7), 16384);
  CHECK(std::fabs(a - b) < 1e-7);
}

TEST_CASE("adjoint scaling study", "[diagnostics]") {
  // uniform: all entries below 1e-6
  const auto u = CircleMeasure::uniform();
  auto study = lstar_scaling_study(u, {1e-3, 3e-3}, {1.0, 2.0}, 64);
  for (const auto& r : study.rows) CHECK(r.sup_abs < 1e-6);

  // smooth density at beta = 2: slope about 1
  const auto m = CircleMeasure::trig_poly({0.4}, {0.2});
  study = lstar_scaling_study(m, {1e-4, 3e-4, 1e-3, 3e-3}, {2.0}, 64);
  REQUIRE(study.slopes.size() == 1);
  CHECK(study.slopes[0] == Catch::Approx(1.0).margin(0.15));
  CHECK(study.slope_ok);
  for (const auto& r : study.rows) {
    CHECK(r.sup_abs >= 0.0);
    CHECK(std::isfinite(r.sup_abs));
  }
}

TEST_CASE("wrapped gaussian pdf and cdf", "[diagnostics]") {
  // tiny variance: indistinguishable from the plain Gaussian
  const double s = 1e-4, sd = std::sqrt(s);
  auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  for (double x : {-0.02, -0.001, 0.0, 0.001, 0.02})
    CHECK(wrapped_gaussian_cdf(x, s) == Catch::Approx(phi(x / sd)).margin(1e-12));
  // pdf integrates to 1 for moderate and large variance
  for (double var : {0.25, 1.0, 4.0}) {
    double acc = 0.0;
    const int n = 4096;
    for (int i = 0; i < n; ++i)
      acc += wrapped_gaussian_pdf(-pi + two_pi * i / n, var);
    CHECK(acc * two_pi / n == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("wrapped gaussian ks null behaviour", "[diagnostics]") {
  // exact wrapped draws: p-values should look uniform; median near 0.5
  std::vector<double> pvals;
  for (int rep = 0; rep < 100; ++rep) {
    Rng rng = Rng::split(31337, rep);
    std::vector<CirclePoint> xs;
    for (int i = 0; i < 2000; ++i)
      xs.push_back(CirclePoint(rng.normal() * 1.0));
    const double d = wrapped_gaussian_ks(xs, 1.0);
    pvals.push_back(ks_pvalue(d, xs.size()));
  }
  std::sort(pvals.begin(), pvals.end());
  CHECK(pvals[50] == Catch::Approx(0.5).margin(0.2));
}
