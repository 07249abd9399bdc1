#ifndef PMEANS_MEASURE_HPP
#define PMEANS_MEASURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <memory>
#include <variant>
#include <vector>

#include "pmeans/circle.hpp"
#include "pmeans/rng.hpp"

namespace pmeans {

struct Uniform {};

/// Density 1 + sum_k (c_k cos(k x) + s_k sin(k x)) with respect to the
/// normalized uniform measure lambda.
struct TrigPoly {
  std::vector<double> cosc;
  std::vector<double> sinc;
};

struct VonMisesComponent {
  double mu;
  double kappa;
  double weight;
};

struct VonMisesMixture {
  std::vector<VonMisesComponent> comps;
};

/// Piecewise-linear periodic density; values at nodes -pi + 2*pi*i/n.
struct PiecewiseLinear {
  std::vector<double> values;
};

struct Empirical {
  std::vector<double> atoms;    // canonical angles, distinct
  std::vector<double> weights;  // positive, sum to 1
};

namespace detail {

// Vose alias table for O(1) categorical draws. The table is padded with
// zero-weight slots to a power of two (at most 2048), so one 64-bit word
// supplies both the slot index (low bits) and the accept fraction (bits
// 11..63, disjoint from the index); the row is a single 16-byte entry.
struct AliasTable {
  struct Entry {
    double prob = 0.0;
    std::uint32_t alias = 0;
    std::uint32_t pad = 0;
  };
  std::vector<Entry> rows;
  std::uint64_t mask = 0;

  AliasTable() = default;
  explicit AliasTable(const std::vector<double>& w) {
    const std::size_t n = w.size();
    std::size_t P = 1;
    while (P < n) P *= 2;
    rows.resize(P);
    mask = P - 1;
    std::vector<double> scaled(P, 0.0);
    double total = 0.0;
    for (double x : w) total += x;
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < P; ++i) {
      if (i < n) scaled[i] = w[i] * static_cast<double>(P) / total;
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const auto s = small.back(); small.pop_back();
      const auto l = large.back(); large.pop_back();
      rows[s].prob = scaled[s];
      rows[s].alias = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (auto i : small) { rows[i].prob = 1.0; rows[i].alias = i; }
    for (auto i : large) { rows[i].prob = 1.0; rows[i].alias = i; }
  }

  std::size_t draw(Rng& rng) const {
    const std::uint64_t b = rng.next_u64();
    // beyond 2^11 slots the index would overlap the fraction bits
    const std::size_t i = static_cast<std::size_t>(
        mask < 2048 ? (b & mask) : (rng.next_u64() & mask));
    const double u = static_cast<double>(b >> 11) * 0x1.0p-53;
    const Entry e = rows[i];
    return (u < e.prob) ? i : e.alias;
  }
};

inline double bessel_i0(double kappa) { return std::cyl_bessel_i(0.0, kappa); }

// Slab-table rejection sampler for a whole von Mises mixture. For one
// component the unnormalized magnitude density g(x) = exp(kappa (cos x - 1))
// is decreasing on [0, pi], so with grid values g_m = g(pi m / M) the region
// under the graph splits into horizontal slabs: slab m (1 <= m <= M) is
// { (x, y) : 0 <= x <= pi m / M, g_m < y <= g_{m-1} } intersected with the
// graph, plus the full base rectangle [0, pi] x [0, g_M]. With M = 255 a
// component has 256 slots (255 slabs + base), so one alias draw over the
// concatenation picks component and slab together: component = slot >> 8,
// slab = slot & 255. Inside slab m a point with x <= pi (m-1) / M is under
// the graph unconditionally, making the fast path pure arithmetic (no
// density evaluation, no load beyond the alias row); the ~2% boundary
// sliver gets the exact density test. kappa = 0 degenerates gracefully:
// every slab but the base is empty and the draw is uniform.
struct VmMixtureTable {
  static constexpr int M = 255;  // slab slots per component: 255 slabs + base
  std::vector<double> kappa, mu;
  std::vector<double> gv;  // g at the grid points, stride 256, m = 0..M
  AliasTable slot;

  VmMixtureTable() = default;
  VmMixtureTable(const std::vector<double>& kap, const std::vector<double>& mus,
                 const std::vector<double>& weights)
      : kappa(kap), mu(mus) {
    const std::size_t n = kap.size();
    gv.assign(n * 256, 0.0);
    std::vector<double> area(n * 256, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      double* g = &gv[c * 256];
      for (int m = 0; m <= M; ++m)
        g[m] = std::exp(kappa[c] * (std::cos(pi * m / M) - 1.0));
      double tot = pi * g[M];
      for (int m = 1; m <= M; ++m) tot += (pi * m / M) * (g[m - 1] - g[m]);
      // slot m-1 holds slab m; slot 255 the base rectangle
      const double scale = weights[c] / tot;
      for (int m = 1; m <= M; ++m)
        area[c * 256 + m - 1] = scale * (pi * m / M) * (g[m - 1] - g[m]);
      area[c * 256 + 255] = scale * pi * g[M];
    }
    slot = AliasTable(area);
  }

  // draw in (-pi, pi], already centered at the chosen component's mu
  double draw(Rng& rng) const {
    for (;;) {
      const std::size_t s = slot.draw(rng);
      const std::size_t c = s >> 8, ms = s & 255;
      const std::uint64_t b = rng.next_u64();
      const double u = static_cast<double>(b >> 11) * 0x1.0p-53;
      const std::uint64_t sbit = (b & 1) << 63;
      if (ms == 255) {
        const double x = u * pi;
        return canonical(
            mu[c] +
            std::bit_cast<double>(std::bit_cast<std::uint64_t>(x) ^ sbit));
      }
      const double j = static_cast<double>(ms + 1);
      const double x = u * j * (pi / M);
      if (u * j <= j - 1.0)
        return canonical(
            mu[c] +
            std::bit_cast<double>(std::bit_cast<std::uint64_t>(x) ^ sbit));
      const double* g = &gv[c * 256];
      const double y = g[ms + 1] + rng.uniform() * (g[ms] - g[ms + 1]);
      if (y <= std::exp(kappa[c] * (std::cos(x) - 1.0)))
        return canonical(
            mu[c] +
            std::bit_cast<double>(std::bit_cast<std::uint64_t>(x) ^ sbit));
    }
  }
};

}  // namespace detail

/// A probability measure on the circle: an analytic density family or a
/// finite set of weighted atoms, with declared Holder metadata (a, A) for
/// the density variants.
class CircleMeasure {
 public:
  using Variant =
      std::variant<Uniform, TrigPoly, VonMisesMixture, PiecewiseLinear, Empirical>;

  static CircleMeasure uniform() { return CircleMeasure(Uniform{}); }

  static CircleMeasure trig_poly(std::vector<double> cosc, std::vector<double> sinc) {
    return CircleMeasure(TrigPoly{std::move(cosc), std::move(sinc)});
  }

  static CircleMeasure von_mises_mixture(std::vector<VonMisesComponent> comps) {
    return CircleMeasure(VonMisesMixture{std::move(comps)});
  }

  static CircleMeasure piecewise(std::vector<double> values) {
    return CircleMeasure(PiecewiseLinear{std::move(values)});
  }

  static CircleMeasure empirical(std::vector<double> atoms, std::vector<double> weights) {
    return CircleMeasure(Empirical{std::move(atoms), std::move(weights)});
  }

  explicit CircleMeasure(Variant v) : v_(std::move(v)) { validate_and_finish(); }

  const Variant& variant() const { return v_; }
  bool is_empirical() const { return std::holds_alternative<Empirical>(v_); }
  bool has_density() const { return !is_empirical(); }

  double holder_a() const { return holder_a_; }
  double holder_A() const { return holder_A_; }
  void set_holder(double a, double A) {
    if (a <= 0.0 || a > 1.0 || A < 0.0)
      throw std::invalid_argument("holder: need a in (0,1], A >= 0");
    holder_a_ = a;
    holder_A_ = A;
  }

  /// Density with respect to lambda (so Uniform is identically 1).
  double density(CirclePoint x) const { return density(x.theta); }

  double density(double theta) const {
    return std::visit(
        [&](const auto& m) -> double { return density_impl(m, theta); }, v_);
  }

  /// Exact sample from the measure.
  CirclePoint sample(Rng& rng) const {
    return std::visit([&](const auto& m) { return sample_impl(m, rng); }, v_);
  }

  /// n exact samples, dispatched once. The simulators draw targets in blocks;
  /// keeping the loop inside the dispatch lets the per-variant state (alias
  /// rows, slab tables) stay in registers across iterations.
  void sample_block(Rng& rng, double* out, int n) const {
    if (std::holds_alternative<VonMisesMixture>(v_)) {
      const auto& tab = *vm_table_;
      for (int j = 0; j < n; ++j) out[j] = tab.draw(rng);
      return;
    }
    if (const auto* e = std::get_if<Empirical>(&v_)) {
      for (int j = 0; j < n; ++j) out[j] = e->atoms[alias_.draw(rng)];
      return;
    }
    for (int j = 0; j < n; ++j) out[j] = sample(rng).theta;
  }

  const Empirical& empirical_data() const {
    if (const auto* e = std::get_if<Empirical>(&v_)) return *e;
    throw std::logic_error("not an empirical measure");
  }

 private:
  Variant v_;
  double holder_a_ = 1.0;
  double holder_A_ = 0.0;
  double envelope_ = 1.0;           // rejection envelope for density variants
  std::vector<double> weight_cdf_;  // mixtures
  detail::AliasTable alias_;        // empirical atoms
  std::vector<double> i0_;          // per-component I0(kappa)
  std::shared_ptr<detail::VmMixtureTable> vm_table_;

  static constexpr int kGrid = 4096;

  void validate_and_finish();

  // --- density ---
  static double density_impl(const Uniform&, double) { return 1.0; }

  static double density_impl(const TrigPoly& m, double x) {
    double v = 1.0;
    for (std::size_t k = 0; k < m.cosc.size(); ++k)
      v += m.cosc[k] * std::cos(static_cast<double>(k + 1) * x);
    for (std::size_t k = 0; k < m.sinc.size(); ++k)
      v += m.sinc[k] * std::sin(static_cast<double>(k + 1) * x);
    return v;
  }

  double density_impl(const VonMisesMixture& m, double x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < m.comps.size(); ++i) {
      const auto& c = m.comps[i];
      v += c.weight * std::exp(c.kappa * std::cos(x - c.mu)) / i0_[i];
    }
    return v;
  }

  static double density_impl(const PiecewiseLinear& m, double x) {
    const std::size_t n = m.values.size();
    double u = (x + pi) / two_pi * static_cast<double>(n);
    if (u < 0.0) u = 0.0;
    auto i = static_cast<std::size_t>(u);
    if (i >= n) i = n - 1;
    const double frac = u - static_cast<double>(i);
    const double v0 = m.values[i];
    const double v1 = m.values[(i + 1) % n];
    return v0 + frac * (v1 - v0);
  }

  static double density_impl(const Empirical&, double) {
    throw std::domain_error("density: empirical measure has no density");
  }

  // --- sampling ---
  CirclePoint sample_impl(const Uniform&, Rng& rng) const {
    return rng.uniform_circle();
  }

  CirclePoint sample_impl(const TrigPoly& m, Rng& rng) const {
    return rejection_sample([&](double x) { return density_impl(m, x); }, rng);
  }

  CirclePoint sample_impl(const VonMisesMixture&, Rng& rng) const {
    return CirclePoint(vm_table_->draw(rng));
  }

  CirclePoint sample_impl(const PiecewiseLinear& m, Rng& rng) const {
    return rejection_sample([&](double x) { return density_impl(m, x); }, rng);
  }

  CirclePoint sample_impl(const Empirical& m, Rng& rng) const {
    return CirclePoint(m.atoms[alias_.draw(rng)]);
  }

  template <typename F>
  CirclePoint rejection_sample(const F& dens, Rng& rng) const {
    for (;;) {
      const CirclePoint x = rng.uniform_circle();
      if (rng.uniform() * envelope_ <= dens(x.theta)) return x;
    }
  }
};

inline void CircleMeasure::validate_and_finish() {
  if (auto* t = std::get_if<TrigPoly>(&v_)) {
    double min_d = 1e300, max_d = -1e300, max_dd = 0.0;
    for (int i = 0; i < kGrid; ++i) {
      const double x = -pi + two_pi * i / kGrid;
      const double d = density_impl(*t, x);
      min_d = std::min(min_d, d);
      max_d = std::max(max_d, d);
      double dd = 0.0;
      for (std::size_t k = 0; k < t->cosc.size(); ++k)
        dd -= t->cosc[k] * (k + 1) * std::sin((k + 1) * x);
      for (std::size_t k = 0; k < t->sinc.size(); ++k)
        dd += t->sinc[k] * (k + 1) * std::cos((k + 1) * x);
      max_dd = std::max(max_dd, std::fabs(dd));
    }
    if (min_d < -1e-9)
      throw std::invalid_argument("trig_poly: density negative on grid");
    envelope_ = max_d * 1.001;
    holder_A_ = max_dd;
  } else if (auto* vm = std::get_if<VonMisesMixture>(&v_)) {
    if (vm->comps.empty())
      throw std::invalid_argument("von_mises_mixture: empty");
    double total = 0.0;
    for (auto& c : vm->comps) {
      if (c.weight <= 0.0 || c.kappa < 0.0)
        throw std::invalid_argument("von_mises_mixture: bad component");
      c.mu = canonical(c.mu);
      total += c.weight;
    }
    for (auto& c : vm->comps) c.weight /= total;
    i0_.clear();
    weight_cdf_.clear();
    double acc = 0.0;
    for (auto& c : vm->comps) {
      i0_.push_back(detail::bessel_i0(c.kappa));
      acc += c.weight;
      weight_cdf_.push_back(acc);
    }
    weight_cdf_.back() = 1.0;
    {
      std::vector<double> kap, mus, ws;
      for (const auto& c : vm->comps) {
        kap.push_back(c.kappa);
        mus.push_back(c.mu);
        ws.push_back(c.weight);
      }
      vm_table_ = std::make_shared<detail::VmMixtureTable>(kap, mus, ws);
    }
    double max_d = 0.0, max_dd = 0.0;
    for (int i = 0; i < kGrid; ++i) {
      const double x = -pi + two_pi * i / kGrid;
      max_d = std::max(max_d, density_impl(*vm, x));
      double dd = 0.0;
      for (std::size_t j = 0; j < vm->comps.size(); ++j) {
        const auto& c = vm->comps[j];
        dd += c.weight * std::exp(c.kappa * std::cos(x - c.mu)) *
              (-c.kappa * std::sin(x - c.mu)) / i0_[j];
      }
      max_dd = std::max(max_dd, std::fabs(dd));
    }
    envelope_ = max_d * 1.001;
    holder_A_ = max_dd;
  } else if (auto* pw = std::get_if<PiecewiseLinear>(&v_)) {
    const std::size_t n = pw->values.size();
    if (n < 2) throw std::invalid_argument("piecewise: need >= 2 values");
    double mean = 0.0;
    for (double v : pw->values) {
      if (v < 0.0) throw std::invalid_argument("piecewise: negative value");
      mean += v;
    }
    mean /= static_cast<double>(n);
    if (mean <= 0.0) throw std::invalid_argument("piecewise: zero measure");
    double max_d = 0.0, max_slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pw->values[i] /= mean;
      max_d = std::max(max_d, pw->values[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double dv = pw->values[(i + 1) % n] - pw->values[i];
      max_slope = std::max(max_slope, std::fabs(dv) * n / two_pi);
    }
    envelope_ = max_d * 1.001;
    holder_A_ = max_slope;
  } else if (auto* e = std::get_if<Empirical>(&v_)) {
    if (e->atoms.empty() || e->atoms.size() != e->weights.size())
      throw std::invalid_argument("empirical: atoms/weights mismatch");
    double total = 0.0;
    for (auto& a : e->atoms) a = canonical(a);
    for (double w : e->weights) {
      if (w <= 0.0) throw std::invalid_argument("empirical: weight <= 0");
      total += w;
    }
    for (auto& w : e->weights) w /= total;
    auto sorted = e->atoms;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i] == sorted[i - 1])
        throw std::invalid_argument("empirical: duplicate atoms");
    alias_ = detail::AliasTable(e->weights);
  }
}

/// Sample canonical(y + v) where v has triangular density kappa*(1 - kappa*|v|)
/// on [-1/kappa, 1/kappa].
inline CirclePoint kernel_sample(CirclePoint y, double kappa, Rng& rng) {
  if (kappa <= 1.0 / pi)
    throw std::invalid_argument("kernel_sample: requires kappa > 1/pi");
  const double v = (rng.uniform() - rng.uniform()) / kappa;
  return CirclePoint(y.theta + v);
}

/// Density of the smoothed measure nu_kappa with respect to lambda:
/// nu_kappa(z) = 2*pi*kappa * int (1 - kappa*d(y,z))_+ nu(dy).
inline double smoothed_density(const CircleMeasure& m, double kappa, CirclePoint z,
                               int n_quad = 2048) {
  if (kappa <= 1.0 / pi)
    throw std::invalid_argument("smoothed_density: requires kappa > 1/pi");
  if (m.is_empirical()) {
    const auto& e = m.empirical_data();
    double v = 0.0;
    for (std::size_t i = 0; i < e.atoms.size(); ++i) {
      const double w = 1.0 - kappa * dist(CirclePoint(e.atoms[i]), z);
      if (w > 0.0) v += e.weights[i] * w;
    }
    return two_pi * kappa * v;
  }
  // 2*pi*kappa * (1/2pi) int_{z-1/k}^{z+1/k} (1 - kappa*|y-z|) nu(y) dy
  const double h = 2.0 / kappa / n_quad;
  double acc = 0.0;
  for (int i = 0; i <= n_quad; ++i) {
    const double u = -1.0 / kappa + i * h;
    const double w = (i == 0 || i == n_quad) ? 0.5 : 1.0;
    acc += w * (1.0 - kappa * std::fabs(u)) * m.density(canonical(z.theta + u));
  }
  return kappa * acc * h;
}

}  // namespace pmeans

#endif
