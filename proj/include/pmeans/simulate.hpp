#ifndef PMEANS_SIMULATE_HPP
#define PMEANS_SIMULATE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pmeans/circle.hpp"
#include "pmeans/gibbs.hpp"
#include "pmeans/measure.hpp"
#include "pmeans/oracle.hpp"
#include "pmeans/potential.hpp"
#include "pmeans/rng.hpp"
#include "pmeans/schedule.hpp"

namespace pmeans {

enum class Algorithm { X, Z, XTilde };

struct SimConfig {
  Algorithm algorithm = Algorithm::X;
  double p = 2.0;
  double t_end = 1.0;
  std::vector<double> checkpoints;  // sorted, unique, in (0, t_end]
  std::uint64_t master_seed = 0;
  double euler_dt = 1e-3;      // XTilde only, <= 1e-2
  bool fixed_start = false;    // default: uniform initial law
  CirclePoint start;

  void check() const {
    if (p < 1.0) throw std::invalid_argument("SimConfig: p >= 1 required");
    if (t_end <= 0.0) throw std::invalid_argument("SimConfig: t_end > 0 required");
    double prev = 0.0;
    for (double c : checkpoints) {
      if (c <= prev || c > t_end)
        throw std::invalid_argument("SimConfig: checkpoints must be sorted, unique, in (0, t_end]");
      prev = c;
    }
    if (algorithm == Algorithm::XTilde && euler_dt > 1e-2)
      throw std::invalid_argument("SimConfig: euler_dt <= 1e-2 required");
    if (euler_dt <= 0.0) throw std::invalid_argument("SimConfig: euler_dt > 0 required");
  }
};

struct TrajectoryRecord {
  std::vector<CirclePoint> at_checkpoint;
  CirclePoint final_position;
  std::uint64_t jump_count = 0;
};

namespace detail {

inline double pow_q(double x, double q) {
  if (q == 0.0) return 1.0;
  if (q == 0.5) return std::sqrt(x);
  if (q == 0.25) return std::sqrt(std::sqrt(x));
  if (q == 1.0) return x;
  if (q == 1.5) return x * std::sqrt(x);
  if (q == 2.0) return x * x;
  return std::pow(x, q);
}

/// Brownian evolution of a trajectory across [t0, t1]. The segment's endpoint
/// increment comes from the main stream; interior checkpoint values are
/// filled in by sequential Brownian bridges drawn from the segment's own
/// substream. Inserting or removing a checkpoint therefore never changes the
/// endpoint or the main-stream consumption.
struct SegmentWalker {
  std::uint64_t traj_seed;
  const std::vector<double>* checkpoints;
  std::size_t ck_i = 0;
  std::vector<CirclePoint> recorded;

  // b_end is the segment's endpoint Brownian increment, drawn by the caller
  // from the main stream.
  void evolve(double b_end, CirclePoint& x, double t0, double t1,
              std::uint64_t seg_idx) {
    if (ck_i < checkpoints->size() && (*checkpoints)[ck_i] < t1) {
      Rng seg = Rng::split(traj_seed, seg_idx + 1);
      double a = t0, b_a = 0.0;
      while (ck_i < checkpoints->size() && (*checkpoints)[ck_i] < t1) {
        const double tc = (*checkpoints)[ck_i];
        const double frac = (tc - a) / (t1 - a);
        const double mean = b_a + frac * (b_end - b_a);
        const double var = (tc - a) * (t1 - tc) / (t1 - a);
        b_a = mean + std::sqrt(var) * seg.normal();
        a = tc;
        recorded.push_back(CirclePoint(x.theta + b_a));
        ++ck_i;
      }
    }
    x = CirclePoint(x.theta + b_end);
  }

  // Checkpoints landing exactly on time t record the current (post-jump) state.
  void record_at(const CirclePoint& x, double t) {
    while (ck_i < checkpoints->size() && (*checkpoints)[ck_i] <= t) {
      recorded.push_back(x);
      ++ck_i;
    }
  }
};

}  // namespace detail

/// Jump-diffusion annealing run (and its kernel-smoothed variant when
/// `smoothed` is set): Brownian motion between the events of the speeded-up
/// clock, at each event a jump of arclength (p/2) alpha beta d^{p-1} towards
/// a fresh target drawn from the measure.
inline TrajectoryRecord run_jump_diffusion(const CircleMeasure& m, const Schedule& s,
                                           const SimConfig& cfg, std::uint64_t traj_seed,
                                           bool smoothed) {
  cfg.check();
  s.check();
  if (smoothed && !s.kappa)
    throw std::invalid_argument("run_Z: schedule needs a kappa component");

  Rng main = Rng::split(traj_seed, 0);
  CirclePoint x = cfg.fixed_start ? cfg.start : CirclePoint(main.uniform_circle());

  const double C1 = s.alpha.C1, r1 = s.alpha.r1, c = s.alpha.c;
  const double e = 1.0 / (c + 1.0);
  const double jump_gain = C1 * (c + 1.0);
  const double r2 = s.beta.r2, inv_b = 1.0 / s.beta.b;
  const double C2 = s.kappa ? s.kappa->C2 : 0.0;
  const double r3 = s.kappa ? s.kappa->r3 : 0.0;
  const double kk = s.kappa ? s.kappa->k : 0.0;
  const double half_p = 0.5 * cfg.p;

  detail::SegmentWalker walker{traj_seed, &cfg.checkpoints};
  TrajectoryRecord rec;
  double t = 0.0;
  // clock state: w = (r1 + t)^(c+1); a jump advances w by C1 (c+1) tau
  double w = detail::pow_q(r1, c + 1.0);
  std::uint64_t seg = 0;

  // The clock increments and the jump targets do not depend on the state, so
  // the random inputs of a whole block of events are drawn up front in tight
  // per-sampler loops (which pipeline far better than one interleaved draw
  // per event); the serial state update then touches no generator. The block
  // is always drawn in full, so main-stream consumption is independent of
  // where t_end or the checkpoints fall.
  constexpr int B = 512;
  double ws[B], Ts[B], r1Ts[B], scale[B], g[B], y[B];

  bool done = false;
  while (!done) {
    if (c > 0.0) {
      for (int j = 0; j < B; ++j) {
        w += jump_gain * main.exponential();
        ws[j] = w;
      }
      for (int j = 0; j < B; ++j) {
        r1Ts[j] = detail::pow_q(ws[j], e);
        Ts[j] = r1Ts[j] - r1;
      }
    } else {
      double tprev = t;
      for (int j = 0; j < B; ++j) {
        tprev += C1 * main.exponential();
        Ts[j] = tprev;
        r1Ts[j] = r1 + tprev;
      }
    }
    // jump arclength prefactor (p/2) alpha beta; independent iterations
    for (int j = 0; j < B; ++j) {
      const double alpha = C1 / detail::pow_q(r1Ts[j], c);
      const double beta = std::log(r2 + Ts[j]) * inv_b;
      scale[j] = half_p * alpha * beta;
    }
    for (int j = 0; j < B; ++j) g[j] = main.normal();
    // endpoint Brownian increments: scale each normal by the segment length
    {
      double tp = t;
      for (int j = 0; j < B; ++j) {
        g[j] *= std::sqrt(std::max(0.0, std::min(Ts[j], cfg.t_end) - tp));
        tp = Ts[j];
      }
    }
    m.sample_block(main, y, B);
    if (smoothed) {
      for (int j = 0; j < B; ++j) {
        const double kap = C2 * detail::pow_q(r3 + Ts[j], kk);
        if (kap <= 1.0 / pi)
          throw std::runtime_error("run_Z: kappa <= 1/pi at a jump time");
        y[j] = kernel_sample(CirclePoint(y[j]), kap, main).theta;
      }
    }

    for (int j = 0; j < B; ++j) {
      const double T = Ts[j];
      if (T > cfg.t_end) {
        walker.evolve(g[j], x, t, cfg.t_end, seg);
        walker.record_at(x, cfg.t_end);
        done = true;
        break;
      }
      walker.evolve(g[j], x, t, T, seg);
      ++seg;
      x = jump_target(x, CirclePoint(y[j]), cfg.p, scale[j]);
      ++rec.jump_count;
      if (walker.ck_i < cfg.checkpoints.size()) walker.record_at(x, T);
      t = T;
    }
  }

  rec.at_checkpoint = std::move(walker.recorded);
  rec.final_position = x;
  return rec;
}

inline TrajectoryRecord run_X(const CircleMeasure& m, const Schedule& s,
                              const SimConfig& cfg, std::uint64_t traj_seed) {
  return run_jump_diffusion(m, s, cfg, traj_seed, false);
}

inline TrajectoryRecord run_Z(const CircleMeasure& m, const Schedule& s,
                              const SimConfig& cfg, std::uint64_t traj_seed) {
  return run_jump_diffusion(m, s, cfg, traj_seed, true);
}

/// Euler-Maruyama discretization of the drift form of the dynamics: constant
/// pull of size (p/2) beta d^{p-1} towards the current target, target
/// refreshed at each clock event (one-ahead indexing: a target is active from
/// time 0 on).
inline TrajectoryRecord run_Xtilde(const CircleMeasure& m, const Schedule& s,
                                   const SimConfig& cfg, std::uint64_t traj_seed) {
  cfg.check();
  s.check();
  Rng main = Rng::split(traj_seed, 0);
  CirclePoint x = cfg.fixed_start ? cfg.start : CirclePoint(main.uniform_circle());
  CirclePoint y = m.sample(main);

  TrajectoryRecord rec;
  const double h = cfg.euler_dt;
  std::size_t ck_i = 0;
  double t = 0.0;
  double next_jump = next_jump_time(s, 0.0, main.exponential());

  while (t < cfg.t_end) {
    double t_next = std::min(t + h, cfg.t_end);
    if (ck_i < cfg.checkpoints.size())
      t_next = std::min(t_next, cfg.checkpoints[ck_i]);
    bool jump_here = false;
    if (next_jump <= t_next) {
      t_next = next_jump;
      jump_here = true;
    }
    const double dt = t_next - t;
    if (dt > 0.0) {
      const double beta = std::log(s.beta.r2 + t) / s.beta.b;
      const double g = signed_gap(x, y);
      const double dir = (g > 0.0) ? 1.0 : (g < 0.0 ? -1.0 : 0.0);
      const double drift =
          dt * 0.5 * cfg.p * beta * detail::pow_p(std::fabs(g), cfg.p - 1.0) * dir;
      if (std::fabs(drift) > 0.5 * pi)
        throw std::runtime_error("run_Xtilde: drift step exceeds pi/2, reduce euler_dt");
      x = CirclePoint(x.theta + std::sqrt(dt) * main.normal() + drift);
    }
    t = t_next;
    if (jump_here && t < cfg.t_end) {
      y = m.sample(main);
      ++rec.jump_count;
      next_jump = next_jump_time(s, t, main.exponential());
    }
    if (ck_i < cfg.checkpoints.size() && cfg.checkpoints[ck_i] <= t) {
      rec.at_checkpoint.push_back(x);
      ++ck_i;
    }
  }
  rec.final_position = x;
  return rec;
}

inline TrajectoryRecord run_trajectory(const CircleMeasure& m, const Schedule& s,
                                       const SimConfig& cfg, std::uint64_t traj_seed) {
  switch (cfg.algorithm) {
    case Algorithm::X: return run_X(m, s, cfg, traj_seed);
    case Algorithm::Z: return run_Z(m, s, cfg, traj_seed);
    case Algorithm::XTilde: return run_Xtilde(m, s, cfg, traj_seed);
  }
  throw std::logic_error("run_trajectory: bad algorithm");
}

struct EnsembleCheckpoint {
  double t = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double kappa = 0.0;
  std::vector<double> hist;  // per-bin probability mass, sums to 1
  double tv = 0.0;           // vs Gibbs at beta_t
  double chi2 = 0.0;
  double nbhd_mass = 0.0;    // around the potential's minimizers
};

struct EnsembleSummary {
  std::vector<EnsembleCheckpoint> checkpoints;
  int n_traj = 0;
  int bins = 128;
  double delta = 0.1;
  std::uint64_t total_jumps = 0;
  std::vector<CirclePoint> minima;  // oracle minimizers used for nbhd_mass
};

/// Independent trajectories with substream seeds split(master_seed, i), reduced
/// into per-checkpoint histograms with Gibbs-comparison diagnostics. Integer
/// bin counts make the reduction independent of execution order.
inline EnsembleSummary run_ensemble(const CircleMeasure& m, const Schedule& s,
                                    const SimConfig& cfg, int n_traj,
                                    int bins = 128, double delta = 0.1,
                                    int threads = 1) {
  cfg.check();
  if (n_traj < 1) throw std::invalid_argument("run_ensemble: n_traj >= 1");
  if (bins < 2) throw std::invalid_argument("run_ensemble: bins >= 2");
  const std::size_t n_ck = cfg.checkpoints.size();

  std::vector<std::vector<std::uint64_t>> counts(n_ck,
                                                 std::vector<std::uint64_t>(bins, 0));
  std::vector<std::uint64_t> jump_totals;

  auto bin_of = [bins](CirclePoint x) {
    int b = static_cast<int>((x.theta + pi) / two_pi * bins);
    return std::min(std::max(b, 0), bins - 1);
  };

  const int n_threads = std::max(1, threads);
  std::vector<std::vector<std::vector<std::uint64_t>>> part(
      n_threads, std::vector<std::vector<std::uint64_t>>(
                     n_ck, std::vector<std::uint64_t>(bins, 0)));
  std::vector<std::uint64_t> part_jumps(n_threads, 0);

  auto work = [&](int tid) {
    for (int i = tid; i < n_traj; i += n_threads) {
      const std::uint64_t seed = Rng::split_seed(cfg.master_seed, i);
      TrajectoryRecord rec = run_trajectory(m, s, cfg, seed);
      for (std::size_t ck = 0; ck < n_ck && ck < rec.at_checkpoint.size(); ++ck)
        ++part[tid][ck][bin_of(rec.at_checkpoint[ck])];
      part_jumps[tid] += rec.jump_count;
    }
  };
  if (n_threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int tid = 0; tid < n_threads; ++tid) pool.emplace_back(work, tid);
    for (auto& th : pool) th.join();
  }

  EnsembleSummary out;
  out.n_traj = n_traj;
  out.bins = bins;
  out.delta = delta;
  for (int tid = 0; tid < n_threads; ++tid) {
    out.total_jumps += part_jumps[tid];
    for (std::size_t ck = 0; ck < n_ck; ++ck)
      for (int b = 0; b < bins; ++b) counts[ck][b] += part[tid][ck][b];
  }

  // potential on the bin centers so histogram densities and Gibbs densities
  // live on the same grid
  PotentialGrid pg;
  pg.p = cfg.p;
  pg.n = bins;
  pg.values.resize(bins);
  for (int b = 0; b < bins; ++b) {
    const CirclePoint center(-pi + two_pi * (b + 0.5) / bins);
    pg.values[b] = u_value(cfg.p, m, center);
  }
  detail::finish_grid(pg);

  OracleResult oracle = grid_minimize(cfg.p, m, 4096, 1e-9);
  for (const auto& mn : oracle.minima) out.minima.push_back(mn.location);
  if (oracle.degenerate) out.minima.clear();

  for (std::size_t ck = 0; ck < n_ck; ++ck) {
    EnsembleCheckpoint e;
    e.t = cfg.checkpoints[ck];
    const auto v = evaluate(s, e.t);
    e.alpha = v.alpha;
    e.beta = v.beta;
    e.kappa = v.kappa;
    e.hist.resize(bins);
    std::vector<double> density(bins);
    for (int b = 0; b < bins; ++b) {
      e.hist[b] = static_cast<double>(counts[ck][b]) / n_traj;
      density[b] = e.hist[b] * bins;  // w.r.t. normalized lambda
    }
    GibbsGrid gg = gibbs_build(pg, v.beta);
    e.tv = tv_grid(density, gg.density);
    e.chi2 = chi2_grid(density, gg);
    e.nbhd_mass =
        out.minima.empty() ? 1.0 : neighborhood_mass(e.hist, out.minima, delta);
    out.checkpoints.push_back(e);
  }
  return out;
}

}  // namespace pmeans

#endif
