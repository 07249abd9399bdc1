#ifndef PMEANS_IO_HPP
#define PMEANS_IO_HPP

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmeans/measure.hpp"
#include "pmeans/schedule.hpp"
#include "pmeans/simulate.hpp"

namespace pmeans {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full experiment configuration as read from a JSON file.
struct RunConfig {
  CircleMeasure measure = CircleMeasure::uniform();
  Schedule schedule;
  SimConfig sim;
  int n_traj = 1;
  int bins = 128;
  double delta = 0.1;
  int threads = 1;
  // diagnostics
  std::vector<double> alpha_list;
  std::vector<double> beta_list;
  int grid_n = 256;
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
  }
}

inline double need_num(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
  if (!j[key].is_number()) throw ConfigError(where + ": \"" + key + "\" must be a number");
  return j[key].get<double>();
}

inline std::vector<double> need_array(const json& j, const char* key,
                                      const std::string& where) {
  if (!j.contains(key) || !j[key].is_array())
    throw ConfigError(where + ": missing array \"" + key + "\"");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw ConfigError(where + ": \"" + key + "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

inline CircleMeasure parse_measure(const nlohmann::json& j) {
  using detail::need_array;
  using detail::need_num;
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ConfigError("measure: object with a \"type\" string required");
  const std::string type = j["type"].get<std::string>();
  if (type == "uniform") {
    detail::reject_unknown(j, {"type"}, "measure");
    return CircleMeasure::uniform();
  }
  if (type == "trigpoly") {
    detail::reject_unknown(j, {"type", "cos", "sin"}, "measure");
    return CircleMeasure::trig_poly(need_array(j, "cos", "measure"),
                                    need_array(j, "sin", "measure"));
  }
  if (type == "vonmises_mixture") {
    detail::reject_unknown(j, {"type", "components"}, "measure");
    if (!j.contains("components") || !j["components"].is_array())
      throw ConfigError("measure: \"components\" array required");
    std::vector<VonMisesComponent> comps;
    for (const auto& c : j["components"]) {
      detail::reject_unknown(c, {"mu", "kappa", "weight"}, "measure.components");
      comps.push_back({need_num(c, "mu", "component"), need_num(c, "kappa", "component"),
                       need_num(c, "weight", "component")});
    }
    return CircleMeasure::von_mises_mixture(std::move(comps));
  }
  if (type == "piecewise") {
    detail::reject_unknown(j, {"type", "values"}, "measure");
    return CircleMeasure::piecewise(need_array(j, "values", "measure"));
  }
  if (type == "empirical") {
    detail::reject_unknown(j, {"type", "atoms", "weights"}, "measure");
    return CircleMeasure::empirical(need_array(j, "atoms", "measure"),
                                    need_array(j, "weights", "measure"));
  }
  if (type == "empirical_draws") {
    // n i.i.d. draws from a base measure, equal weights; convenience for
    // reproducible empirical benchmarks.
    detail::reject_unknown(j, {"type", "base", "n", "seed"}, "measure");
    const CircleMeasure base = parse_measure(j.contains("base") ? j["base"] : nlohmann::json());
    const int n = static_cast<int>(need_num(j, "n", "measure"));
    const auto seed = static_cast<std::uint64_t>(need_num(j, "seed", "measure"));
    Rng rng(seed);
    std::vector<double> atoms;
    std::vector<double> weights(n, 1.0 / n);
    for (int i = 0; i < n; ++i) atoms.push_back(base.sample(rng).theta);
    return CircleMeasure::empirical(std::move(atoms), std::move(weights));
  }
  throw ConfigError("measure: unknown type \"" + type + "\"");
}

inline Schedule parse_schedule(const nlohmann::json& j) {
  using detail::need_num;
  if (!j.is_object()) throw ConfigError("schedule: object required");
  detail::reject_unknown(j, {"alpha", "beta", "kappa"}, "schedule");
  if (!j.contains("alpha") || !j.contains("beta"))
    throw ConfigError("schedule: \"alpha\" and \"beta\" required");
  Schedule s;
  detail::reject_unknown(j["alpha"], {"C1", "r1", "c"}, "schedule.alpha");
  s.alpha = {need_num(j["alpha"], "C1", "schedule.alpha"),
             need_num(j["alpha"], "r1", "schedule.alpha"),
             need_num(j["alpha"], "c", "schedule.alpha")};
  detail::reject_unknown(j["beta"], {"b", "r2"}, "schedule.beta");
  s.beta = {need_num(j["beta"], "b", "schedule.beta"),
            need_num(j["beta"], "r2", "schedule.beta")};
  if (j.contains("kappa") && !j["kappa"].is_null()) {
    detail::reject_unknown(j["kappa"], {"C2", "r3", "k"}, "schedule.kappa");
    s.kappa = PowerKappa{need_num(j["kappa"], "C2", "schedule.kappa"),
                         need_num(j["kappa"], "r3", "schedule.kappa"),
                         need_num(j["kappa"], "k", "schedule.kappa")};
  }
  s.check();
  return s;
}

inline RunConfig parse_config(const nlohmann::json& j) {
  using detail::need_num;
  if (!j.is_object()) throw ConfigError("config: top-level object required");
  detail::reject_unknown(j,
                         {"measure", "p", "schedule", "sim", "n_traj", "bins", "delta",
                          "threads", "alpha_list", "beta_list", "grid_n"},
                         "config");
  RunConfig cfg;
  if (j.contains("measure")) cfg.measure = parse_measure(j["measure"]);
  if (j.contains("p")) cfg.sim.p = need_num(j, "p", "config");
  if (j.contains("schedule")) cfg.schedule = parse_schedule(j["schedule"]);
  if (j.contains("sim")) {
    const auto& s = j["sim"];
    detail::reject_unknown(s,
                           {"algorithm", "t_end", "checkpoints", "seed", "euler_dt",
                            "start"},
                           "sim");
    if (s.contains("algorithm")) {
      const std::string a = s["algorithm"].get<std::string>();
      if (a == "X") cfg.sim.algorithm = Algorithm::X;
      else if (a == "Z") cfg.sim.algorithm = Algorithm::Z;
      else if (a == "XTilde") cfg.sim.algorithm = Algorithm::XTilde;
      else throw ConfigError("sim.algorithm: one of X, Z, XTilde");
    }
    if (s.contains("t_end")) cfg.sim.t_end = need_num(s, "t_end", "sim");
    if (s.contains("checkpoints"))
      cfg.sim.checkpoints = detail::need_array(s, "checkpoints", "sim");
    if (s.contains("seed"))
      cfg.sim.master_seed = static_cast<std::uint64_t>(need_num(s, "seed", "sim"));
    if (s.contains("euler_dt")) cfg.sim.euler_dt = need_num(s, "euler_dt", "sim");
    if (s.contains("start")) {
      if (s["start"].is_string()) {
        if (s["start"].get<std::string>() != "uniform")
          throw ConfigError("sim.start: number or \"uniform\"");
      } else {
        cfg.sim.fixed_start = true;
        cfg.sim.start = CirclePoint(need_num(s, "start", "sim"));
      }
    }
  }
  if (j.contains("n_traj")) cfg.n_traj = static_cast<int>(need_num(j, "n_traj", "config"));
  if (j.contains("bins")) cfg.bins = static_cast<int>(need_num(j, "bins", "config"));
  if (j.contains("delta")) cfg.delta = need_num(j, "delta", "config");
  if (j.contains("threads")) cfg.threads = static_cast<int>(need_num(j, "threads", "config"));
  if (j.contains("alpha_list")) cfg.alpha_list = detail::need_array(j, "alpha_list", "config");
  if (j.contains("beta_list")) cfg.beta_list = detail::need_array(j, "beta_list", "config");
  if (j.contains("grid_n")) cfg.grid_n = static_cast<int>(need_num(j, "grid_n", "config"));
  cfg.sim.check();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

/// Shortest round-trippable decimal form (17 significant digits).
inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string ensemble_jsonl(const EnsembleSummary& e) {
  std::ostringstream out;
  for (const auto& c : e.checkpoints) {
    out << "{\"t\":" << fmt_double(c.t) << ",\"alpha\":" << fmt_double(c.alpha)
        << ",\"beta\":" << fmt_double(c.beta) << ",\"kappa\":" << fmt_double(c.kappa)
        << ",\"hist\":[";
    for (std::size_t i = 0; i < c.hist.size(); ++i) {
      if (i) out << ",";
      out << fmt_double(c.hist[i]);
    }
    out << "],\"tv\":" << fmt_double(c.tv) << ",\"chi2\":" << fmt_double(c.chi2)
        << ",\"nbhd_mass\":" << fmt_double(c.nbhd_mass) << "}\n";
  }
  return out.str();
}

inline std::string trajectory_jsonl(const SimConfig& cfg, const TrajectoryRecord& rec) {
  std::ostringstream out;
  for (std::size_t i = 0; i < rec.at_checkpoint.size(); ++i) {
    out << "{\"t\":" << fmt_double(cfg.checkpoints[i])
        << ",\"x\":" << fmt_double(rec.at_checkpoint[i].theta) << "}\n";
  }
  out << "{\"t\":" << fmt_double(cfg.t_end)
      << ",\"x\":" << fmt_double(rec.final_position.theta)
      << ",\"jumps\":" << rec.jump_count << "}\n";
  return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace pmeans

#endif
