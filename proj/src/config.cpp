#include "rswz/config.hpp"

#include <cmath>
#include <fstream>

#include "rswz/errors.hpp"

namespace rswz {

namespace {

Grid2d parse_grid(const nlohmann::json& jg, const Grid2d& defaults) {
  Grid2d g = defaults;
  g.t_lo = jg.value("t_lo", g.t_lo);
  g.t_hi = jg.value("t_hi", g.t_hi);
  g.nt = jg.value("nt", g.nt);
  g.x_lo = jg.value("x_lo", g.x_lo);
  g.x_hi = jg.value("x_hi", g.x_hi);
  g.nx = jg.value("nx", g.nx);
  if (g.nt < 2 || g.nx < 2 || !(g.t_lo < g.t_hi) || !(g.x_lo < g.x_hi))
    throw ConfigError("grid must have at least 2x2 points and increasing bounds");
  return g;
}

CoefficientSet parse_model(const nlohmann::json& jm) {
  const std::string preset = jm.value("preset", std::string("mmbm"));
  CoefficientSet model;
  if (preset == "mmbm") {
    model = preset_mmbm();
  } else if (preset == "constant") {
    if (!jm.contains("mu") || !jm.contains("sigma"))
      throw ConfigError("constant preset needs 'mu' and 'sigma' arrays");
    model = preset_constant(jm.at("mu").get<std::vector<double>>(),
                            jm.at("sigma").get<std::vector<double>>(), jm.value("x0", 0.0));
  } else if (preset == "sin") {
    model = preset_sin(jm.value("amp0", 1.0), jm.value("amp1", 0.5), jm.value("x0", 0.0));
  } else if (preset == "time_arctan") {
    model = preset_time_arctan();
  } else {
    throw ConfigError("unknown model preset '" + preset + "'");
  }
  if (jm.contains("v")) model.v = jm.at("v").get<double>();
  if (jm.contains("V")) model.V = jm.at("V").get<double>();
  if (jm.contains("K")) model.K = jm.at("K").get<double>();
  if (jm.contains("mstar")) {
    const double m = jm.at("mstar").get<double>();
    for (auto& ms : model.mstar) ms = m;
  }
  if (!(model.v > 0.0) || !(model.v < model.V))
    throw ConfigError("model bounds need 0 < v < V");
  return model;
}

JumpGenerator parse_jumps(const nlohmann::json& jj, Regime& j0) {
  const std::string kind = jj.value("kind", std::string("homogeneous"));
  j0 = jj.value("j0", 0);
  JumpGenerator gen;
  if (kind == "homogeneous") {
    HomogeneousMarkov hm;
    if (!jj.contains("Q")) throw ConfigError("homogeneous jumps need a rate matrix 'Q'");
    hm.Q = jj.at("Q").get<std::vector<std::vector<double>>>();
    gen = hm;
  } else if (kind == "inhomogeneous") {
    if (!jj.contains("Q")) throw ConfigError("inhomogeneous jumps need a base matrix 'Q'");
    const auto Q = jj.at("Q").get<std::vector<std::vector<double>>>();
    const double amp = jj.value("mod_amp", 0.5);
    const double freq = jj.value("mod_freq", 1.0);
    if (!(std::abs(amp) <= 1.0))
      throw ConfigError("inhomogeneous modulation amplitude must satisfy |amp| <= 1");
    double peak = 0.0;
    for (std::size_t i = 0; i < Q.size(); ++i) {
      if (Q[i].size() != Q.size()) throw ConfigError("rate matrix must be square");
      peak = std::max(peak, std::abs(Q[i][i]));
    }
    InhomogeneousMarkov im;
    im.n = static_cast<int>(Q.size());
    im.c = peak * (1.0 + std::abs(amp));
    im.Q_of_t = [Q, amp, freq](double t) {
      const double m = 1.0 + amp * std::sin(2.0 * M_PI * freq * t);
      auto q = Q;
      for (auto& row : q)
        for (auto& val : row) val *= m;
      return q;
    };
    gen = im;
  } else if (kind == "semi_markov") {
    SemiMarkov sm;
    if (!jj.contains("holding") || !jj.contains("P"))
      throw ConfigError("semi-Markov jumps need 'holding' and 'P'");
    for (const auto& jh : jj.at("holding")) {
      SemiMarkov::Holding h;
      const std::string hk = jh.value("kind", std::string("exponential"));
      if (hk == "exponential")
        h.kind = SemiMarkov::Holding::exponential;
      else if (hk == "weibull")
        h.kind = SemiMarkov::Holding::weibull;
      else if (hk == "fixed")
        h.kind = SemiMarkov::Holding::fixed;
      else
        throw ConfigError("unknown holding kind '" + hk + "'");
      h.a = jh.value("a", 1.0);
      h.b = jh.value("b", 1.0);
      sm.holding.push_back(h);
    }
    sm.P = jj.at("P").get<std::vector<std::vector<double>>>();
    gen = sm;
  } else if (kind == "schedule") {
    DeterministicSchedule ds;
    if (!jj.contains("epochs") || !jj.contains("regimes"))
      throw ConfigError("scheduled jumps need 'epochs' and 'regimes'");
    ds.epochs = jj.at("epochs").get<std::vector<double>>();
    ds.regimes = jj.at("regimes").get<std::vector<Regime>>();
    if (ds.regimes.empty()) throw ConfigError("schedule needs at least one regime");
    j0 = ds.regimes.front();
    gen = ds;
  } else if (kind == "none") {
    DeterministicSchedule ds;
    ds.epochs = {0.0};
    ds.regimes = {j0};
    gen = ds;
  } else {
    throw ConfigError("unknown jump kind '" + kind + "'");
  }
  validate_generator(gen);
  return gen;
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  ExperimentConfig cfg;
  cfg.raw = j;

  cfg.model = parse_model(j.value("model", nlohmann::json::object()));
  cfg.jumps = parse_jumps(j.value("jumps", nlohmann::json{{"kind", "none"}}), cfg.j0);
  if (cfg.j0 < 0 || cfg.j0 >= cfg.model.n_regimes())
    throw ConfigError("initial regime out of range for the model");

  const auto jd = j.value("driver", nlohmann::json::object());
  cfg.driver_kind = jd.value("kind", std::string("polygonal"));
  if (cfg.driver_kind != "polygonal" && cfg.driver_kind != "transport")
    throw ConfigError("unknown driver kind '" + cfg.driver_kind + "'");
  cfg.lambda = jd.value("lambda", 256.0);
  if (!(cfg.lambda > 0.0)) throw ConfigError("driver lambda must be positive");

  cfg.T = j.value("horizon", 1.0);
  if (!(cfg.T > 0.0)) throw ConfigError("horizon must be positive");

  if (j.contains("step")) {
    const auto& js = j.at("step");
    if (js.is_number()) {
      cfg.step_rule.fixed_step = js.get<double>();
      if (!(cfg.step_rule.fixed_step > 0.0)) throw ConfigError("step must be positive");
    } else if (js.is_object()) {
      cfg.step_rule.mesh_divisor = js.value("mesh_divisor", 8.0);
      cfg.step_rule.fixed_step = js.value("fixed", 0.0);
      if (!(cfg.step_rule.mesh_divisor > 0.0))
        throw ConfigError("mesh divisor must be positive");
    } else {
      throw ConfigError("'step' must be a number or an object");
    }
  }

  const auto jseeds = j.value("seeds", nlohmann::json::object());
  cfg.master_seed = jseeds.value("master", std::uint64_t{1});
  cfg.n_seeds = jseeds.value("count", 1);
  if (cfg.n_seeds < 1) throw ConfigError("seed count must be positive");

  cfg.workers = j.value("workers", 1);
  if (cfg.workers < 1) throw ConfigError("workers must be positive");

  const auto jsl = j.value("slack", nlohmann::json::object());
  cfg.slack_rel = jsl.value("rel", 1e-3);
  cfg.slack_abs = jsl.value("abs", 1e-6);
  cfg.x_slack_rel = jsl.value("x_rel", 1e-6);
  if (cfg.slack_rel < 0.0 || cfg.slack_abs < 0.0 || cfg.x_slack_rel < 0.0)
    throw ConfigError("slack values must be nonnegative");

  cfg.mbar_override = j.value("analysis", nlohmann::json::object()).value("mbar", -1.0);

  const auto jr = j.value("rate", nlohmann::json::object());
  if (jr.contains("lambda_grid"))
    cfg.lambda_grid = jr.at("lambda_grid").get<std::vector<double>>();
  cfg.n_paths = jr.value("n_paths", 200);
  cfg.gamma = jr.value("gamma", 1.0);
  cfg.epsilon = jr.value("epsilon", 0.05);
  cfg.q = jr.value("q", 2.0);
  cfg.budget_max_steps = jr.value("budget_max_steps", 4e9);
  if (cfg.n_paths < 1) throw ConfigError("rate n_paths must be positive");
  for (double lam : cfg.lambda_grid)
    if (!(lam > 0.0)) throw ConfigError("rate lambda grid must be positive");

  Grid2d vg;
  vg.t_lo = 0.0;
  vg.t_hi = cfg.T;
  vg.nt = 21;
  vg.x_lo = cfg.model.x0 - 3.0;
  vg.x_hi = cfg.model.x0 + 3.0;
  vg.nx = 41;
  cfg.validate_grid = parse_grid(j.value("validate_grid", nlohmann::json::object()), vg);
  cfg.dump_grid = parse_grid(j.value("dump_grid", nlohmann::json::object()), vg);

  cfg.out_dir = j.value("out", std::string("."));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in '" + path + "': " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config field error in '" + path + "': " + e.what());
  }
}

std::string canonical_json(const nlohmann::json& j) { return j.dump(); }

std::uint64_t config_hash(const nlohmann::json& j) {
  nlohmann::json c = j;
  if (c.is_object()) {
    c.erase("workers");
    c.erase("out");
  }
  const std::string s = canonical_json(c);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace rswz
