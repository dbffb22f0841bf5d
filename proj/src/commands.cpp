#include "rswz/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rswz/analysis.hpp"
#include "rswz/csvio.hpp"
#include "rswz/drivers.hpp"
#include "rswz/errors.hpp"
#include "rswz/lamperti.hpp"
#include "rswz/rng.hpp"
#include "rswz/solvers.hpp"
#include "rswz/version.hpp"

namespace rswz {

namespace {

namespace fs = std::filesystem;

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

struct PathBundle {
  JumpPath J;
  BrownianPath B;
  DriverPath F;
  PathView fview;
  SolutionPath S, Sl, X, Xl;
  int n_jumps = 0;
};

PathBundle make_bundle(const ExperimentConfig& cfg, std::uint64_t seed) {
  PathBundle pb;
  pb.J = sample_jump_path(cfg.jumps, cfg.j0, cfg.T, derive_seed(seed, 11, 0));
  const double st = cfg.step_rule.step_for(cfg.lambda);

  std::vector<double> forced = pb.J.epochs;
  if (cfg.driver_kind == "polygonal")
    for (long k = 1; static_cast<double>(k) / cfg.lambda < cfg.T - 1e-12; ++k)
      forced.push_back(static_cast<double>(k) / cfg.lambda);
  pb.B = sample_brownian(cfg.T, st, derive_seed(seed, 13, 0), forced);

  if (cfg.driver_kind == "polygonal") {
    pb.F = polygonal_approx(pb.B, cfg.lambda);
    pb.fview = make_view(pb.F, pb.B.grid);
  } else {
    pb.F = transport_process(cfg.lambda, cfg.T, derive_seed(seed, 17, 0));
    pb.fview = make_view(pb.F, merge_grids({pb.B.grid, pb.F.breakpoints}));
  }

  LampertiKit kit{&cfg.model, 1e-10, 1e-12};
  pb.S = build_S(kit, pb.J, make_view(pb.B));
  pb.Sl = build_S(kit, pb.J, pb.fview);
  pb.X = inverse_transform(kit, pb.J, pb.S);
  pb.Xl = inverse_transform(kit, pb.J, pb.Sl);
  pb.n_jumps = count_jumps(pb.J, cfg.T);
  return pb;
}

void write_solution_csv(const std::string& path, const SolutionPath& s) {
  CsvWriter w(path, {"t", "value", "regime", "is_epoch", "left_limit"});
  std::size_t next_epoch = 0;
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    const bool is_epoch = next_epoch < s.epoch_index.size() && s.epoch_index[next_epoch] == k;
    std::string left;
    if (is_epoch) left = fmt_g17(s.left_limits[next_epoch]);
    w.row({fmt_g17(s.times[k]), fmt_g17(s.values[k]), std::to_string(s.regime[k]),
           is_epoch ? "1" : "0", left});
    if (is_epoch) ++next_epoch;
  }
}

void write_jumps_csv(const std::string& path, const JumpPath& j) {
  CsvWriter w(path, {"index", "epoch", "regime"});
  for (std::size_t k = 0; k < j.epochs.size(); ++k)
    w.row({std::to_string(k), fmt_g17(j.epochs[k]), std::to_string(j.regimes[k])});
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << j.dump(2) << '\n';
}

ItoFamily quadratic_family() {
  ItoFamily fam;
  fam.f = [](Regime i, double t, double x) { return x * x + static_cast<double>(i) * t; };
  fam.d1 = [](Regime i, double, double) { return static_cast<double>(i); };
  fam.d2 = [](Regime, double, double x) { return 2.0 * x; };
  fam.d22 = [](Regime, double, double) { return 2.0; };
  return fam;
}

BoundConstants constants_for(const ExperimentConfig& cfg) {
  if (cfg.mbar_override >= 0.0)
    return bound_constants_from(cfg.mbar_override, cfg.model.v, cfg.model.V);
  return bound_constants(cfg.model);
}

}  // namespace

int cmd_simulate(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg.out_dir);
  const PathBundle pb = make_bundle(cfg, cfg.master_seed);

  write_solution_csv(join_path(cfg.out_dir, "x.csv"), pb.X);
  write_solution_csv(join_path(cfg.out_dir, "x_lambda.csv"), pb.Xl);
  write_solution_csv(join_path(cfg.out_dir, "s.csv"), pb.S);
  write_solution_csv(join_path(cfg.out_dir, "s_lambda.csv"), pb.Sl);
  write_jumps_csv(join_path(cfg.out_dir, "jumps.csv"), pb.J);

  nlohmann::json meta;
  meta["version"] = kVersion;
  meta["config_hash"] = config_hash(cfg.raw);
  meta["lambda"] = cfg.lambda;
  meta["driver"] = cfg.driver_kind;
  meta["n_jumps"] = pb.n_jumps;
  meta["sup_fb"] = sup_distance(pb.F, pb.B);
  meta["grid_points"] = pb.S.times.size();
  write_json(join_path(cfg.out_dir, "meta.json"), meta);

  std::cout << "simulate: wrote " << pb.S.times.size() << " grid points, " << pb.n_jumps
            << " jumps to " << cfg.out_dir << "\n";
  return 0;
}

int cmd_verify(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg.out_dir);

  const ValidationReport vr = validate_assumptions(cfg.model, cfg.validate_grid);
  if (!vr.pass()) {
    nlohmann::json out;
    out["version"] = kVersion;
    out["config_hash"] = config_hash(cfg.raw);
    out["pass"] = false;
    out["reason"] = "model assumptions violated on the validation grid";
    nlohmann::json viols = nlohmann::json::array();
    for (const auto& v : vr.violations) {
      viols.push_back({{"what", v.what},
                       {"regime", v.regime},
                       {"t", v.t},
                       {"x", v.x},
                       {"observed", v.observed},
                       {"declared", v.declared}});
      if (viols.size() >= 32) break;
    }
    out["violations"] = viols;
    write_json(join_path(cfg.out_dir, "verify.json"), out);
    std::cout << "verify: FAIL (model assumptions violated, " << vr.violations.size()
              << " grid points)\n";
    return 1;
  }

  if (cfg.driver_kind != "polygonal")
    throw ConfigError("verify: driver '" + cfg.driver_kind +
                      "' is uncoupled to the Brownian target; pathwise bounds do not apply");

  const BoundConstants c = constants_for(cfg);
  const ItoFamily fam = quadratic_family();

  nlohmann::json seeds_j = nlohmann::json::array();
  bool all_pass = true;
  double worst_margin = 0.0;
  for (int s = 0; s < cfg.n_seeds; ++s) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, 0, static_cast<std::uint64_t>(s));
    const PathBundle pb = make_bundle(cfg, seed);
    const BoundReport rep = check_pathwise_bound(pb.S, pb.Sl, pb.F, pb.B, pb.n_jumps, c,
                                                 cfg.slack_rel, cfg.slack_abs, true);
    const XBoundReport xrep = check_x_bound(pb.X, pb.Xl, pb.S, pb.Sl, cfg.model.V,
                                            cfg.x_slack_rel);
    const double ito_res = verify_ito_rs(fam, pb.fview, pb.J);
    const bool ok = rep.pass && xrep.pass && rep.gronwall_pass;
    all_pass = all_pass && ok;
    worst_margin = std::max(worst_margin, rep.margin);
    seeds_j.push_back({{"seed_index", s},
                       {"n_jumps", rep.n_jumps},
                       {"sup_fb", rep.sup_fb},
                       {"s_lhs", rep.lhs},
                       {"s_rhs", rep.rhs},
                       {"s_margin", rep.margin},
                       {"gronwall_worst", rep.gronwall_worst},
                       {"x_lhs", xrep.lhs},
                       {"x_rhs", xrep.rhs},
                       {"x_margin", xrep.margin},
                       {"ito_residual", ito_res},
                       {"pass", ok}});
  }

  nlohmann::json out;
  out["version"] = kVersion;
  out["config_hash"] = config_hash(cfg.raw);
  out["pass"] = all_pass;
  out["constants"] = {{"Mbar", c.Mbar}, {"K1", c.K1}, {"K2", c.K2}, {"K3", c.K3},
                      {"v", c.v},       {"V", c.V}};
  out["n_seeds"] = cfg.n_seeds;
  out["worst_margin"] = worst_margin;
  out["seeds"] = seeds_j;
  write_json(join_path(cfg.out_dir, "verify.json"), out);

  std::cout << "verify: " << (all_pass ? "PASS" : "FAIL") << " (" << cfg.n_seeds
            << " seeds, worst margin " << worst_margin << ")\n";
  return all_pass ? 0 : 1;
}

int cmd_converge(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg.out_dir);
  if (cfg.lambda_grid.empty())
    throw ConfigError("converge: config needs a nonempty rate.lambda_grid");

  RateRunConfig rc;
  rc.driver_kind = cfg.driver_kind;
  rc.lambda_grid = cfg.lambda_grid;
  rc.n_paths = cfg.n_paths;
  rc.step_rule = cfg.step_rule;
  rc.T = cfg.T;
  rc.gamma = cfg.gamma;
  rc.epsilon = cfg.epsilon;
  rc.q = cfg.q;
  rc.master_seed = cfg.master_seed;
  rc.workers = cfg.workers;
  rc.budget_max_steps = cfg.budget_max_steps;
  rc.delta = polygonal_rate();

  const RateEstimate est = estimate_rate(cfg.model, cfg.jumps, cfg.j0, rc);

  CsvWriter w(join_path(cfg.out_dir, "rate.csv"),
              {"lambda", "seed_index", "sup_x_err", "sup_s_err", "sup_fb", "n_jumps"});
  for (std::size_t li = 0; li < est.lambda_grid.size(); ++li)
    for (std::size_t pi = 0; pi < est.x_errs[li].size(); ++pi)
      w.row({fmt_g17(est.lambda_grid[li]), std::to_string(pi), fmt_g17(est.x_errs[li][pi]),
             fmt_g17(est.s_errs[li][pi]), fmt_g17(est.fb_dists[li][pi]),
             std::to_string(est.jump_counts[li][pi])});
  w.close();

  nlohmann::json tail = nlohmann::json::array();
  for (std::size_t li = 0; li < est.lambda_grid.size(); ++li) {
    const double lam = est.lambda_grid[li];
    tail.push_back({{"lambda", lam},
                    {"threshold", rc.gamma * rc.delta.delta(lam) * std::pow(lam, rc.epsilon)},
                    {"prob", est.tail_prob[li]}});
  }

  nlohmann::json out;
  out["version"] = kVersion;
  out["config_hash"] = config_hash(cfg.raw);
  out["delta_tag"] = rc.delta.tag;
  out["lambda_grid"] = est.lambda_grid;
  out["n_paths"] = rc.n_paths;
  out["master_seed"] = rc.master_seed;
  out["slope"] = est.slope;
  out["intercept"] = est.intercept;
  out["median_x_err"] = est.median_x_err;
  out["median_s_err"] = est.median_s_err;
  out["gamma"] = rc.gamma;
  out["epsilon"] = rc.epsilon;
  out["q"] = rc.q;
  out["tail"] = tail;
  write_json(join_path(cfg.out_dir, "summary.json"), out);

  std::cout << "converge: slope " << est.slope << ", intercept " << est.intercept << " over "
            << est.lambda_grid.size() << " lambdas x " << rc.n_paths << " paths\n";
  return 0;
}

int cmd_demo_mmbm(const std::string& out_dir, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.model = preset_mmbm();
  HomogeneousMarkov hm;
  hm.Q = {{-2.0, 2.0}, {3.0, -3.0}};
  cfg.jumps = hm;
  cfg.j0 = 0;
  cfg.driver_kind = "polygonal";
  cfg.lambda = 256.0;
  cfg.T = 1.0;
  cfg.step_rule.fixed_step = 1.0 / 16384.0;
  cfg.master_seed = seed;
  cfg.out_dir = out_dir;
  cfg.raw = {{"demo", "mmbm"}, {"seed", seed}};

  ensure_out_dir(cfg.out_dir);
  const BoundConstants c = bound_constants(cfg.model);
  std::cout << "demo-mmbm: Mbar=" << c.Mbar << " K1=" << c.K1 << " K3=" << c.K3
            << " K2=" << c.K2 << "\n";

  const PathBundle pb = make_bundle(cfg, cfg.master_seed);
  const BoundReport rep =
      check_pathwise_bound(pb.S, pb.Sl, pb.F, pb.B, pb.n_jumps, c, 1e-3, 1e-6, true);
  const XBoundReport xrep = check_x_bound(pb.X, pb.Xl, pb.S, pb.Sl, cfg.model.V, 1e-6);

  write_solution_csv(join_path(cfg.out_dir, "x.csv"), pb.X);
  write_solution_csv(join_path(cfg.out_dir, "x_lambda.csv"), pb.Xl);
  write_solution_csv(join_path(cfg.out_dir, "s.csv"), pb.S);
  write_solution_csv(join_path(cfg.out_dir, "s_lambda.csv"), pb.Sl);
  write_jumps_csv(join_path(cfg.out_dir, "jumps.csv"), pb.J);

  nlohmann::json out;
  out["version"] = kVersion;
  out["constants"] = {{"Mbar", c.Mbar}, {"K1", c.K1}, {"K2", c.K2}, {"K3", c.K3}};
  out["n_jumps"] = pb.n_jumps;
  out["sup_fb"] = rep.sup_fb;
  out["s_lhs"] = rep.lhs;
  out["s_rhs"] = rep.rhs;
  out["x_lhs"] = xrep.lhs;
  out["x_rhs"] = xrep.rhs;
  out["pass"] = rep.pass && xrep.pass;
  write_json(join_path(cfg.out_dir, "demo.json"), out);

  std::cout << "demo-mmbm: n_jumps=" << pb.n_jumps << " sup|S_lambda-S|=" << rep.lhs
            << " bound=" << rep.rhs << " sup|X_lambda-X|=" << xrep.lhs << " Vbound=" << xrep.rhs
            << " -> " << ((rep.pass && xrep.pass) ? "PASS" : "FAIL") << "\n";
  return (rep.pass && xrep.pass) ? 0 : 1;
}

int cmd_dump_lamperti(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg.out_dir);
  LampertiKit kit{&cfg.model, 1e-10, 1e-12};
  const Grid2d& g = cfg.dump_grid;
  CsvWriter w(join_path(cfg.out_dir, "lamperti.csv"),
              {"regime", "t", "x", "ell", "x_back", "roundtrip_err"});
  double worst = 0.0;
  for (Regime i = 0; i < cfg.model.n_regimes(); ++i) {
    for (int a = 0; a < g.nt; ++a) {
      const double t = g.t_lo + (g.t_hi - g.t_lo) * a / (g.nt - 1);
      for (int bidx = 0; bidx < g.nx; ++bidx) {
        const double x = g.x_lo + (g.x_hi - g.x_lo) * bidx / (g.nx - 1);
        const double ell = kit.h(i, t, x);
        const double xb = kit.h_inv(i, t, ell);
        const double err = std::abs(xb - x);
        worst = std::max(worst, err);
        w.row({std::to_string(i), fmt_g17(t), fmt_g17(x), fmt_g17(ell), fmt_g17(xb),
               fmt_g17(err)});
      }
    }
  }
  std::cout << "dump-lamperti: " << cfg.model.n_regimes() * g.nt * g.nx
            << " rows, max round-trip error " << worst << "\n";
  return 0;
}

}  // namespace rswz
