// Command-line front end: single runs, parameter sweeps, Monte Carlo
// batches, and the verification suite, all driven by one JSON config per
// experiment.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jamsim/analysis.hpp"
#include "jamsim/checks.hpp"
#include "jamsim/config.hpp"
#include "jamsim/engine.hpp"
#include "jamsim/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitVerification = 3;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  int workers = 1;
};

void apply_overrides(jamsim::RunConfig& cfg, const Options& opt) {
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.horizon) cfg.horizon = *opt.horizon;
}

// Configs may omit the horizon; a doubling pilot then picks three times the
// first settling estimate.
void ensure_horizon(jamsim::RunConfig& cfg) {
  if (cfg.horizon > 0.0) return;
  for (double guess = 1.0; guess <= 1024.0; guess *= 2.0) {
    jamsim::RunConfig pilot = cfg;
    pilot.horizon = guess;
    const auto tr = jamsim::simulate(pilot);
    const auto ct = jamsim::consensus_times(tr, cfg.graph, cfg.protocol.epsilon);
    if (ct.settling) {
      cfg.horizon = std::max(3.0 * *ct.settling, guess * 0.25);
      return;
    }
  }
  cfg.horizon = 1024.0;
  std::cerr << "warning: pilot runs never settled; horizon capped at 1024\n";
}

std::filesystem::path out_dir(const Options& opt) {
  std::filesystem::path dir(opt.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw jamsim::Error(jamsim::Errc::io_error, "cannot create " + dir.string());
  return dir;
}

int cmd_run(const Options& opt) {
  const auto doc = jamsim::load_json_file(opt.config);
  auto cfg = jamsim::run_config_from_json(doc);
  apply_overrides(cfg, opt);
  ensure_horizon(cfg);

  const auto tr = jamsim::simulate(cfg);
  const auto ct = jamsim::consensus_times(tr, cfg.graph, cfg.protocol.epsilon);
  const auto dir = out_dir(opt);
  jamsim::write_text_file((dir / "trajectory.csv").string(), jamsim::trajectory_csv(tr));
  jamsim::write_text_file((dir / "attempts.csv").string(), jamsim::attempts_csv(tr));
  jamsim::write_text_file((dir / "summary.json").string(),
                          jamsim::summary_json(tr, ct).dump(2) + "\n");
  if (!ct.settling)
    std::cerr << "warning: not settled within the horizon " << tr.horizon << "\n";
  std::cout << "run: " << tr.size() << " breakpoints, " << tr.attempts.size() << " attempts, "
            << (ct.settling ? "settling " + jamsim::format_double(*ct.settling) : "unsettled")
            << "\n";
  return kExitOk;
}

int cmd_montecarlo(const Options& opt) {
  const auto doc = jamsim::load_json_file(opt.config);
  auto cfg = jamsim::run_config_from_json(doc);
  apply_overrides(cfg, opt);
  ensure_horizon(cfg);
  const auto seeds = jamsim::seeds_from_json(doc, cfg.seed);
  const bool first_entry = doc.value("use_first_entry", false);

  const auto mc = jamsim::monte_carlo(cfg, seeds, opt.workers, first_entry);
  jamsim::Json j;
  j["m_C"] = mc.mean;
  j["s_C"] = std::isnan(mc.stddev) ? jamsim::Json(nullptr) : jamsim::Json(mc.stddev);
  j["runs"] = mc.runs;
  j["unsettled"] = mc.unsettled;
  jamsim::Json per = jamsim::Json::array();
  for (const auto& v : mc.per_run) per.push_back(v ? jamsim::Json(*v) : jamsim::Json(nullptr));
  j["per_run"] = per;
  const auto dir = out_dir(opt);
  jamsim::write_text_file((dir / "montecarlo.json").string(), j.dump(2) + "\n");
  std::cout << "montecarlo: m_C " << jamsim::format_double(mc.mean) << ", runs " << mc.runs
            << ", unsettled " << mc.unsettled << "\n";
  return kExitOk;
}

int cmd_sweep(const Options& opt) {
  const auto doc = jamsim::load_json_file(opt.config);
  auto sw = jamsim::sweep_config_from_json(doc);
  apply_overrides(sw.base, opt);
  ensure_horizon(sw.base);

  std::vector<jamsim::SweepRow> rows;
  for (double rho : sw.rho_axis) {
    for (double second : sw.second_axis) {
      jamsim::RunConfig cell = sw.base;
      if (sw.second_is_kappa)
        cell.attack = jamsim::aware_attack(second, rho);
      else
        cell.attack = jamsim::periodic_attack(rho, second,
                                              sw.base.attack.kappa_from_config ? sw.base.attack.kappa
                                                                               : -1.0);
      jamsim::SweepRow row;
      row.rho = rho;
      row.second = second;
      row.summary = jamsim::monte_carlo(cell, sw.seeds, opt.workers, sw.use_first_entry);
      rows.push_back(std::move(row));
      std::cout << "cell rho=" << rho << (sw.second_is_kappa ? " kappa=" : " sigma=") << second
                << ": m_C " << jamsim::format_double(rows.back().summary.mean) << "\n";
    }
  }
  const auto dir = out_dir(opt);
  jamsim::write_text_file((dir / "sweep.csv").string(), jamsim::sweep_csv(rows, sw.second_is_kappa));
  return kExitOk;
}

int cmd_verify(const Options& opt) {
  const auto doc = jamsim::load_json_file(opt.config);
  auto cfg = jamsim::run_config_from_json(doc);
  apply_overrides(cfg, opt);
  ensure_horizon(cfg);

  const auto verify_opts = doc.value("verify", jamsim::Json::object());
  const double h = verify_opts.value("h", 1e-6);

  const auto tr = jamsim::simulate(cfg);
  std::vector<jamsim::CheckResult> checks;
  checks.push_back(jamsim::check_lemma1(tr, cfg.protocol));
  checks.push_back(jamsim::check_lyapunov_monotone(tr, cfg.graph));
  checks.push_back(jamsim::check_speed_bound(tr));
  checks.push_back(jamsim::check_hold_decrease(tr, cfg.graph, cfg.protocol));
  checks.push_back(jamsim::check_settles(tr, cfg.graph, cfg.protocol.epsilon));
  checks.push_back(jamsim::check_attack_budget(tr));
  checks.push_back(jamsim::check_integrator_oracle(tr, cfg.graph, cfg.protocol, h));
  checks.push_back(jamsim::check_measure_oracle(tr));
  if (cfg.attack.kind == jamsim::AttackKind::aware && tr.attacks.count() > 1)
    checks.push_back(jamsim::check_budget_oracle(tr));

  if (verify_opts.contains("bounds")) {
    const auto& b = verify_opts.at("bounds");
    const int runs = b.value("runs", 50);
    const auto bp = jamsim::bound_params(cfg.attack.kappa, cfg.attack.rho, cfg.protocol.delta[0]);
    std::vector<jamsim::Trajectory> batch;
    for (auto seed : jamsim::derive_seeds(cfg.seed, runs)) {
      jamsim::RunConfig c = cfg;
      c.seed = seed;
      batch.push_back(jamsim::simulate(c));
    }
    std::vector<std::pair<long long, long long>> cases;
    if (b.contains("N") && b.contains("M"))
      cases.emplace_back(b.at("N").get<long long>(), b.at("M").get<long long>());
    const auto rep = jamsim::empirical_bound_check(batch, bp, cases, b.value("min_blocks", 100));
    double worst = 1.0;
    for (double f : rep.agent_frequency) worst = std::min(worst, f);
    checks.push_back({"block_success_bound", rep.frequency_ok,
                      "min agent frequency " + jamsim::format_double(worst) + " vs bound " +
                          jamsim::format_double(rep.block_bound)});
    for (const auto& c : rep.prop3)
      checks.push_back({"tail_bound_N" + std::to_string(c.N) + "_M" + std::to_string(c.M), c.ok,
                        "empirical " + jamsim::format_double(c.empirical) + " vs bound " +
                            jamsim::format_double(c.bound)});
  }

  bool all = true;
  jamsim::Json report;
  report["checks"] = jamsim::Json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
    report["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  report["pass"] = all;
  const auto dir = out_dir(opt);
  jamsim::write_text_file((dir / "verify_report.json").string(), report.dump(2) + "\n");
  return all ? kExitOk : kExitVerification;
}

int exit_code_for(const jamsim::Error& e) {
  switch (e.code()) {
    case jamsim::Errc::io_error:
      return kExitOther;
    case jamsim::Errc::all_runs_unsettled:
    case jamsim::Errc::insufficient_samples:
      return kExitVerification;
    default:
      return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-driven simulator for randomized-transmission consensus under jamming"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "experiment config (JSON)")->required();
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seed", opt.seed, "master seed override");
    sub->add_option("--workers", opt.workers, "parallel workers for batches")
        ->check(CLI::PositiveNumber);
    sub->add_option("--horizon", opt.horizon, "horizon override in seconds");
  };
  auto* run = app.add_subcommand("run", "single simulation; trajectory, attempt log, summary");
  auto* sweep = app.add_subcommand("sweep", "rho x sigma (or rho x kappa) grid of batches");
  auto* mc = app.add_subcommand("montecarlo", "seeded batch with consensus-time statistics");
  auto* verify = app.add_subcommand("verify", "invariant and oracle suite; nonzero exit on failure");
  for (auto* sub : {run, sweep, mc, verify}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (mc->parsed()) return cmd_montecarlo(opt);
    if (verify->parsed()) return cmd_verify(opt);
  } catch (const jamsim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitConfig;
}
