// Command line front end. Every experiment writes plot-ready CSV or JSON with
// the configuration echoed in the header; exit code 0 on success, 2 on a
// configuration problem, 3 when solver failures exceed the allowed budget.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "igs/harness.hpp"
#include "igs/version.hpp"

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverFailures = 3;

// JSON config sections are keyed by subcommand; flags parsed afterwards win.
json preload_config(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc)
      path = argv[i + 1];
    else if (a.rfind("--config=", 0) == 0)
      path = a.substr(9);
  }
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j = json::parse(in);
  if (!j.is_object()) throw std::runtime_error("config file must hold a JSON object");
  return j;
}

template <typename T>
void cfg_get(const json& cfg, const char* section, const char* key, T& dst) {
  const auto sec = cfg.find(section);
  if (sec == cfg.end() || !sec->is_object()) return;
  const auto it = sec->find(key);
  if (it != sec->end()) dst = it->get<T>();
}

// Sink for an experiment's primary output: stdout unless --out was given.
struct OutFile {
  std::ofstream file;
  std::ostream& os;
  explicit OutFile(const std::string& path) : os(path.empty() ? std::cout : file) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw std::runtime_error("cannot open output file: " + path);
    }
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

igs::SisoIcInstance named_channel(const std::string& name, double snr_db) {
  if (name == "mixed") return igs::demo_channel_mixed(snr_db);
  if (name == "weak") return igs::demo_channel_weak(snr_db);
  throw std::runtime_error("unknown channel name: " + name);
}

int check_failures(int failures, int budget, std::ostream& log) {
  if (failures > budget) {
    log << "solver failures " << failures << " exceed allowed " << budget << '\n';
    return kSolverFailures;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  json cfg;
  try {
    cfg = preload_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  CLI::App app{"improper Gaussian signaling rate tool"};
  app.set_version_flag("--version", igs::version_string);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file; sections are keyed by subcommand, explicit flags "
                 "override its values");
  bool want_schema = false;
  app.add_flag("--schema", want_schema, "print the output schemas as JSON and exit");
  int max_solver_failures = 0;
  cfg_get(cfg, "global", "max_solver_failures", max_solver_failures);
  app.add_option("--max-solver-failures", max_solver_failures,
                 "largest tolerated per-run solver failure count");

  // region: boundary sweep on one literal channel
  std::string rg_channel = "mixed", rg_channel_json, rg_out;
  double rg_snr = 0.0;
  int rg_alpha_points = 99;
  igs::MethodSet rg_methods{};
  int rg_trials = 1000;
  cfg_get(cfg, "region", "channel", rg_channel);
  cfg_get(cfg, "region", "channel_json", rg_channel_json);
  cfg_get(cfg, "region", "snr", rg_snr);
  cfg_get(cfg, "region", "alpha_points", rg_alpha_points);
  cfg_get(cfg, "region", "trials", rg_trials);
  cfg_get(cfg, "region", "proper", rg_methods.proper);
  cfg_get(cfg, "region", "separate", rg_methods.separate);
  cfg_get(cfg, "region", "joint", rg_methods.joint);
  cfg_get(cfg, "region", "oracle", rg_methods.oracle);
  cfg_get(cfg, "region", "tdma", rg_methods.tdma);
  cfg_get(cfg, "region", "out", rg_out);
  auto* region = app.add_subcommand("region", "sweep rate profiles on one channel");
  region->add_option("--channel", rg_channel, "named demo channel: mixed | weak")
      ->check(CLI::IsMember({"mixed", "weak"}));
  region->add_option("--channel-json", rg_channel_json,
                     "file with a literal channel (overrides --channel)");
  region->add_option("--snr", rg_snr, "SNR in dB; per-user power is 10^(snr/10)");
  region->add_option("--alpha-points", rg_alpha_points, "interior profile count")
      ->check(CLI::PositiveNumber);
  region->add_option("--trials", rg_trials, "randomization trials for the joint stage")
      ->check(CLI::PositiveNumber);
  region->add_flag("--no-proper", [&](std::size_t) { rg_methods.proper = false; },
                   "skip the power-only baseline");
  region->add_flag("--no-separate", [&](std::size_t) { rg_methods.separate = false; },
                   "skip the two-stage optimizer");
  region->add_flag("--no-joint", [&](std::size_t) { rg_methods.joint = false; },
                   "skip the relax-and-randomize optimizer");
  region->add_flag("--no-oracle", [&](std::size_t) { rg_methods.oracle = false; },
                   "skip the exhaustive grid reference");
  region->add_flag("--with-tdma", [&](std::size_t) { rg_methods.tdma = true; },
                   "add the time-division baseline");
  region->add_option("--out", rg_out, "output CSV path (default stdout)");

  // ratio: grid reference over joint optimizer across an ensemble
  igs::ChannelEnsembleConfig rt_ens;
  rt_ens.count = 500;
  int rt_trials = 1000;
  std::string rt_out;
  cfg_get(cfg, "ratio", "count", rt_ens.count);
  cfg_get(cfg, "ratio", "seed", rt_ens.seed);
  cfg_get(cfg, "ratio", "var_direct", rt_ens.var_direct);
  cfg_get(cfg, "ratio", "var_cross", rt_ens.var_cross);
  cfg_get(cfg, "ratio", "snr", rt_ens.snr_db);
  cfg_get(cfg, "ratio", "trials", rt_trials);
  cfg_get(cfg, "ratio", "out", rt_out);
  auto* ratio =
      app.add_subcommand("ratio", "per-channel oracle/joint value ratio with summary");
  ratio->add_option("--count", rt_ens.count, "ensemble size")->check(CLI::PositiveNumber);
  ratio->add_option("--seed", rt_ens.seed, "ensemble seed");
  ratio->add_option("--var-direct", rt_ens.var_direct, "direct gain variance")
      ->check(CLI::NonNegativeNumber);
  ratio->add_option("--var-cross", rt_ens.var_cross, "cross gain variance")
      ->check(CLI::NonNegativeNumber);
  ratio->add_option("--snr", rt_ens.snr_db, "SNR in dB");
  ratio->add_option("--trials", rt_trials, "randomization trials for the joint stage")
      ->check(CLI::PositiveNumber);
  ratio->add_option("--out", rt_out, "output CSV path (default stdout)");

  // maxmin: egalitarian rate averages across an SNR sweep
  igs::MaxminConfig mm;
  int mm_trials = 1000;
  std::string mm_out;
  cfg_get(cfg, "maxmin", "count", mm.ensemble.count);
  cfg_get(cfg, "maxmin", "seed", mm.ensemble.seed);
  cfg_get(cfg, "maxmin", "var_direct", mm.ensemble.var_direct);
  cfg_get(cfg, "maxmin", "var_cross", mm.ensemble.var_cross);
  cfg_get(cfg, "maxmin", "snr", mm.snr_db);
  cfg_get(cfg, "maxmin", "trials", mm_trials);
  cfg_get(cfg, "maxmin", "proper", mm.methods.proper);
  cfg_get(cfg, "maxmin", "separate", mm.methods.separate);
  cfg_get(cfg, "maxmin", "joint", mm.methods.joint);
  cfg_get(cfg, "maxmin", "oracle", mm.methods.oracle);
  cfg_get(cfg, "maxmin", "tdma", mm.methods.tdma);
  cfg_get(cfg, "maxmin", "out", mm_out);
  auto* maxmin =
      app.add_subcommand("maxmin", "ensemble-average max-min rate per SNR and method");
  maxmin->add_option("--count", mm.ensemble.count, "ensemble size per SNR")
      ->check(CLI::PositiveNumber);
  maxmin->add_option("--seed", mm.ensemble.seed, "ensemble seed");
  maxmin->add_option("--var-direct", mm.ensemble.var_direct, "direct gain variance")
      ->check(CLI::NonNegativeNumber);
  maxmin->add_option("--var-cross", mm.ensemble.var_cross, "cross gain variance")
      ->check(CLI::NonNegativeNumber);
  maxmin->add_option("--snr", mm.snr_db, "SNR list in dB")->delimiter(',');
  maxmin->add_option("--trials", mm_trials, "randomization trials for the joint stage")
      ->check(CLI::PositiveNumber);
  maxmin->add_flag("--no-proper", [&](std::size_t) { mm.methods.proper = false; },
                   "skip the power-only baseline");
  maxmin->add_flag("--no-separate", [&](std::size_t) { mm.methods.separate = false; },
                   "skip the two-stage optimizer");
  maxmin->add_flag("--no-tdma", [&](std::size_t) { mm.methods.tdma = false; },
                   "skip the time-division baseline");
  maxmin->add_flag("--with-joint", [&](std::size_t) { mm.methods.joint = true; },
                   "add the relax-and-randomize optimizer");
  maxmin->add_flag("--with-oracle", [&](std::size_t) { mm.methods.oracle = true; },
                   "add the exhaustive grid reference");
  maxmin->add_option("--out", mm_out, "output CSV path (default stdout)");

  // table: the pinned strong-interference case as a JSON report
  igs::TableCaseConfig tb;
  std::string tb_out;
  int tb_trials = 1000;
  cfg_get(cfg, "table", "trials", tb_trials);
  cfg_get(cfg, "table", "oracle", tb.include_oracle);
  cfg_get(cfg, "table", "out", tb_out);
  auto* table = app.add_subcommand(
      "table", "pinned strong-interference case with gains over the reference sum");
  table->add_option("--trials", tb_trials, "randomization trials for the joint stage")
      ->check(CLI::PositiveNumber);
  table->add_flag("--with-oracle", tb.include_oracle, "add the exhaustive grid reference");
  table->add_option("--out", tb_out, "output JSON path (default stdout)");

  // convert: one strategy between complex and stacked-real forms
  double cv_c = 1.0, cv_ct_re = 0.0, cv_ct_im = 0.0;
  double cv_power = -1.0;
  std::string cv_json, cv_out;
  cfg_get(cfg, "convert", "c", cv_c);
  cfg_get(cfg, "convert", "ct_re", cv_ct_re);
  cfg_get(cfg, "convert", "ct_im", cv_ct_im);
  cfg_get(cfg, "convert", "power", cv_power);
  cfg_get(cfg, "convert", "json", cv_json);
  cfg_get(cfg, "convert", "out", cv_out);
  auto* convert = app.add_subcommand(
      "convert", "print the real-composite form of one transmit strategy");
  convert->add_option("--c", cv_c, "transmit covariance (real, >= 0)");
  convert->add_option("--ct-re", cv_ct_re, "pseudo-covariance real part");
  convert->add_option("--ct-im", cv_ct_im, "pseudo-covariance imaginary part");
  convert->add_option("--power", cv_power, "power budget (default: equal to --c)");
  convert->add_option("--json", cv_json, "file with a strategy JSON (overrides flags)");
  convert->add_option("--out", cv_out, "output JSON path (default stdout)");

  // gen-channels: reproducible ensemble as JSON
  igs::ChannelEnsembleConfig gc;
  std::string gc_out;
  cfg_get(cfg, "gen_channels", "count", gc.count);
  cfg_get(cfg, "gen_channels", "seed", gc.seed);
  cfg_get(cfg, "gen_channels", "var_direct", gc.var_direct);
  cfg_get(cfg, "gen_channels", "var_cross", gc.var_cross);
  cfg_get(cfg, "gen_channels", "snr", gc.snr_db);
  cfg_get(cfg, "gen_channels", "out", gc_out);
  auto* gen = app.add_subcommand("gen-channels", "draw a seeded channel ensemble");
  gen->add_option("--count", gc.count, "number of channels")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gc.seed, "ensemble seed");
  gen->add_option("--var-direct", gc.var_direct, "direct gain variance")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--var-cross", gc.var_cross, "cross gain variance")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--snr", gc.snr_db, "SNR in dB");
  gen->add_option("--out", gc_out, "output JSON path (default stdout)");

  // precode-demo: filter construction plus sampled moment check
  igs::PrecodeDemoConfig pd;
  double pd_c = 1.0, pd_ct_re = 0.0, pd_ct_im = 0.8;
  std::string pd_out;
  cfg_get(cfg, "precode_demo", "c", pd_c);
  cfg_get(cfg, "precode_demo", "ct_re", pd_ct_re);
  cfg_get(cfg, "precode_demo", "ct_im", pd_ct_im);
  cfg_get(cfg, "precode_demo", "samples", pd.samples);
  cfg_get(cfg, "precode_demo", "seed", pd.seed);
  cfg_get(cfg, "precode_demo", "out", pd_out);
  auto* demo = app.add_subcommand(
      "precode-demo", "build the widely linear filters and verify sampled moments");
  demo->add_option("--c", pd_c, "transmit covariance (real, >= 0)");
  demo->add_option("--ct-re", pd_ct_re, "pseudo-covariance real part");
  demo->add_option("--ct-im", pd_ct_im, "pseudo-covariance imaginary part");
  demo->add_option("--samples", pd.samples, "sample count")->check(CLI::PositiveNumber);
  demo->add_option("--seed", pd.seed, "sampling seed");
  demo->add_option("--out", pd_out, "output JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (want_schema) {
    std::cout << igs::cli_schema_json() << '\n';
    return kOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kConfigError;
  }

  try {
    if (region->parsed()) {
      igs::RegionConfig rc;
      rc.channel = rg_channel_json.empty()
                       ? named_channel(rg_channel, rg_snr)
                       : igs::channel_from_json(read_file(rg_channel_json));
      rc.alpha_points = rg_alpha_points;
      rc.methods = rg_methods;
      rc.opts.joint.trials = rg_trials;
      OutFile out(rg_out);
      const igs::RunStats stats = igs::run_region(rc, out.os);
      return check_failures(stats.solver_failures, max_solver_failures, std::cerr);
    }
    if (ratio->parsed()) {
      igs::RatioConfig rc;
      rc.ensemble = rt_ens;
      rc.opts.joint.trials = rt_trials;
      OutFile out(rt_out);
      const igs::RatioSummary sum = igs::run_ratio(rc, out.os);
      return check_failures(sum.solver_failures, max_solver_failures, std::cerr);
    }
    if (maxmin->parsed()) {
      mm.opts.joint.trials = mm_trials;
      OutFile out(mm_out);
      const igs::RunStats stats = igs::run_maxmin(mm, out.os);
      return check_failures(stats.solver_failures, max_solver_failures, std::cerr);
    }
    if (table->parsed()) {
      tb.joint.trials = tb_trials;
      OutFile out(tb_out);
      out.os << igs::table_case_to_json(igs::run_table_case(tb)) << '\n';
      return kOk;
    }
    if (convert->parsed()) {
      igs::SisoStrategy s{cv_c, igs::cplx(cv_ct_re, cv_ct_im)};
      if (!cv_json.empty()) s = igs::strategy_from_json(read_file(cv_json));
      const double budget = cv_power >= 0.0 ? cv_power : s.c;
      OutFile out(cv_out);
      out.os << igs::convert_report(s, budget) << '\n';
      return kOk;
    }
    if (gen->parsed()) {
      OutFile out(gc_out);
      out.os << igs::ensemble_to_json(gc, igs::gen_channels(gc)) << '\n';
      return kOk;
    }
    if (demo->parsed()) {
      pd.strategy = igs::SisoStrategy{pd_c, igs::cplx(pd_ct_re, pd_ct_im)};
      OutFile out(pd_out);
      out.os << igs::run_precode_demo(pd) << '\n';
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n' << app.get_subcommands().front()->help();
    return kConfigError;
  }
  return kOk;
}
