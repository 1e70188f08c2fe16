#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "igs/baselines.hpp"

namespace igs {

// iid Rayleigh ensemble: direct gains CN(0, var_direct), cross gains
// CN(0, var_cross), drawn in the fixed order h11, h12, h21, h22 from the
// per-channel stream (seed, index). Powers are sigma2 * 10^(snr_db/10).
struct ChannelEnsembleConfig {
  std::uint64_t seed = 1;
  int count = 100;
  double var_direct = 1.0;
  double var_cross = 1.0;
  double snr_db = 0.0;
};

std::vector<SisoIcInstance> gen_channels(const ChannelEnsembleConfig& cfg);

// JSON round-trips. Complex numbers serialize as {"re": x, "im": y}.
std::string channel_to_json(const SisoIcInstance& ic);
SisoIcInstance channel_from_json(const std::string& text);
std::string strategy_to_json(const SisoStrategy& s);
SisoStrategy strategy_from_json(const std::string& text);
std::string ensemble_to_json(const ChannelEnsembleConfig& cfg,
                             const std::vector<SisoIcInstance>& chans);
std::vector<SisoIcInstance> ensemble_from_json(const std::string& text);

// Pinned two-user scenarios used by the anchor workflows: a mixed-interference
// channel with an unequal profile and a published egalitarian sum-rate
// reference, and a weakly interfering channel.
struct ReferenceCase {
  SisoIcInstance channel;
  double alpha1 = 0.5, alpha2 = 0.5;
  double reference_sum_bits = 0.0;
};
ReferenceCase reference_case_strong();
ReferenceCase reference_case_weak();

// Published demo channels for boundary sweeps; power follows the SNR with
// sigma2 = 1. "mixed" carries comparable direct and cross strength on both
// links, "weak" leaves user 1 nearly interference free.
SisoIcInstance demo_channel_mixed(double snr_db);
SisoIcInstance demo_channel_weak(double snr_db);

struct MethodSet {
  bool proper = true, separate = true, joint = true, oracle = false, tdma = false;
};

struct RunStats {
  int rows = 0;
  int solver_failures = 0;
};

// Boundary sweep over alpha1 = i/(alpha_points+1). One CSV row per
// (profile, method); '#' header lines echo the configuration.
struct RegionConfig {
  SisoIcInstance channel;
  int alpha_points = 99;
  MethodSet methods{true, true, true, true, false};
  MaxminOptions opts{};
};
RunStats run_region(const RegionConfig& cfg, std::ostream& csv);

// Per-channel ratio of the grid-oracle egalitarian value to the joint
// optimizer's; one row per channel plus a '#' summary trailer.
struct RatioConfig {
  ChannelEnsembleConfig ensemble{};
  MaxminOptions opts{};
};
struct RatioSummary {
  int count = 0, solver_failures = 0;
  double mean = 0.0, lo = 0.0, hi = 0.0, p05 = 0.0, p95 = 0.0;
};
RatioSummary run_ratio(const RatioConfig& cfg, std::ostream& csv);

// Ensemble-mean max-min rate per method across an SNR sweep.
struct MaxminConfig {
  ChannelEnsembleConfig ensemble{7, 50, 1.0, 0.2, 0.0};
  std::vector<double> snr_db{-10, -5, 0, 5, 10, 15, 20, 25, 30, 35, 40};
  MethodSet methods{true, true, false, false, true};
  MaxminOptions opts{};
};
RunStats run_maxmin(const MaxminConfig& cfg, std::ostream& csv);

// The pinned strong-interference scenario end to end: power-only, two-stage,
// and relax-and-randomize points plus their gains over the reference sum.
struct TableCaseConfig {
  JointOptions joint{};
  SeparateOptions separate{};
  bool include_oracle = false;
  GridSpec grid{};
};
struct TableCaseResult {
  ReferenceCase ref;
  ParetoPoint proper, separate, joint;
  std::optional<ParetoPoint> oracle;
  double proper_sum_bits = 0.0, separate_sum_bits = 0.0, joint_sum_bits = 0.0;
  double separate_gain_pct = 0.0, joint_gain_pct = 0.0;
};
TableCaseResult run_table_case(const TableCaseConfig& cfg);
std::string table_case_to_json(const TableCaseResult& r);

// Round-trip report between the complex and stacked-real descriptions of one
// scalar strategy.
std::string convert_report(const SisoStrategy& s, double power_budget);

// Draws from the widely linear factorization of one scalar strategy and
// compares empirical moments against the targets.
struct PrecodeDemoConfig {
  SisoStrategy strategy{1.0, cplx(0.0, 0.8)};
  int samples = 100000;
  std::uint64_t seed = 1;
};
std::string run_precode_demo(const PrecodeDemoConfig& cfg);

// Machine-readable description of the file formats the tool reads and writes.
std::string cli_schema_json();

}  // namespace igs
