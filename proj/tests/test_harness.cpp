#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "igs/harness.hpp"
#include "support/reference_case.hpp"

using igs::cplx;
using json = nlohmann::json;

namespace {

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream is(csv);
  std::string line;
  bool past_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') continue;
    if (!past_header) {
      past_header = true;  // the column header line
      continue;
    }
    out.push_back(line);
  }
  return out;
}

int count_fields(const std::string& row) {
  return 1 + static_cast<int>(std::count(row.begin(), row.end(), ','));
}

}  // namespace

TEST_CASE("region sweep emits one row per profile and method") {
  igs::RegionConfig cfg;
  cfg.channel = igs::demo_channel_mixed(10.0);
  cfg.alpha_points = 5;
  cfg.methods = {true, true, false, false, false};
  std::ostringstream os;
  const auto stats = igs::run_region(cfg, os);
  CHECK(stats.rows == 10);
  CHECK(stats.solver_failures == 0);
  const std::string text = os.str();
  CHECK(text.rfind("# tool igs", 0) == 0);
  CHECK(text.find("alpha1,alpha2,method,") != std::string::npos);
  const auto rows = data_lines(text);
  REQUIRE(static_cast<int>(rows.size()) == stats.rows);
  for (const auto& row : rows) {
    CHECK(count_fields(row) == 9);
    CHECK(row.find(",ok") != std::string::npos);
  }
  // both methods appear for the first profile
  CHECK(text.find(",proper,") != std::string::npos);
  CHECK(text.find(",separate,") != std::string::npos);
}

TEST_CASE("ratio runs are reproducible byte for byte") {
  igs::RatioConfig cfg;
  cfg.ensemble = {3, 3, 1.0, 1.0, 0.0};
  cfg.opts.joint.trials = 150;
  std::ostringstream a, b;
  const auto sa = igs::run_ratio(cfg, a);
  const auto sb = igs::run_ratio(cfg, b);
  CHECK(a.str() == b.str());
  CHECK(sa.count == 3);
  CHECK(sa.solver_failures == 0);
  CHECK(sa.count == sb.count);
  CHECK(sa.mean == sb.mean);
  CHECK(sa.lo <= sa.mean);
  CHECK(sa.mean <= sa.hi);
  CHECK(sa.lo <= sa.p05);
  CHECK(sa.p95 <= sa.hi);
  // grid search and relaxation rounding agree to within a few percent
  CHECK(sa.mean > 0.9);
  CHECK(sa.mean < 1.2);
  CHECK(a.str().find("# summary") != std::string::npos);
  CHECK(static_cast<int>(data_lines(a.str()).size()) == 3);
}

TEST_CASE("maxmin sweep reports per-snr per-method means") {
  igs::MaxminConfig cfg;
  cfg.ensemble = {7, 4, 1.0, 0.2, 0.0};
  cfg.snr_db = {0.0, 10.0};
  cfg.methods = {true, false, false, false, true};
  std::ostringstream os;
  const auto stats = igs::run_maxmin(cfg, os);
  CHECK(stats.rows == 4);
  CHECK(stats.solver_failures == 0);
  const auto rows = data_lines(os.str());
  REQUIRE(rows.size() == 4);
  double proper0 = 0.0, proper10 = 0.0;
  for (const auto& row : rows) {
    CHECK(count_fields(row) == 5);
    std::istringstream is(row);
    std::string snr, method, mean;
    std::getline(is, snr, ',');
    std::getline(is, method, ',');
    std::getline(is, mean, ',');
    if (method == "proper" && snr == "0") proper0 = std::stod(mean);
    if (method == "proper" && snr == "10") proper10 = std::stod(mean);
  }
  // more power, more rate
  CHECK(proper0 > 0.0);
  CHECK(proper10 > proper0);
}

TEST_CASE("pinned case report carries the recorded values and gains") {
  igs::TableCaseConfig cfg;
  const auto r = igs::run_table_case(cfg);
  CHECK(r.ref.reference_sum_bits == doctest::Approx(4.6775).epsilon(1e-12));
  CHECK(r.ref.alpha1 == doctest::Approx(2.8673 / 4.6775).epsilon(1e-9));
  REQUIRE(r.proper.diag.status == "ok");
  REQUIRE(r.separate.diag.status == "ok");
  REQUIRE(r.joint.diag.status == "ok");
  CHECK_FALSE(r.oracle.has_value());

  CHECK(r.proper_sum_bits ==
        doctest::Approx(refcase::kFrozenProperValue / refcase::kLn2).epsilon(5e-3));
  CHECK(r.separate_sum_bits == doctest::Approx(5.4201).epsilon(2e-3));
  CHECK(r.joint_sum_bits >= 5.55);
  CHECK(r.joint_sum_bits >= r.separate_sum_bits - 0.01);

  CHECK(r.separate_gain_pct ==
        doctest::Approx(100.0 * (r.separate_sum_bits / 4.6775 - 1.0)).epsilon(1e-9));
  CHECK(r.separate_gain_pct == doctest::Approx(15.88).epsilon(0.03));
  CHECK(r.joint_gain_pct >= 18.0);

  const json j = json::parse(igs::table_case_to_json(r));
  CHECK(j.at("reference").at("sum_bits").get<double>() == 4.6775);
  CHECK(j.contains("proper"));
  CHECK(j.contains("separate"));
  CHECK(j.contains("joint"));
  CHECK_FALSE(j.contains("oracle"));
  CHECK(j.at("separate_gain_pct").get<double>() ==
        doctest::Approx(r.separate_gain_pct).epsilon(1e-12));
}

TEST_CASE("conversion report round-trips and flags violations") {
  const json ok = json::parse(igs::convert_report({1.0, cplx(0.0, 0.8)}, 1.0));
  CHECK(ok.at("validity").at("valid").get<bool>());
  CHECK(ok.at("real_trace").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  const auto& q = ok.at("real_covariance");
  CHECK(q[0][0].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(q[0][1].get<double>() == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(q[1][0].get<double>() == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(q[1][1].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ok.at("roundtrip_error").get<double>() < 1e-14);

  const json bad = json::parse(igs::convert_report({1.0, cplx(1.2, 0.0)}, 1.0));
  CHECK_FALSE(bad.at("validity").at("valid").get<bool>());
  CHECK_FALSE(bad.at("validity").at("reason").get<std::string>().empty());

  const json over = json::parse(igs::convert_report({2.0, cplx(0.0, 0.0)}, 1.0));
  CHECK_FALSE(over.at("validity").at("valid").get<bool>());
  CHECK(over.at("validity").at("power_margin").get<double>() ==
        doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("precoding demo matches the requested moments") {
  igs::PrecodeDemoConfig cfg;
  cfg.strategy = {1.0, cplx(0.0, 0.8)};
  cfg.samples = 50000;
  cfg.seed = 4;
  const json j = json::parse(igs::run_precode_demo(cfg));
  CHECK(j.at("samples").get<int>() == 50000);
  CHECK(j.at("empirical").at("c").get<double>() == doctest::Approx(1.0).epsilon(0.03));
  CHECK(j.at("abs_error").at("c").get<double>() < 0.03);
  CHECK(j.at("abs_error").at("ct").get<double>() < 0.03);
  CHECK(j.contains("filters"));
  CHECK(j.contains("real_representation"));

  igs::PrecodeDemoConfig bad = cfg;
  bad.samples = 0;
  CHECK_THROWS_AS(igs::run_precode_demo(bad), std::invalid_argument);
  bad = cfg;
  bad.strategy = {1.0, cplx(2.0, 0.0)};
  CHECK_THROWS_AS(igs::run_precode_demo(bad), std::invalid_argument);
}

TEST_CASE("schema document lists every subcommand") {
  const json j = json::parse(igs::cli_schema_json());
  CHECK(j.at("tool").get<std::string>() == "igs");
  const auto& sub = j.at("subcommands");
  CHECK(sub.size() == 7);
  for (const char* name :
       {"region", "ratio", "maxmin", "table", "convert", "gen-channels",
        "precode-demo"})
    CHECK(sub.contains(name));
}
