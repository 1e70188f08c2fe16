#include "igs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "igs/rate_engine.hpp"
#include "igs/rng.hpp"
#include "igs/version.hpp"
#include "igs/widely_linear.hpp"

namespace igs {
namespace {

using nlohmann::json;

constexpr double kLn2 = 0.6931471805599453;

json to_json(const cplx& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cplx cplx_from(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw std::invalid_argument("complex values need numeric re and im fields");
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

json channel_json(const SisoIcInstance& ic) {
  return json{
      {"h",
       json::array({json::array({to_json(ic.h[0][0]), to_json(ic.h[0][1])}),
                    json::array({to_json(ic.h[1][0]), to_json(ic.h[1][1])})})},
      {"sigma2", ic.sigma2},
      {"power", json::array({ic.power[0], ic.power[1]})}};
}

SisoIcInstance channel_from(const json& j) {
  SisoIcInstance ic;
  const auto& h = j.at("h");
  if (!h.is_array() || h.size() != 2 || !h[0].is_array() || h[0].size() != 2 ||
      !h[1].is_array() || h[1].size() != 2)
    throw std::invalid_argument("channel field h must be a 2x2 array");
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) ic.h[k][l] = cplx_from(h[k][l]);
  ic.sigma2 = j.value("sigma2", 1.0);
  if (!(ic.sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  if (j.contains("power")) {
    const auto& p = j.at("power");
    if (!p.is_array() || p.size() != 2)
      throw std::invalid_argument("power must be a 2-element array");
    ic.power = {p[0].get<double>(), p[1].get<double>()};
  }
  if (!(ic.power[0] >= 0.0) || !(ic.power[1] >= 0.0))
    throw std::invalid_argument("powers must be nonnegative");
  return ic;
}

json strategy_json(const SisoStrategy& s) {
  return json{{"c", s.c}, {"ct", to_json(s.ct)}};
}

SisoStrategy strategy_from(const json& j) {
  SisoStrategy s;
  s.c = j.at("c").get<double>();
  s.ct = cplx_from(j.at("ct"));
  return s;
}

json config_json(const ChannelEnsembleConfig& cfg) {
  return json{{"seed", cfg.seed},
              {"count", cfg.count},
              {"var_direct", cfg.var_direct},
              {"var_cross", cfg.var_cross},
              {"snr_db", cfg.snr_db}};
}

json point_json(const ParetoPoint& pt) {
  return json{{"value_bits", pt.value / kLn2},
              {"rates_bits", json::array({pt.rates[0] / kLn2, pt.rates[1] / kLn2})},
              {"sum_bits", (pt.rates[0] + pt.rates[1]) / kLn2},
              {"strategy",
               json::array({strategy_json(pt.strategy[0]), strategy_json(pt.strategy[1])})},
              {"status", pt.diag.status}};
}

void header(std::ostream& os, const char* command, const json& cfg) {
  os << "# tool igs " << version_string << ' ' << command << '\n';
  os << "# config " << cfg.dump() << '\n';
  os << "# units bits\n";
}

bool point_ok(const ParetoPoint& pt) {
  return pt.diag.status == "ok" || pt.diag.status == "tdma";
}

ParetoPoint make_proper_point(const SisoIcInstance& ic, const RateProfile& pr,
                              double tol) {
  const ProperSolution ps = proper_pareto_point(ic, pr, tol);
  ParetoPoint pt;
  pt.strategy = {SisoStrategy{ps.c[0], 0.0}, SisoStrategy{ps.c[1], 0.0}};
  for (int k = 0; k < 2; ++k) pt.rates[k] = siso_rate(ic, pt.strategy, k).total;
  pt.value = std::min(pt.rates[0] / pr[0], pt.rates[1] / pr[1]);
  pt.diag.r_star = ps.r_star;
  pt.diag.upper_bound = ps.r_star;
  pt.diag.bisect_value = ps.r_star;
  pt.diag.status = ps.ok ? "ok" : "power stage failed";
  return pt;
}

// time sharing tuned to the ray: user 1 transmits a fraction tau of the time
ParetoPoint tdma_region_point(const SisoIcInstance& ic, const RateProfile& pr) {
  ParetoPoint pt;
  const double a = std::log1p(std::norm(ic.h[0][0]) * ic.power[0] / ic.sigma2);
  const double b = std::log1p(std::norm(ic.h[1][1]) * ic.power[1] / ic.sigma2);
  const double den = pr[1] * a + pr[0] * b;
  const double value = den > 0.0 ? a * b / den : 0.0;
  pt.value = value;
  pt.rates = {pr[0] * value, pr[1] * value};
  pt.strategy = {SisoStrategy{ic.power[0], 0.0}, SisoStrategy{ic.power[1], 0.0}};
  pt.diag.status = "tdma";
  return pt;
}

double percentile(std::vector<double> v, double p) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = p * (v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  const double frac = pos - i;
  return v[i] * (1.0 - frac) + v[i + 1] * frac;
}

// channels are independent, so fan them out; every result lands in its own
// slot and rows are emitted by index afterwards, keeping output order and
// numerics identical whatever the scheduling
void parallel_channels(int n, const std::function<void(int)>& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers =
      std::max(1u, std::min({hw == 0 ? 1u : hw, static_cast<unsigned>(n), 8u}));
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<SisoIcInstance> gen_channels(const ChannelEnsembleConfig& cfg) {
  if (cfg.count < 0) throw std::invalid_argument("channel count must be nonnegative");
  std::vector<SisoIcInstance> out;
  out.reserve(cfg.count);
  const double p = std::pow(10.0, cfg.snr_db / 10.0);
  for (int i = 0; i < cfg.count; ++i) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
    SisoIcInstance ic;
    ic.h[0][0] = rng.cnormal(cfg.var_direct);
    ic.h[0][1] = rng.cnormal(cfg.var_cross);
    ic.h[1][0] = rng.cnormal(cfg.var_cross);
    ic.h[1][1] = rng.cnormal(cfg.var_direct);
    ic.sigma2 = 1.0;
    ic.power = {p, p};
    out.push_back(ic);
  }
  return out;
}

std::string channel_to_json(const SisoIcInstance& ic) { return channel_json(ic).dump(2); }

SisoIcInstance channel_from_json(const std::string& text) {
  return channel_from(json::parse(text));
}

std::string strategy_to_json(const SisoStrategy& s) { return strategy_json(s).dump(2); }

SisoStrategy strategy_from_json(const std::string& text) {
  return strategy_from(json::parse(text));
}

std::string ensemble_to_json(const ChannelEnsembleConfig& cfg,
                             const std::vector<SisoIcInstance>& chans) {
  json j{{"tool", "igs"},
         {"version", version_string},
         {"config", config_json(cfg)},
         {"channels", json::array()}};
  for (const auto& ic : chans) j["channels"].push_back(channel_json(ic));
  return j.dump(2);
}

std::vector<SisoIcInstance> ensemble_from_json(const std::string& text) {
  const json j = json::parse(text);
  const json& arr = j.is_array() ? j : j.at("channels");
  if (!arr.is_array()) throw std::invalid_argument("expected a channels array");
  std::vector<SisoIcInstance> out;
  out.reserve(arr.size());
  for (const auto& c : arr) out.push_back(channel_from(c));
  return out;
}

ReferenceCase reference_case_strong() {
  ReferenceCase rc;
  rc.channel.h = {{{cplx(2.7388, -0.2498), cplx(0.9956, 1.8047)},
                   {cplx(0.6680, -1.6470), cplx(0.4760, 1.2706)}}};
  rc.channel.sigma2 = 1.0;
  rc.channel.power = {10.0, 10.0};
  // profile along the reference transceiver's rate split (bits 2.8673/1.8102)
  rc.alpha1 = 2.8673 / 4.6775;
  rc.alpha2 = 1.0 - rc.alpha1;
  rc.reference_sum_bits = 4.6775;
  return rc;
}

ReferenceCase reference_case_weak() {
  ReferenceCase rc;
  rc.channel = demo_channel_weak(0.0);
  rc.alpha1 = 0.5;
  rc.alpha2 = 0.5;
  rc.reference_sum_bits = 0.0;  // no pinned reference for this one
  return rc;
}

SisoIcInstance demo_channel_mixed(double snr_db) {
  SisoIcInstance ic;
  ic.h = {{{std::polar(2.0310, -0.6858), std::polar(1.4766, 2.6452)},
           {std::polar(0.7280, 1.9726), std::polar(0.9935, -0.6676)}}};
  ic.sigma2 = 1.0;
  const double p = std::pow(10.0, snr_db / 10.0);
  ic.power = {p, p};
  return ic;
}

SisoIcInstance demo_channel_weak(double snr_db) {
  SisoIcInstance ic;
  ic.h = {{{std::polar(4.0, 1.7730), std::polar(0.90, 1.6744)},
           {std::polar(0.80, 0.6249), std::polar(1.50, 2.1057)}}};
  ic.sigma2 = 1.0;
  const double p = std::pow(10.0, snr_db / 10.0);
  ic.power = {p, p};
  return ic;
}

RunStats run_region(const RegionConfig& cfg, std::ostream& csv) {
  json jcfg{{"channel", channel_json(cfg.channel)},
            {"alpha_points", cfg.alpha_points},
            {"methods",
             {{"proper", cfg.methods.proper},
              {"separate", cfg.methods.separate},
              {"joint", cfg.methods.joint},
              {"oracle", cfg.methods.oracle},
              {"tdma", cfg.methods.tdma}}}};
  header(csv, "region", jcfg);
  csv << "alpha1,alpha2,method,r1_bits,r2_bits,value_bits,bound_bits,r_star_bits,status\n";
  csv << std::setprecision(12);

  RunStats stats;
  const auto emit = [&](double a1, const char* method, const ParetoPoint& pt) {
    csv << a1 << ',' << 1.0 - a1 << ',' << method << ',' << pt.rates[0] / kLn2 << ','
        << pt.rates[1] / kLn2 << ',' << pt.value / kLn2 << ','
        << pt.diag.upper_bound / kLn2 << ',' << pt.diag.r_star / kLn2 << ',';
    // commas inside a status would break the row
    std::string st = pt.diag.status;
    std::replace(st.begin(), st.end(), ',', ';');
    csv << st << '\n';
    ++stats.rows;
    if (!point_ok(pt)) ++stats.solver_failures;
  };

  for (int i = 1; i <= cfg.alpha_points; ++i) {
    const double a1 = static_cast<double>(i) / (cfg.alpha_points + 1);
    const RateProfile pr(a1, 1.0 - a1);
    if (cfg.methods.proper)
      emit(a1, "proper",
           make_proper_point(cfg.channel, pr, cfg.opts.separate.proper_tol));
    if (cfg.methods.separate)
      emit(a1, "separate", improper_pareto_point(cfg.channel, pr, cfg.opts.separate));
    if (cfg.methods.joint)
      emit(a1, "joint", joint_pareto_point(cfg.channel, pr, cfg.opts.joint));
    if (cfg.methods.oracle)
      emit(a1, "oracle", grid_oracle(cfg.channel, pr, cfg.opts.grid));
    if (cfg.methods.tdma) emit(a1, "tdma", tdma_region_point(cfg.channel, pr));
  }
  return stats;
}

RatioSummary run_ratio(const RatioConfig& cfg, std::ostream& csv) {
  header(csv, "ratio", json{{"ensemble", config_json(cfg.ensemble)}});
  csv << "channel,oracle_bits,joint_bits,ratio,status\n";
  csv << std::setprecision(12);

  const auto chans = gen_channels(cfg.ensemble);
  struct Row {
    ParetoPoint oracle, joint;
  };
  std::vector<Row> rows(chans.size());
  parallel_channels(static_cast<int>(chans.size()), [&](int i) {
    try {
      rows[i].oracle = maxmin_point(chans[i], MaxminMethod::oracle, cfg.opts);
      rows[i].joint = maxmin_point(chans[i], MaxminMethod::joint, cfg.opts);
    } catch (const std::exception&) {
      // default-constructed points read as failed below
    }
  });

  RatioSummary sum;
  std::vector<double> ratios;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ParetoPoint& oracle = rows[i].oracle;
    const ParetoPoint& joint = rows[i].joint;
    const bool ok = point_ok(oracle) && point_ok(joint) && joint.value > 0.0;
    const double ratio = ok ? oracle.value / joint.value
                            : std::numeric_limits<double>::quiet_NaN();
    csv << i << ',' << oracle.value / kLn2 << ',' << joint.value / kLn2 << ',' << ratio
        << ',' << (ok ? "ok" : "failed") << '\n';
    if (ok)
      ratios.push_back(ratio);
    else
      ++sum.solver_failures;
  }
  sum.count = static_cast<int>(ratios.size());
  if (!ratios.empty()) {
    sum.mean = 0.0;
    for (double r : ratios) sum.mean += r;
    sum.mean /= ratios.size();
    sum.lo = *std::min_element(ratios.begin(), ratios.end());
    sum.hi = *std::max_element(ratios.begin(), ratios.end());
    sum.p05 = percentile(ratios, 0.05);
    sum.p95 = percentile(ratios, 0.95);
  }
  csv << "# summary "
      << json{{"count", sum.count},
              {"solver_failures", sum.solver_failures},
              {"mean", sum.mean},
              {"lo", sum.lo},
              {"hi", sum.hi},
              {"p05", sum.p05},
              {"p95", sum.p95}}
             .dump()
      << '\n';
  return sum;
}

RunStats run_maxmin(const MaxminConfig& cfg, std::ostream& csv) {
  json jcfg{{"ensemble", config_json(cfg.ensemble)},
            {"snr_db", cfg.snr_db},
            {"methods",
             {{"proper", cfg.methods.proper},
              {"separate", cfg.methods.separate},
              {"joint", cfg.methods.joint},
              {"oracle", cfg.methods.oracle},
              {"tdma", cfg.methods.tdma}}}};
  header(csv, "maxmin", jcfg);
  csv << "snr_db,method,mean_min_rate_bits,channels,failures\n";
  csv << std::setprecision(12);

  RunStats stats;
  struct Entry {
    MaxminMethod method;
    const char* name;
    bool on;
  };
  const Entry entries[] = {{MaxminMethod::proper, "proper", cfg.methods.proper},
                           {MaxminMethod::separate, "separate", cfg.methods.separate},
                           {MaxminMethod::joint, "joint", cfg.methods.joint},
                           {MaxminMethod::oracle, "oracle", cfg.methods.oracle},
                           {MaxminMethod::tdma, "tdma", cfg.methods.tdma}};

  for (double snr : cfg.snr_db) {
    ChannelEnsembleConfig ecfg = cfg.ensemble;
    ecfg.snr_db = snr;
    const auto chans = gen_channels(ecfg);
    for (const Entry& e : entries) {
      if (!e.on) continue;
      std::vector<ParetoPoint> pts(chans.size());
      parallel_channels(static_cast<int>(chans.size()), [&](int i) {
        try {
          pts[i] = maxmin_point(chans[i], e.method, cfg.opts);
        } catch (const std::exception&) {
        }
      });
      double acc = 0.0;
      int ok_count = 0, failures = 0;
      for (const ParetoPoint& pt : pts) {
        if (point_ok(pt)) {
          acc += std::min(pt.rates[0], pt.rates[1]);
          ++ok_count;
        } else {
          ++failures;
        }
      }
      const double mean = ok_count > 0 ? acc / ok_count / kLn2
                                       : std::numeric_limits<double>::quiet_NaN();
      csv << snr << ',' << e.name << ',' << mean << ',' << ok_count << ',' << failures
          << '\n';
      ++stats.rows;
      stats.solver_failures += failures;
    }
  }
  return stats;
}

TableCaseResult run_table_case(const TableCaseConfig& cfg) {
  TableCaseResult r;
  r.ref = reference_case_strong();
  const RateProfile pr(r.ref.alpha1, r.ref.alpha2);
  r.proper = make_proper_point(r.ref.channel, pr, cfg.separate.proper_tol);
  r.separate = improper_pareto_point(r.ref.channel, pr, cfg.separate);
  r.joint = joint_pareto_point(r.ref.channel, pr, cfg.joint);
  if (cfg.include_oracle) r.oracle = grid_oracle(r.ref.channel, pr, cfg.grid);
  const auto sum_bits = [](const ParetoPoint& pt) {
    return (pt.rates[0] + pt.rates[1]) / kLn2;
  };
  r.proper_sum_bits = sum_bits(r.proper);
  r.separate_sum_bits = sum_bits(r.separate);
  r.joint_sum_bits = sum_bits(r.joint);
  if (r.ref.reference_sum_bits > 0.0) {
    r.separate_gain_pct = 100.0 * (r.separate_sum_bits / r.ref.reference_sum_bits - 1.0);
    r.joint_gain_pct = 100.0 * (r.joint_sum_bits / r.ref.reference_sum_bits - 1.0);
  }
  return r;
}

std::string table_case_to_json(const TableCaseResult& r) {
  json j{{"reference",
          {{"channel", channel_json(r.ref.channel)},
           {"alpha", json::array({r.ref.alpha1, r.ref.alpha2})},
           {"sum_bits", r.ref.reference_sum_bits}}},
         {"proper", point_json(r.proper)},
         {"separate", point_json(r.separate)},
         {"joint", point_json(r.joint)},
         {"separate_gain_pct", r.separate_gain_pct},
         {"joint_gain_pct", r.joint_gain_pct}};
  if (r.oracle) j["oracle"] = point_json(*r.oracle);
  return j.dump(2);
}

std::string convert_report(const SisoStrategy& s, double power_budget) {
  const ValidityReport v = validate_strategy(s, power_budget);
  const Eigen::Matrix2d q = complex_to_real(s);
  const SisoStrategy back = real_to_complex(q);
  const double err = std::max(std::abs(back.c - s.c), std::abs(back.ct - s.ct));
  json j{{"strategy", strategy_json(s)},
         {"power_budget", power_budget},
         {"validity",
          {{"valid", v.valid},
           {"min_augmented_eig", v.min_augmented_eig},
           {"power_margin", v.power_margin},
           {"reason", v.reason}}},
         {"real_covariance",
          json::array({json::array({q(0, 0), q(0, 1)}), json::array({q(1, 0), q(1, 1)})})},
         {"real_trace", q.trace()},
         {"roundtrip", strategy_json(back)},
         {"roundtrip_error", err}};
  return j.dump(2);
}

std::string run_precode_demo(const PrecodeDemoConfig& cfg) {
  if (cfg.samples <= 0) throw std::invalid_argument("sample count must be positive");
  const ValidityReport v = validate_strategy(cfg.strategy, cfg.strategy.c);
  if (!v.valid)
    throw std::invalid_argument("strategy is not realizable: " + v.reason);
  const SignalStrategy ms = to_matrix_strategy(cfg.strategy);
  const WidelyLinearFactor w = augmented_sqrt(ms);
  Rng rng(cfg.seed);
  const Eigen::MatrixXcd x = sample_improper(w, cfg.samples, rng);
  double emp_c = 0.0;
  cplx emp_ct = 0.0;
  for (int i = 0; i < x.cols(); ++i) {
    emp_c += std::norm(x(0, i));
    emp_ct += x(0, i) * x(0, i);
  }
  emp_c /= x.cols();
  emp_ct /= static_cast<double>(x.cols());
  const Eigen::MatrixXd rr = real_representation(w);
  json j{{"strategy", strategy_json(cfg.strategy)},
         {"filters", {{"b1", to_json(w.b1(0, 0))}, {"b2", to_json(w.b2(0, 0))}}},
         {"real_representation",
          json::array(
              {json::array({rr(0, 0), rr(0, 1)}), json::array({rr(1, 0), rr(1, 1)})})},
         {"samples", cfg.samples},
         {"seed", cfg.seed},
         {"empirical", {{"c", emp_c}, {"ct", to_json(emp_ct)}}},
         {"abs_error",
          {{"c", std::abs(emp_c - cfg.strategy.c)},
           {"ct", std::abs(emp_ct - cfg.strategy.ct)}}}};
  return j.dump(2);
}

std::string cli_schema_json() {
  json j{
      {"tool", "igs"},
      {"version", version_string},
      {"units", "bits unless a field says otherwise"},
      {"subcommands",
       {{"region",
         {{"description",
           "rate-profile sweep of one channel; CSV rows per (profile, method)"},
          {"columns",
           {"alpha1", "alpha2", "method", "r1_bits", "r2_bits", "value_bits",
            "bound_bits", "r_star_bits", "status"}}}},
        {"ratio",
         {{"description",
           "grid-search versus relax-and-randomize egalitarian values over an ensemble"},
          {"columns", {"channel", "oracle_bits", "joint_bits", "ratio", "status"}},
          {"trailer", "# summary {count, solver_failures, mean, lo, hi, p05, p95}"}}},
        {"maxmin",
         {{"description", "ensemble-mean worst-user rate across an SNR sweep"},
          {"columns", {"snr_db", "method", "mean_min_rate_bits", "channels", "failures"}}}},
        {"table",
         {{"description", "the pinned strong-interference case end to end, JSON"}}},
        {"convert",
         {{"description",
           "complex strategy to stacked-real covariance and back, JSON report"}}},
        {"gen-channels",
         {{"description", "write an iid Rayleigh ensemble as JSON"},
          {"complex_encoding", {{"re", "real part"}, {"im", "imaginary part"}}}}},
        {"precode-demo",
         {{"description",
           "factor one strategy, draw samples, report empirical moments, JSON"}}}}},
      {"csv",
       {{"comment_prefix", "#"},
        {"header_lines", {"tool/version/command", "config echo", "units"}}}}};
  return j.dump(2);
}

}  // namespace igs
