#include "igs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "igs/pareto_joint.hpp"
#include "igs/pareto_separate.hpp"
#include "igs/rate_engine.hpp"

namespace igs {
namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace

ParetoPoint grid_oracle(const SisoIcInstance& ic, const RateProfile& profile,
                        const GridSpec& spec) {
  const double n11 = std::norm(ic.h[0][0]);
  const double n12 = std::norm(ic.h[0][1]);
  const double n21 = std::norm(ic.h[1][0]);
  const double n22 = std::norm(ic.h[1][1]);
  const cplx s11 = ic.h[0][0] * ic.h[0][0];
  const cplx s12 = ic.h[0][1] * ic.h[0][1];
  const cplx s21 = ic.h[1][0] * ic.h[1][0];
  const cplx s22 = ic.h[1][1] * ic.h[1][1];
  const double s2 = ic.sigma2;

  std::size_t evals = 0;
  const auto eval = [&](double c1, double c2, double t1, const cplx& ct2) {
    ++evals;
    const cplx cty1 = s11 * t1 + s12 * ct2;
    const cplx cts1 = s12 * ct2;
    const double cy1 = s2 + n11 * c1 + n12 * c2;
    const double cs1 = s2 + n12 * c2;
    const double ny1 = cy1 * cy1 - std::norm(cty1);
    const double ns1 = cs1 * cs1 - std::norm(cts1);
    const cplx cty2 = s21 * t1 + s22 * ct2;
    const cplx cts2 = s21 * t1;
    const double cy2 = s2 + n21 * c1 + n22 * c2;
    const double cs2 = s2 + n21 * c1;
    const double ny2 = cy2 * cy2 - std::norm(cty2);
    const double ns2 = cs2 * cs2 - std::norm(cts2);
    if (!(ny1 > 0.0) || !(ns1 > 0.0) || !(ny2 > 0.0) || !(ns2 > 0.0))
      return -std::numeric_limits<double>::infinity();
    const double r1 = 0.5 * std::log(ny1 / ns1);
    const double r2 = 0.5 * std::log(ny2 / ns2);
    return std::min(r1 / profile[0], r2 / profile[1]);
  };

  struct Cand {
    double c1 = 0, c2 = 0, m1 = 0, m2 = 0, theta = 0;
  };
  Cand best;
  double best_v = -std::numeric_limits<double>::infinity();
  const auto consider = [&](double c1, double c2, double m1, double m2, double theta) {
    const double v = eval(c1, c2, m1 * c1, std::polar(m2 * c2, theta));
    if (v > best_v) {
      best_v = v;
      best = {c1, c2, m1, m2, theta};
    }
  };

  const double dtheta = 2.0 * M_PI / spec.n_theta;
  std::vector<double> thetas(spec.n_theta);
  for (int i = 0; i < spec.n_theta; ++i) thetas[i] = -M_PI + dtheta * (i + 1);

  const auto sweep = [&](const std::vector<double>& c1s, const std::vector<double>& c2s,
                         const std::vector<double>& m1s, const std::vector<double>& m2s,
                         const std::vector<double>& ths) {
    for (double c1 : c1s)
      for (double c2 : c2s)
        for (double m1 : m1s)
          for (double m2 : m2s) {
            // the relative angle is idle unless both pseudo parts are live
            if (m1 * c1 == 0.0 || m2 * c2 == 0.0) {
              consider(c1, c2, m1, m2, 0.0);
            } else {
              for (double th : ths) consider(c1, c2, m1, m2, th);
            }
          }
  };

  sweep(linspace(0.0, ic.power[0], spec.n_power), linspace(0.0, ic.power[1], spec.n_power),
        linspace(0.0, 1.0, spec.n_mag), linspace(0.0, 1.0, spec.n_mag), thetas);

  double half_c1 = ic.power[0] / (spec.n_power - 1);
  double half_c2 = ic.power[1] / (spec.n_power - 1);
  double half_m = 1.0 / (spec.n_mag - 1);
  double half_th = dtheta;
  for (int round = 0; round < spec.refine; ++round) {
    const auto window = [](double center, double half, double lo, double hi) {
      auto v = linspace(center - half, center + half, 5);
      for (double& x : v) x = std::clamp(x, lo, hi);
      return v;
    };
    auto thv = linspace(best.theta - half_th, best.theta + half_th, 5);
    for (double& t : thv) t = std::remainder(t, 2.0 * M_PI);
    sweep(window(best.c1, half_c1, 0.0, ic.power[0]),
          window(best.c2, half_c2, 0.0, ic.power[1]),
          window(best.m1, half_m, 0.0, 1.0), window(best.m2, half_m, 0.0, 1.0), thv);
    half_c1 *= 0.25;
    half_c2 *= 0.25;
    half_m *= 0.25;
    half_th *= 0.25;
  }

  ParetoPoint pt;
  pt.strategy = {SisoStrategy{best.c1, cplx(best.m1 * best.c1, 0.0)},
                 SisoStrategy{best.c2, std::polar(best.m2 * best.c2, best.theta)}};
  for (int k = 0; k < 2; ++k) pt.rates[k] = siso_rate(ic, pt.strategy, k).total;
  pt.value = std::min(pt.rates[0] / profile[0], pt.rates[1] / profile[1]);
  pt.diag.evaluations = evals;
  pt.diag.ray_deviation = std::max(std::abs(pt.rates[0] - profile[0] * pt.value),
                                   std::abs(pt.rates[1] - profile[1] * pt.value));
  pt.diag.status = "ok";
  return pt;
}

double tdma_maxmin(const SisoIcInstance& ic) {
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k) {
    const double snr = std::norm(ic.h[k][k]) * ic.power[k] / ic.sigma2;
    worst = std::min(worst, 0.5 * std::log1p(snr));
  }
  return worst;
}

ParetoPoint maxmin_point(const SisoIcInstance& ic, MaxminMethod method,
                         const MaxminOptions& opts) {
  const RateProfile half({0.5, 0.5});
  switch (method) {
    case MaxminMethod::proper: {
      const ProperSolution ps = proper_pareto_point(ic, half);
      ParetoPoint pt;
      pt.strategy = {SisoStrategy{ps.c[0], 0.0}, SisoStrategy{ps.c[1], 0.0}};
      for (int k = 0; k < 2; ++k) pt.rates[k] = siso_rate(ic, pt.strategy, k).total;
      pt.value = std::min(pt.rates[0], pt.rates[1]) / 0.5;
      pt.diag.r_star = ps.r_star;
      pt.diag.status = ps.ok ? "ok" : "power stage failed";
      return pt;
    }
    case MaxminMethod::separate:
      return improper_pareto_point(ic, half, opts.separate);
    case MaxminMethod::joint:
      return joint_pareto_point(ic, half, opts.joint);
    case MaxminMethod::oracle:
      return grid_oracle(ic, half, opts.grid);
    case MaxminMethod::tdma: {
      // time sharing: each user transmits alone half the time at its own
      // power cap, so the reported rates are not produced by the flat
      // strategy stored here
      ParetoPoint pt;
      pt.strategy = {SisoStrategy{ic.power[0], 0.0}, SisoStrategy{ic.power[1], 0.0}};
      for (int k = 0; k < 2; ++k) {
        const double snr = std::norm(ic.h[k][k]) * ic.power[k] / ic.sigma2;
        pt.rates[k] = 0.5 * std::log1p(snr);
      }
      pt.value = std::min(pt.rates[0], pt.rates[1]) / 0.5;
      pt.diag.status = "tdma";
      return pt;
    }
  }
  ParetoPoint pt;
  pt.diag.status = "unknown method";
  return pt;
}

}  // namespace igs
