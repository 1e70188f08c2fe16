#include "igs/pareto_separate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "igs/rate_engine.hpp"

namespace igs {
namespace {

constexpr double kDegenerateGain = 1e-12;  // on |h|, i.e. 1e-24 on |h|^2

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;  // represent on (-pi, pi]
  return a;
}

bool same_angle(double a, double b, double tol) {
  return std::abs(std::remainder(a - b, 2.0 * M_PI)) <= tol;
}

}  // namespace

ProperSolution proper_pareto_point(const SisoIcInstance& ic, const RateProfile& profile,
                                   double tol) {
  const double n11 = std::norm(ic.h[0][0]);
  const double n12 = std::norm(ic.h[0][1]);
  const double n21 = std::norm(ic.h[1][0]);
  const double n22 = std::norm(ic.h[1][1]);
  const Box2 box{ic.power[0], ic.power[1]};

  const auto oracle = [&](double r) {
    // |h_kk|^2 c_k >= (sigma2 + |h_k,other|^2 c_other)(e^{alpha_k r} - 1)
    const double g1 = std::expm1(profile[0] * r);
    const double g2 = std::expm1(profile[1] * r);
    std::vector<AffineIneq> cons{
        {-n11, n12 * g1, ic.sigma2 * g1},
        {n21 * g2, -n22, ic.sigma2 * g2},
    };
    return lp2_feasible(cons, box);
  };

  const double hi = profile_rate_upper_bound(ic, profile);
  const auto res = bisect_sup(oracle, 0.0, hi, tol);

  ProperSolution ps;
  ps.probes = res.iterations;
  if (res.best && res.best->witness) {
    ps.r_star = res.value;
    ps.c = *res.best->witness;
    ps.ok = true;
  }
  return ps;
}

PseudoCoeffs pseudo_coeffs(const SisoIcInstance& ic, const Eigen::Vector2d& c_star,
                           double r_star, double rate_sum, const RateProfile& profile) {
  PseudoCoeffs pc;
  for (int k = 0; k < 2; ++k) {
    const int o = 1 - k;
    pc.cy[k] = ic.sigma2 + std::norm(ic.h[k][0]) * c_star[0] +
               std::norm(ic.h[k][1]) * c_star[1];
    pc.cs[k] = ic.sigma2 + std::norm(ic.h[k][o]) * c_star[o];
  }
  for (int k = 0; k < 2; ++k) {
    const int o = 1 - k;
    const double cross2 = std::norm(ic.h[k][o]);
    const double cross4 = cross2 * cross2;
    const double expo = 2.0 * profile[k] * (rate_sum - r_star);
    const double beta = std::exp(expo);
    const double inv_beta = std::exp(-expo);
    (k == 0 ? pc.beta1 : pc.beta2) = beta;
    if (cross2 < kDegenerateGain * kDegenerateGain) {
      pc.degenerate = true;
      continue;
    }
    const double cs2 = pc.cs[k] * pc.cs[k];
    const double cy2 = pc.cy[k] * pc.cy[k];
    const double a = cs2 * inv_beta / (cy2 * cross4);
    const double b = -std::expm1(-expo) * cs2 / cross4;  // (1 - 1/beta) cs^2 / |h|^4
    if (k == 0) {
      pc.a1 = a;
      pc.b1 = b;
    } else {
      pc.a2 = a;
      pc.b2 = b;
    }
  }
  return pc;
}

std::vector<std::pair<double, double>> solve_reduced_theta(double d1, double d2,
                                                           double d3, double d4,
                                                           double omega, double m_max) {
  std::vector<std::pair<double, double>> out;
  if (!(m_max > 0.0)) return out;
  const double cw = std::cos(omega);
  const double sw2 = std::sin(omega) * std::sin(omega);
  // eliminating eta from { m cos(eta) = -(d1 m^2 + d2),
  //                        m cos(eta + omega) = -(d3 m^2 + d4) }
  // leaves a quadratic in z = m^2
  const double e1 = d1 * d1 + d3 * d3 - 2.0 * d1 * d3 * cw;
  const double e2 =
      2.0 * (d1 * d2 + d3 * d4) - 2.0 * (d1 * d4 + d2 * d3) * cw - sw2;
  const double e3 = d2 * d2 + d4 * d4 - 2.0 * d2 * d4 * cw;

  std::vector<double> zs;
  const double scale = std::max({std::abs(e1), std::abs(e2), std::abs(e3)});
  if (!(scale > 0.0)) return out;
  if (std::abs(e1) <= 1e-14 * scale) {
    if (std::abs(e2) > 1e-14 * scale) zs.push_back(-e3 / e2);
  } else {
    double disc = e2 * e2 - 4.0 * e1 * e3;
    const double dscale = std::max(e2 * e2, std::abs(4.0 * e1 * e3));
    if (disc >= -1e-12 * dscale) {
      disc = std::max(disc, 0.0);
      const double root = std::sqrt(disc);
      const double qq = -0.5 * (e2 + std::copysign(root, e2));
      if (qq != 0.0) {
        zs.push_back(qq / e1);
        zs.push_back(e3 / qq);
      } else {
        zs.push_back(0.0);
      }
    }
  }

  const double zmax = m_max * m_max;
  const double ztol = 1e-9 * std::max(1.0, zmax);
  for (double z : zs) {
    if (!std::isfinite(z) || z < -ztol || z > zmax + ztol) continue;
    z = std::clamp(z, 0.0, zmax);
    const double m = std::sqrt(z);
    if (m <= 1e-12) continue;  // zero magnitude carries no angle information
    const double u = -(d1 * z + d2) / m;
    if (std::abs(u) > 1.0 + 1e-9) continue;
    const double eta0 = std::acos(std::clamp(u, -1.0, 1.0));
    for (const double eta : {eta0, -eta0}) {
      // the elimination was one-directional; keep branches that actually
      // satisfy the second equation
      const double r2 = m * std::cos(eta + omega) + d3 * z + d4;
      const double r2s = m + std::abs(d3) * z + std::abs(d4) + 1.0;
      if (std::abs(r2) > 1e-8 * r2s) continue;
      bool dup = false;
      for (const auto& [pe, pm] : out)
        if (same_angle(pe, eta, 1e-9) && std::abs(pm - m) <= 1e-9 * (1.0 + m))
          dup = true;
      if (!dup) out.emplace_back(eta, m);
    }
  }
  return out;
}

namespace {

// worst normalized residual of the two stationary equalities at a concrete
// (magnitude pair, angle)
double stationary_residual(const SisoIcInstance& ic, const PseudoCoeffs& pc, double x1,
                           double t, double theta) {
  const cplx rot = std::polar(1.0, theta);
  const cplx u1 = ic.h[0][0] * ic.h[0][0] * x1 + ic.h[0][1] * ic.h[0][1] * t * rot;
  const cplx u2 = ic.h[1][0] * ic.h[1][0] * x1 + ic.h[1][1] * ic.h[1][1] * t * rot;
  const double lhs1 = pc.a1 * std::norm(u1) + pc.b1;
  const double rhs1 = t * t;
  const double lhs2 = pc.a2 * std::norm(u2) + pc.b2;
  const double rhs2 = x1 * x1;
  const double r1 = std::abs(lhs1 - rhs1) / (1.0 + std::abs(lhs1) + std::abs(rhs1));
  const double r2 = std::abs(lhs2 - rhs2) / (1.0 + std::abs(lhs2) + std::abs(rhs2));
  return std::max(r1, r2);
}

}  // namespace

ThetaCandidateSet theta_candidates(const SisoIcInstance& ic, const PseudoCoeffs& pc,
                                   const Eigen::Vector2d& c_star) {
  ThetaCandidateSet out;
  const double phi11 = std::arg(ic.h[0][0]);
  const double phi12 = std::arg(ic.h[0][1]);
  const double phi21 = std::arg(ic.h[1][0]);
  const double phi22 = std::arg(ic.h[1][1]);

  const auto add = [&](double theta, int source, double companion, double residual) {
    theta = wrap_angle(theta);
    for (const auto& c : out.items)
      if (same_angle(c.theta, theta, 1e-9)) return;
    out.items.push_back({theta, source, companion, residual});
  };

  // antiphase alignments of the two numerators
  add(M_PI + 2.0 * (phi11 - phi12), theta_closed_form, 0.0, 0.0);
  add(M_PI + 2.0 * (phi21 - phi22), theta_closed_form, 0.0, 0.0);

  if (pc.degenerate) {
    out.fallback_grid = true;
    return out;
  }

  const double n11 = std::norm(ic.h[0][0]);
  const double n12 = std::norm(ic.h[0][1]);
  const double n21 = std::norm(ic.h[1][0]);
  const double n22 = std::norm(ic.h[1][1]);
  const double omega = 2.0 * (phi11 + phi22 - phi12 - phi21);
  const double gmin = kDegenerateGain * kDegenerateGain;

  // boundary case A: user-1 pseudo magnitude frozen at its covariance,
  // user-2 magnitude m free
  if (n11 > gmin && n22 > gmin && c_star[0] > 1e-12) {
    const double x = c_star[0];
    const double den1 = 2.0 * pc.a1 * n11 * n12 * x;
    const double d1 = (pc.a1 * n12 * n12 - 1.0) / den1;
    const double d2 = (pc.a1 * n11 * n11 * x * x + pc.b1) / den1;
    const double d3 = n22 / (2.0 * n21 * x);
    const double den2 = 2.0 * pc.a2 * n21 * n22 * x;
    const double d4 = ((pc.a2 * n21 * n21 - 1.0) * x * x + pc.b2) / den2;
    for (const auto& [eta, m] : solve_reduced_theta(d1, d2, d3, d4, omega, c_star[1])) {
      const double theta = eta - 2.0 * (phi12 - phi11);
      add(theta, theta_set_a, m,
          stationary_residual(ic, pc, x, m, wrap_angle(theta)));
    }
  } else {
    out.fallback_grid = true;
  }

  // boundary case B: user-2 pseudo magnitude frozen, user-1 magnitude m free
  if (n11 > gmin && n22 > gmin && c_star[1] > 1e-12) {
    const double y = c_star[1];
    const double den1 = 2.0 * pc.a2 * n21 * n22 * y;
    const double d1 = (pc.a2 * n21 * n21 - 1.0) / den1;
    const double d2 = (pc.a2 * n22 * n22 * y * y + pc.b2) / den1;
    const double d3 = n11 / (2.0 * n12 * y);
    const double den2 = 2.0 * pc.a1 * n11 * n12 * y;
    const double d4 = ((pc.a1 * n12 * n12 - 1.0) * y * y + pc.b1) / den2;
    for (const auto& [eta, m] : solve_reduced_theta(d1, d2, d3, d4, -omega, c_star[0])) {
      const double theta = eta - 2.0 * (phi22 - phi21);
      add(theta, theta_set_b, m,
          stationary_residual(ic, pc, m, y, wrap_angle(theta)));
    }
  } else {
    out.fallback_grid = true;
  }

  return out;
}

namespace {

struct StageWitness {
  double x1 = 0.0, t = 0.0, theta = 0.0;
  double slack = 0.0;  // negative max cone residual at the winner
  std::vector<ThetaCandidate> audit;
};

ParetoPoint assemble(const SisoIcInstance& ic, const RateProfile& profile,
                     const std::array<SisoStrategy, 2>& strat) {
  ParetoPoint pt;
  pt.strategy = strat;
  for (int k = 0; k < 2; ++k) pt.rates[k] = siso_rate(ic, strat, k).total;
  pt.value = std::min(pt.rates[0] / profile[0], pt.rates[1] / profile[1]);
  pt.diag.ray_deviation = std::max(std::abs(pt.rates[0] - profile[0] * pt.value),
                                   std::abs(pt.rates[1] - profile[1] * pt.value));
  return pt;
}

}  // namespace

ParetoPoint improper_pareto_point(const SisoIcInstance& ic, const RateProfile& profile,
                                  const SeparateOptions& opts) {
  const ProperSolution ps = proper_pareto_point(ic, profile, opts.proper_tol);
  if (!ps.ok) {
    ParetoPoint pt;
    pt.diag.status = "power stage failed";
    return pt;
  }

  const double cross1 = std::abs(ic.h[0][1]);
  const double cross2 = std::abs(ic.h[1][0]);
  if (std::min(cross1, cross2) < kDegenerateGain) {
    // without mutual interference the pseudo-covariances cannot help; the
    // power-only point is already optimal for this design
    ParetoPoint pt = assemble(
        ic, profile,
        {SisoStrategy{ps.c[0], 0.0}, SisoStrategy{ps.c[1], 0.0}});
    pt.diag.r_star = ps.r_star;
    pt.diag.upper_bound = ps.r_star;
    pt.diag.bisect_value = ps.r_star;
    pt.diag.status = "ok";
    return pt;
  }

  // safe upper bracket: each user's correction is capped by its noise floor,
  // and the cone offsets b_k must stay below the boxed magnitudes
  const PseudoCoeffs base = pseudo_coeffs(ic, ps.c, ps.r_star, ps.r_star, profile);
  double hi = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k) {
    const int o = 1 - k;
    const double proper_k = std::log(base.cy[k] / base.cs[k]);
    const double s4 = ic.sigma2 * ic.sigma2;
    const double cs2 = base.cs[k] * base.cs[k];
    double cap = (proper_k + 0.5 * std::log(cs2 / s4)) / profile[k];
    const double cross4 = std::norm(ic.h[k][o]) * std::norm(ic.h[k][o]);
    const double binf = cs2 / cross4;
    const double bound2 = ps.c[o] * ps.c[o];
    if (bound2 < binf) {
      const double cap_b =
          ps.r_star + 0.5 * std::log(binf / (binf - bound2)) / profile[k];
      cap = std::min(cap, cap_b);
    }
    hi = std::min(hi, cap);
  }
  hi = std::max(hi, ps.r_star);

  const auto probe = [&](double r) {
    const PseudoCoeffs pc = pseudo_coeffs(ic, ps.c, ps.r_star, r, profile);
    Socp2Data sd;
    sd.a1 = pc.a1;
    sd.b1 = pc.b1;
    sd.a2 = pc.a2;
    sd.b2 = pc.b2;
    sd.h11s = ic.h[0][0] * ic.h[0][0];
    sd.h12s = ic.h[0][1] * ic.h[0][1];
    sd.h21s = ic.h[1][0] * ic.h[1][0];
    sd.h22s = ic.h[1][1] * ic.h[1][1];
    sd.x_max = ps.c[0];
    sd.t_max = ps.c[1];

    ThetaCandidateSet cand = theta_candidates(ic, pc, ps.c);
    if (cand.fallback_grid) {
      const int n = std::max(opts.grid_fallback, 4);
      for (int i = 0; i < n; ++i) {
        const double theta = -M_PI + 2.0 * M_PI * (i + 1) / n;
        bool dup = false;
        for (const auto& c : cand.items)
          if (same_angle(c.theta, theta, 1e-9)) dup = true;
        if (!dup) cand.items.push_back({theta, theta_grid, 0.0, 0.0});
      }
    }

    FeasibilityVerdict<StageWitness> verdict;
    StageWitness best;
    best.slack = -std::numeric_limits<double>::infinity();
    for (const auto& c : cand.items) {
      const auto v = socp2_feasible(sd, c.theta, opts.socp_tol);
      if (-v.max_violation > best.slack) {
        best.slack = -v.max_violation;
        best.theta = c.theta;
        if (v.witness) {
          best.x1 = (*v.witness)[0];
          best.t = (*v.witness)[1];
        }
      }
    }
    verdict.max_violation = -best.slack;
    verdict.feasible = best.slack >= -opts.socp_tol;
    if (verdict.feasible) {
      best.audit = std::move(cand.items);
      verdict.witness = std::move(best);
    }
    return verdict;
  };

  const auto res = bisect_sup(probe, ps.r_star, hi, opts.rate_tol);

  ParetoPoint pt;
  if (res.empty || !res.best || !res.best->witness) {
    // the lower bracket is structurally feasible, so this is a solver fault
    pt = assemble(ic, profile,
                  {SisoStrategy{ps.c[0], 0.0}, SisoStrategy{ps.c[1], 0.0}});
    pt.diag.r_star = ps.r_star;
    pt.diag.upper_bound = hi;
    pt.diag.bisect_value = ps.r_star;
    pt.diag.status = "pseudo stage failed; returned the power-only point";
    return pt;
  }

  const StageWitness& w = *res.best->witness;
  pt = assemble(ic, profile,
                {SisoStrategy{ps.c[0], cplx(w.x1, 0.0)},
                 SisoStrategy{ps.c[1], std::polar(w.t, w.theta)}});
  pt.diag.r_star = ps.r_star;
  pt.diag.upper_bound = hi;
  pt.diag.evaluations = res.iterations;
  pt.diag.bisect_value = res.value;
  pt.diag.winning_theta = w.theta;
  pt.diag.theta_slack = w.slack;
  pt.diag.theta_audit = w.audit;
  pt.diag.status = "ok";
  return pt;
}

}  // namespace igs
