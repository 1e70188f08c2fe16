#include "igs/pareto_joint.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "igs/pareto_separate.hpp"
#include "igs/rate_engine.hpp"

namespace igs {

SdrData build_sdr(const SisoIcInstance& ic, const RateProfile& profile) {
  SdrData s;
  s.profile = profile;
  s.power = ic.power;
  s.sigma2 = ic.sigma2;
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2d a, b;
    Eigen::Vector2cd f, g;
    for (int j = 0; j < 2; ++j) {
      const cplx hkj = ic.h[k][j];
      a[j] = std::norm(hkj);
      b[j] = j == k ? 0.0 : a[j];
      f[j] = std::conj(hkj * hkj);
      g[j] = j == k ? cplx(0.0) : f[j];
    }
    s.a[k] = a;
    s.b[k] = b;
    s.f[k] = f;
    s.g[k] = g;
    Eigen::Vector3d ua, ub;
    ua << ic.sigma2, a[0], a[1];
    ub << ic.sigma2, b[0], b[1];
    s.A[k] = ua * ua.transpose();
    s.B[k] = ub * ub.transpose();
    s.F[k] = f * f.adjoint();
    s.G[k] = g * g.adjoint();
    s.K[k].setZero();
    s.K[k](0, k + 1) = s.K[k](k + 1, 0) = 0.5;
    s.Ehat[k].setZero();
    s.Ehat[k](k + 1, k + 1) = 1.0;
    s.E[k].setZero();
    s.E[k](k, k) = 1.0;
  }
  return s;
}

SdrSolution solve_sdr(const SdrData& sdr, const SdrSolveOptions& opts) {
  SdrSolution sol;
  double hi = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double snr = sdr.a[k][k] * sdr.power[k] / sdr.sigma2;
    hi = std::max(hi, std::log1p(snr) / sdr.profile[k]);
  }
  int undecided = 0;
  double frontier = std::numeric_limits<double>::infinity();
  const auto oracle = [&](double r) {
    SdpVerdict v = sdp_feasible(sdr, r, opts.sdp_tol);
    if (v.status == SdpStatus::undecided) ++undecided;
    if (v.status == SdpStatus::infeasible) frontier = std::min(frontier, r);
    return v;
  };
  const auto res = bisect_sup(oracle, 0.0, hi, opts.bisect_tol);
  sol.probes = res.iterations;
  sol.undecided = undecided;
  if (res.best && res.best->witness) {
    sol.C = res.best->witness->C;
    sol.Q = res.best->witness->Q;
    // the bound must sit on the certified-infeasible side of the bracket;
    // undecided probes steer the search but never define the frontier, and
    // with no infeasible probe at all the single-user cap still applies
    sol.bound = std::isfinite(frontier) ? frontier : hi;
    sol.value = res.value;
    sol.ok = true;
  }
  return sol;
}

namespace {

bool rank1_from_eigs(const Eigen::VectorXd& eigs_ascending, double tol) {
  const auto n = eigs_ascending.size();
  const double top = eigs_ascending[n - 1];
  const double second = eigs_ascending[n - 2];
  if (top <= 0.0) return second <= 0.0;
  return second <= tol * top;
}

}  // namespace

bool is_rank1(const Eigen::Matrix3d& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
  return rank1_from_eigs(es.eigenvalues(), tol);
}

bool is_rank1(const Eigen::Matrix2cd& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m, Eigen::EigenvaluesOnly);
  return rank1_from_eigs(es.eigenvalues(), tol);
}

RandomizeResult randomize(const Eigen::Matrix3d& C, const Eigen::Matrix2cd& Q,
                          const SdrData& sdr, int trials, const Rng& rng) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> ec(C);
  const Eigen::Matrix3d sc =
      ec.eigenvectors() * ec.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eq(Q);
  const Eigen::Matrix2cd sq =
      eq.eigenvectors() * eq.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  const double s2 = sdr.sigma2;
  const auto project = [&](Eigen::Vector2d c, Eigen::Vector2cd q) {
    for (int k = 0; k < 2; ++k) {
      c[k] = std::clamp(c[k], 0.0, sdr.power[k]);
      const double m = std::abs(q[k]);
      if (m > c[k]) q[k] *= (m > 0.0 ? c[k] / m : 0.0);
    }
    return std::make_pair(c, q);
  };
  const auto value_of = [&](const Eigen::Vector2d& c, const Eigen::Vector2cd& q) {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 2; ++k) {
      const double ny = [&] {
        const double m = s2 + sdr.a[k].dot(c);
        return m * m - std::norm(sdr.f[k].dot(q));
      }();
      const double ns = [&] {
        const double m = s2 + sdr.b[k].dot(c);
        return m * m - std::norm(sdr.g[k].dot(q));
      }();
      if (!(ny > 0.0) || !(ns > 0.0)) return -std::numeric_limits<double>::infinity();
      worst = std::min(worst, 0.5 * std::log(ny / ns) / sdr.profile[k]);
    }
    return worst;
  };

  RandomizeResult best;
  const auto consider = [&](const Eigen::Vector2d& c, const Eigen::Vector2cd& q,
                            int trial) {
    const auto [cp, qp] = project(c, q);
    const double v = value_of(cp, qp);
    if (v > best.value) {
      best.value = v;
      best.c = cp;
      best.q = qp;
      best.best_trial = trial;
    }
  };

  {
    // trial 0: principal components, oriented so the homogenizing entry is
    // positive
    Eigen::Vector3d v = ec.eigenvectors().col(2) *
                        std::sqrt(std::max(ec.eigenvalues()[2], 0.0));
    if (v[0] < 0.0) v = -v;
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    if (std::abs(v[0]) > 1e-12) c = Eigen::Vector2d(v[1] / v[0], v[2] / v[0]);
    const Eigen::Vector2cd q = eq.eigenvectors().col(1) *
                               std::sqrt(std::max(eq.eigenvalues()[1], 0.0));
    consider(c, q, 0);
  }

  for (int l = 1; l <= trials; ++l) {
    Rng tr = rng.split(static_cast<std::uint64_t>(l));
    Eigen::Vector3d z;
    double t = 0.0;
    bool ok = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      Eigen::Vector3d w;
      for (int i = 0; i < 3; ++i) w[i] = tr.normal();
      z = sc * w;
      t = z[0];
      if (std::abs(t) > 1e-12) {
        ok = true;
        break;
      }
      ++best.redraws;
    }
    Eigen::Vector2cd beta;
    for (int i = 0; i < 2; ++i) beta[i] = tr.cnormal(1.0);
    if (!ok) continue;
    const Eigen::Vector2d c(z[1] / t, z[2] / t);
    const Eigen::Vector2cd q = (sq * beta) / t;
    consider(c, q, l);
  }
  return best;
}

ParetoPoint joint_pareto_point(const SisoIcInstance& ic, const RateProfile& profile,
                               const JointOptions& opts) {
  const SdrData sdr = build_sdr(ic, profile);
  const SdrSolution sol = solve_sdr(sdr, opts.sdr);

  ParetoPoint pt;
  pt.diag.seed = opts.seed;
  pt.diag.upper_bound = sol.bound;
  pt.diag.bisect_value = sol.value;
  pt.diag.undecided_probes = sol.undecided;
  if (!sol.ok) {
    pt.diag.status = "relaxation stage failed";
    return pt;
  }
  pt.diag.rank1_c = is_rank1(sol.C);
  pt.diag.rank1_q = is_rank1(sol.Q);

  const RandomizeResult rr =
      randomize(sol.C, sol.Q, sdr, opts.trials, Rng(opts.seed));
  pt.diag.trials = opts.trials;
  pt.diag.best_trial = rr.best_trial;
  pt.diag.redraws = rr.redraws;
  if (!(rr.value > -std::numeric_limits<double>::infinity())) {
    pt.diag.status = "randomization produced no usable strategy";
    return pt;
  }
  pt.strategy = {SisoStrategy{rr.c[0], rr.q[0]}, SisoStrategy{rr.c[1], rr.q[1]}};
  for (int k = 0; k < 2; ++k) pt.rates[k] = siso_rate(ic, pt.strategy, k).total;
  pt.value = std::min(pt.rates[0] / profile[0], pt.rates[1] / profile[1]);

  // power-only guard: the proper point is always feasible for the joint
  // problem, so rounding a loose relaxation must never return less; when it
  // does, fall back and record best_trial = -1
  const ProperSolution prop = proper_pareto_point(ic, profile);
  if (prop.ok) {
    pt.diag.r_star = prop.r_star;
    const std::array<SisoStrategy, 2> guard{SisoStrategy{prop.c[0], cplx(0.0)},
                                            SisoStrategy{prop.c[1], cplx(0.0)}};
    std::array<double, 2> grates;
    for (int k = 0; k < 2; ++k) grates[k] = siso_rate(ic, guard, k).total;
    const double gvalue = std::min(grates[0] / profile[0], grates[1] / profile[1]);
    if (gvalue > pt.value) {
      pt.strategy = guard;
      pt.rates = grates;
      pt.value = gvalue;
      pt.diag.best_trial = -1;
    }
  }

  pt.diag.ray_deviation = std::max(std::abs(pt.rates[0] - profile[0] * pt.value),
                                   std::abs(pt.rates[1] - profile[1] * pt.value));
  pt.diag.status = "ok";
  return pt;
}

}  // namespace igs
