#include "igs/conic_solvers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace igs {
namespace {

constexpr double kLpSlackTol = 1e-12;

double ineq_scale(const AffineIneq& c, const Box2& box) {
  return std::abs(c.p) * std::max(1.0, box.x_max) +
         std::abs(c.q) * std::max(1.0, box.y_max) + std::abs(c.r) + 1.0;
}

}  // namespace

FeasibilityVerdict<Eigen::Vector2d> lp2_feasible(const std::vector<AffineIneq>& cons,
                                                 const Box2& box) {
  std::vector<AffineIneq> all = cons;
  all.push_back({-1.0, 0.0, 0.0});         // x >= 0
  all.push_back({1.0, 0.0, -box.x_max});   // x <= x_max
  all.push_back({0.0, -1.0, 0.0});         // y >= 0
  all.push_back({0.0, 1.0, -box.y_max});   // y <= y_max

  std::vector<double> scales(all.size());
  for (size_t i = 0; i < all.size(); ++i) scales[i] = ineq_scale(all[i], box);

  FeasibilityVerdict<Eigen::Vector2d> best;
  Eigen::Vector2d best_point = Eigen::Vector2d::Zero();
  bool have_point = false;

  auto consider = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < all.size(); ++i)
      worst = std::max(worst, (all[i].p * x + all[i].q * y + all[i].r) / scales[i]);
    if (worst < best.max_violation) {
      best.max_violation = worst;
      best_point = {x, y};
      have_point = true;
    }
  };

  // every vertex of a nonempty feasible set lies on two non-parallel lines
  for (size_t i = 0; i + 1 < all.size(); ++i) {
    const double ni = std::abs(all[i].p) + std::abs(all[i].q);
    for (size_t j = i + 1; j < all.size(); ++j) {
      const double nj = std::abs(all[j].p) + std::abs(all[j].q);
      const double det = all[i].p * all[j].q - all[j].p * all[i].q;
      if (std::abs(det) <= 1e-14 * ni * nj) continue;
      const double x = (-all[i].r * all[j].q + all[j].r * all[i].q) / det;
      const double y = (-all[i].p * all[j].r + all[j].p * all[i].r) / det;
      consider(x, y);
    }
  }

  best.feasible = have_point && best.max_violation <= kLpSlackTol;
  if (best.feasible) best.witness = best_point;
  return best;
}

namespace {

// golden-section minimization of a convex (hence unimodal) function; returns
// the best value seen and writes the matching argument
template <class F>
double golden_min(F&& f, double lo, double hi, int iters, double* arg) {
  constexpr double kInvPhi = 0.6180339887498949;
  constexpr double kInvPhi2 = 0.3819660112501051;
  double a = lo, b = hi;
  double x1 = a + kInvPhi2 * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = a + kInvPhi2 * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  const double fm = f(xm);
  double bx = xm, bv = fm;
  if (f1 < bv) { bv = f1; bx = x1; }
  if (f2 < bv) { bv = f2; bx = x2; }
  if (arg) *arg = bx;
  return bv;
}

constexpr int kGoldenIters = 72;

}  // namespace

FeasibilityVerdict<Eigen::Vector2d> socp2_feasible(const Socp2Data& d, double theta,
                                                   double tol) {
  const cplx rot = std::polar(1.0, theta);
  const cplx e12 = d.h12s * rot;
  const cplx e22 = d.h22s * rot;
  const auto residual = [&](double x, double t) {
    const double g1 = std::sqrt(d.a1 * std::norm(d.h11s * x + e12 * t) + d.b1) - t;
    const double g2 = std::sqrt(d.a2 * std::norm(d.h21s * x + e22 * t) + d.b2) - x;
    return std::max(g1, g2);
  };
  const double bx = std::max(d.x_max, 0.0);
  const double bt = std::max(d.t_max, 0.0);

  // the max residual is jointly convex, so the partial minimum over x is
  // convex in t and both nested line searches are exact
  const auto inner = [&](double t, double* xa) {
    return golden_min([&](double x) { return residual(x, t); }, 0.0, bx, kGoldenIters, xa);
  };
  double t_best = 0.0;
  golden_min([&](double t) { return inner(t, nullptr); }, 0.0, bt, kGoldenIters, &t_best);
  double x_best = 0.0;
  const double v = inner(t_best, &x_best);

  FeasibilityVerdict<Eigen::Vector2d> out;
  out.max_violation = v;
  out.feasible = v <= tol;
  if (out.feasible) out.witness = Eigen::Vector2d(x_best, t_best);
  return out;
}

// ---------------------------------------------------------------------------
// max-slack interior point for the rank-relaxed feasibility system
// ---------------------------------------------------------------------------

namespace {

using Vec9 = Eigen::Matrix<double, 9, 1>;
using Vec10 = Eigen::Matrix<double, 10, 1>;
using Mat10 = Eigen::Matrix<double, 10, 10>;

struct LinFun {
  double c0 = 0.0;
  Vec9 a = Vec9::Zero();
  double eval(const Vec9& x) const { return c0 + a.dot(x); }
};

Eigen::Matrix3d c_from(const Vec9& x) {
  Eigen::Matrix3d c;
  c << 1.0, x[0], x[1],
       x[0], x[2], x[3],
       x[1], x[3], x[4];
  return c;
}

Eigen::Matrix2cd q_from(const Vec9& x) {
  Eigen::Matrix2cd q;
  q << cplx(x[5], 0.0), cplx(x[6], x[7]),
       cplx(x[6], -x[7]), cplx(x[8], 0.0);
  return q;
}

// tr(m * C(x)) for symmetric m, as an affine functional of x
LinFun trace_c(const Eigen::Matrix3d& m) {
  LinFun f;
  f.c0 = m(0, 0);
  f.a[0] = 2.0 * m(0, 1);
  f.a[1] = 2.0 * m(0, 2);
  f.a[2] = m(1, 1);
  f.a[3] = 2.0 * m(1, 2);
  f.a[4] = m(2, 2);
  return f;
}

// tr(m * Q(x)) for Hermitian m
LinFun trace_q(const Eigen::Matrix2cd& m) {
  LinFun f;
  f.a[5] = m(0, 0).real();
  f.a[6] = 2.0 * m(0, 1).real();
  f.a[7] = 2.0 * m(0, 1).imag();
  f.a[8] = m(1, 1).real();
  return f;
}

LinFun operator-(const LinFun& l, const LinFun& r) {
  LinFun f;
  f.c0 = l.c0 - r.c0;
  f.a = l.a - r.a;
  return f;
}
LinFun operator*(double s, const LinFun& l) {
  LinFun f;
  f.c0 = s * l.c0;
  f.a = s * l.a;
  return f;
}

const std::array<Eigen::Matrix3d, 5>& c_basis() {
  static const std::array<Eigen::Matrix3d, 5> basis = [] {
    std::array<Eigen::Matrix3d, 5> b;
    for (auto& m : b) m.setZero();
    b[0](0, 1) = b[0](1, 0) = 1.0;
    b[1](0, 2) = b[1](2, 0) = 1.0;
    b[2](1, 1) = 1.0;
    b[3](1, 2) = b[3](2, 1) = 1.0;
    b[4](2, 2) = 1.0;
    return b;
  }();
  return basis;
}

const std::array<Eigen::Matrix2cd, 4>& q_basis() {
  static const std::array<Eigen::Matrix2cd, 4> basis = [] {
    std::array<Eigen::Matrix2cd, 4> b;
    for (auto& m : b) m.setZero();
    b[0](0, 0) = 1.0;
    b[1](0, 1) = b[1](1, 0) = 1.0;
    b[2](0, 1) = cplx(0.0, 1.0);
    b[2](1, 0) = cplx(0.0, -1.0);
    b[3](1, 1) = 1.0;
    return b;
  }();
  return basis;
}

bool spd_3(const Eigen::Matrix3d& m) {
  Eigen::LLT<Eigen::Matrix3d> llt(m);
  return llt.info() == Eigen::Success;
}
bool hpd_2(const Eigen::Matrix2cd& m) {
  Eigen::LLT<Eigen::Matrix2cd> llt(m);
  return llt.info() == Eigen::Success;
}

}  // namespace

SdpVerdict sdp_feasible(const SdrData& sdr, double rate_sum, double tol) {
  SdpVerdict out;
  const double s2 = sdr.sigma2;
  const double s4 = s2 * s2;

  // rigorous overflow-free rejection: the numerator quadratic is at most
  // (sigma2 + a_k . P)^2 while the denominator is at least sigma^4
  for (int k = 0; k < 2; ++k) {
    const double nmax =
        s2 + sdr.a[k][0] * sdr.power[0] + sdr.a[k][1] * sdr.power[1];
    const double cap = 2.0 * std::log(nmax / s2);
    const double need = 2.0 * sdr.profile[k] * rate_sum;
    if (need > cap) {
      out.feasible = false;
      out.status = SdpStatus::infeasible;
      out.max_violation = need - cap;
      return out;
    }
  }

  // internal rescale c_k -> P_k c_k, q_k -> P_k q_k for uniform conditioning
  const double p1 = std::max(sdr.power[0], 1e-12);
  const double p2 = std::max(sdr.power[1], 1e-12);
  const Eigen::Vector3d dc(1.0, p1, p2);
  const Eigen::Vector2d dq(p1, p2);
  const auto scale_c = [&](const Eigen::Matrix3d& m) -> Eigen::Matrix3d {
    return dc.asDiagonal() * m * dc.asDiagonal();
  };
  const auto scale_q = [&](const Eigen::Matrix2cd& m) -> Eigen::Matrix2cd {
    return dq.cast<cplx>().asDiagonal() * m * dq.cast<cplx>().asDiagonal();
  };

  std::vector<LinFun> cons;
  cons.reserve(12);
  for (int k = 0; k < 2; ++k) {
    const LinFun num = trace_c(scale_c(sdr.A[k])) - trace_q(scale_q(sdr.F[k]));
    const LinFun den = trace_c(scale_c(sdr.B[k])) - trace_q(scale_q(sdr.G[k]));
    const double growth = std::exp(2.0 * sdr.profile[k] * rate_sum);

    LinFun rate = num - growth * den;          // num >= growth * den
    LinFun floor_num = num;                     // num >= sigma^4
    floor_num.c0 -= s4;
    LinFun floor_den = den;                     // den >= sigma^4
    floor_den.c0 -= s4;
    LinFun power = -1.0 * trace_c(scale_c(sdr.Ehat[k]));  // P_k^2 >= C_{k+1,k+1}
    power.c0 += sdr.power[k] * sdr.power[k];
    LinFun sign = trace_c(scale_c(sdr.K[k]));   // c_k >= 0
    LinFun mag = trace_c(scale_c(sdr.Ehat[k])) -
                 trace_q(scale_q(Eigen::Matrix2cd(sdr.E[k].cast<cplx>())));
    cons.push_back(rate);
    cons.push_back(floor_num);
    cons.push_back(floor_den);
    cons.push_back(power);
    cons.push_back(sign);
    cons.push_back(mag);
  }
  // normalize each inequality so slacks are comparable
  for (auto& f : cons) {
    const double ns = std::max({1.0, std::abs(f.c0), f.a.cwiseAbs().maxCoeff()});
    f.c0 /= ns;
    f.a /= ns;
  }

  // strictly interior start in the scaled variables, slack below every margin
  Vec10 y = Vec10::Zero();
  y[0] = 0.5; y[1] = 0.5;                      // c
  y[2] = 0.45; y[3] = 0.25; y[4] = 0.45;       // lifted square plus diagonal boost
  y[5] = 0.2; y[6] = 0.0; y[7] = 0.0; y[8] = 0.2;
  {
    const Vec9 x = y.head<9>();
    double m = std::numeric_limits<double>::infinity();
    for (const auto& f : cons) m = std::min(m, f.eval(x));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> ec(c_from(x), Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eq(q_from(x), Eigen::EigenvaluesOnly);
    m = std::min({m, ec.eigenvalues().minCoeff(), eq.eigenvalues().minCoeff()});
    y[9] = m - 0.5;
  }

  const auto in_domain = [&](const Vec10& yy) {
    const Vec9 x = yy.head<9>();
    const double s = yy[9];
    for (const auto& f : cons)
      if (!(f.eval(x) - s > 0.0)) return false;
    if (!spd_3(c_from(x) - s * Eigen::Matrix3d::Identity())) return false;
    if (!hpd_2(q_from(x) - s * Eigen::Matrix2cd::Identity())) return false;
    return true;
  };

  const auto barrier_value = [&](const Vec10& yy, double t) -> double {
    const Vec9 x = yy.head<9>();
    const double s = yy[9];
    double phi = -t * s;
    for (const auto& f : cons) phi -= std::log(f.eval(x) - s);
    {
      Eigen::LLT<Eigen::Matrix3d> llt(c_from(x) - s * Eigen::Matrix3d::Identity());
      if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
      phi -= 2.0 * Eigen::Matrix3d(llt.matrixL()).diagonal().array().log().sum();
    }
    {
      Eigen::LLT<Eigen::Matrix2cd> llt(q_from(x) - s * Eigen::Matrix2cd::Identity());
      if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
      phi -= 2.0 * Eigen::Matrix2cd(llt.matrixL()).diagonal().real().array().log().sum();
    }
    return phi;
  };

  // barrier gradient and hessian at yy with objective weight t on the slack;
  // index 9 is the slack variable, callers that freeze it use the 9x9 block
  const auto assemble = [&](const Vec10& yy, double t, Vec10& grad, Mat10& hess) {
    const Vec9 x = yy.head<9>();
    const double s = yy[9];
    grad.setZero();
    hess.setZero();
    grad[9] = -t;

    for (const auto& f : cons) {
      const double m = f.eval(x) - s;
      Vec10 v = Vec10::Zero();
      v.head<9>() = f.a;
      v[9] = -1.0;
      grad -= v / m;
      hess += (v * v.transpose()) / (m * m);
    }
    {
      const Eigen::Matrix3d minv =
          (c_from(x) - s * Eigen::Matrix3d::Identity()).inverse();
      std::array<Eigen::Matrix3d, 6> xd;  // directions: 5 basis + d/ds = -I
      for (int j = 0; j < 5; ++j) xd[j] = minv * c_basis()[j];
      xd[5] = -minv;
      const int map[6] = {0, 1, 2, 3, 4, 9};
      for (int u = 0; u < 6; ++u) {
        grad[map[u]] -= xd[u].trace();
        for (int v = u; v < 6; ++v) {
          const double huv = (xd[u] * xd[v]).trace();
          hess(map[u], map[v]) += huv;
          if (u != v) hess(map[v], map[u]) += huv;
        }
      }
    }
    {
      const Eigen::Matrix2cd minv =
          (q_from(x) - s * Eigen::Matrix2cd::Identity()).inverse();
      std::array<Eigen::Matrix2cd, 5> xd;
      for (int j = 0; j < 4; ++j) xd[j] = minv * q_basis()[j];
      xd[4] = -minv;
      const int map[5] = {5, 6, 7, 8, 9};
      for (int u = 0; u < 5; ++u) {
        grad[map[u]] -= xd[u].trace().real();
        for (int v = u; v < 5; ++v) {
          const double huv = (xd[u] * xd[v]).trace().real();
          hess(map[u], map[v]) += huv;
          if (u != v) hess(map[v], map[u]) += huv;
        }
      }
    }
  };

  constexpr int kMaxNewton = 200;
  const double mu_final = tol / 68.0;  // barrier parameter 17, gap well under tol
  double mu = 1.0;
  bool capped = false;
  Vec10 grad;
  Mat10 hess;

  while (true) {
    const double t = 1.0 / mu;
    for (;;) {
      if (out.newton_steps >= kMaxNewton) {
        capped = true;
        break;
      }
      assemble(y, t, grad, hess);

      Vec10 dy;
      double ridge = 0.0;
      for (;;) {
        Mat10 h = hess;
        if (ridge > 0.0) h += ridge * Mat10::Identity();
        Eigen::LDLT<Mat10> ldlt(h);
        dy = ldlt.solve(-grad);
        if (ldlt.info() == Eigen::Success && dy.allFinite()) break;
        ridge = ridge == 0.0 ? 1e-10 : ridge * 100.0;
        if (ridge > 1e6) {
          dy = -grad;  // give up on curvature, gradient step
          break;
        }
      }

      const double lambda2 = -grad.dot(dy);
      if (!(lambda2 > 1e-18 * (1.0 + t))) break;  // stationary at this stage
      if (lambda2 * 0.5 <= 0.05) break;           // centered enough

      const double phi0 = barrier_value(y, t);
      double tau = 1.0;
      bool moved = false;
      while (tau >= 1e-14) {
        const Vec10 cand = y + tau * dy;
        if (in_domain(cand) &&
            barrier_value(cand, t) <= phi0 + 0.25 * tau * grad.dot(dy)) {
          y = cand;
          moved = true;
          break;
        }
        tau *= 0.5;
      }
      ++out.newton_steps;
      if (!moved) break;  // line search stalled; accept the current center
    }
    if (capped || mu <= mu_final) break;
    mu = std::max(mu * 0.12, mu_final);
  }

  const double s_final = y[9];
  out.max_violation = -s_final;
  if (capped && s_final < -tol) {
    // ran out of budget while still infeasible-looking; report undecided
    out.status = SdpStatus::undecided;
    out.feasible = false;
    return out;
  }
  out.feasible = s_final >= -tol;
  out.status = out.feasible ? SdpStatus::feasible : SdpStatus::infeasible;

  // the max-slack endpoint is an extreme point and tends to drive the lifted
  // blocks toward rank one, which collapses the sampling distribution used
  // downstream; retire the slack and walk back to the analytic center of the
  // feasible set so the witness stays well spread
  if (out.feasible && s_final > tol) {
    y[9] = 0.0;
    for (int it = 0; it < 80; ++it) {
      assemble(y, 0.0, grad, hess);
      const Eigen::Matrix<double, 9, 9> h9 = hess.topLeftCorner<9, 9>();
      const Vec9 g9 = grad.head<9>();
      Vec9 d9;
      double ridge = 0.0;
      for (;;) {
        Eigen::Matrix<double, 9, 9> h = h9;
        if (ridge > 0.0) h += ridge * Eigen::Matrix<double, 9, 9>::Identity();
        Eigen::LDLT<Eigen::Matrix<double, 9, 9>> ldlt(h);
        d9 = ldlt.solve(-g9);
        if (ldlt.info() == Eigen::Success && d9.allFinite()) break;
        ridge = ridge == 0.0 ? 1e-10 : ridge * 100.0;
        if (ridge > 1e6) {
          d9 = -g9;
          break;
        }
      }
      const double lambda2 = -g9.dot(d9);
      if (!(lambda2 * 0.5 > 1e-9)) break;
      const double phi0 = barrier_value(y, 0.0);
      Vec10 step = Vec10::Zero();
      step.head<9>() = d9;
      double tau = 1.0;
      bool moved = false;
      while (tau >= 1e-14) {
        const Vec10 cand = y + tau * step;
        if (in_domain(cand) &&
            barrier_value(cand, 0.0) <= phi0 + 0.25 * tau * g9.dot(d9)) {
          y = cand;
          moved = true;
          break;
        }
        tau *= 0.5;
      }
      ++out.newton_steps;
      if (!moved) break;
    }
  }

  if (out.feasible) {
    const Vec9 x = y.head<9>();
    SdpWitness w;
    w.C = dc.asDiagonal() * c_from(x) * dc.asDiagonal();
    w.Q = dq.cast<cplx>().asDiagonal() * q_from(x) * dq.cast<cplx>().asDiagonal();
    // clamp eigenvalue dust so downstream factorizations are safe
    {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(w.C);
      w.C = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
            es.eigenvectors().transpose();
    }
    {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(w.Q);
      w.Q = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
            es.eigenvectors().adjoint();
    }
    out.witness = std::move(w);
  }
  return out;
}

}  // namespace igs
