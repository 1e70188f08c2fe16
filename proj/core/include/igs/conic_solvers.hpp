#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "igs/sdr_data.hpp"

namespace igs {

template <class Witness>
struct FeasibilityVerdict {
  bool feasible = false;
  std::optional<Witness> witness;  // present iff feasible
  double max_violation = std::numeric_limits<double>::infinity();
};

template <class Verdict>
struct BisectionResult {
  double value = 0.0;
  std::optional<Verdict> best;  // verdict at the last feasible probe
  int iterations = 0;
  std::vector<std::pair<double, bool>> bracket;  // (probe, feasible) history
  bool empty = false;                            // infeasible already at lo
};

// Largest v in [lo, hi] whose probe is feasible, assuming downward-closed
// feasibility. Keeps the witness of the last feasible probe; |value - sup| <=
// tol unless the sup is hi itself or the set is empty.
template <class Oracle>
auto bisect_sup(Oracle&& oracle, double lo, double hi, double tol)
    -> BisectionResult<std::decay_t<decltype(oracle(lo))>> {
  using Verdict = std::decay_t<decltype(oracle(lo))>;
  BisectionResult<Verdict> out;
  Verdict at_lo = oracle(lo);
  out.iterations = 1;
  out.bracket.emplace_back(lo, at_lo.feasible);
  out.value = lo;
  if (!at_lo.feasible) {
    out.empty = true;
    return out;
  }
  out.best = std::move(at_lo);
  if (hi <= lo) return out;
  Verdict at_hi = oracle(hi);
  ++out.iterations;
  out.bracket.emplace_back(hi, at_hi.feasible);
  if (at_hi.feasible) {
    out.value = hi;
    out.best = std::move(at_hi);
    return out;
  }
  double bad = hi;
  while (bad - out.value > tol) {
    const double mid = 0.5 * (bad + out.value);
    Verdict v = oracle(mid);
    ++out.iterations;
    out.bracket.emplace_back(mid, v.feasible);
    if (v.feasible) {
      out.value = mid;
      out.best = std::move(v);
    } else {
      bad = mid;
    }
  }
  return out;
}

// p*x + q*y + r <= 0
struct AffineIneq {
  double p = 0.0, q = 0.0, r = 0.0;
};

// [0, x_max] x [0, y_max]
struct Box2 {
  double x_max = 0.0, y_max = 0.0;
};

// Exact 2-variable LP feasibility by vertex enumeration over the constraint
// and box lines. Witness is the vertex maximizing the minimum normalized
// slack; feasibility threshold 1e-12 on that slack.
FeasibilityVerdict<Eigen::Vector2d> lp2_feasible(const std::vector<AffineIneq>& cons,
                                                 const Box2& box);

// Data of the two-cone system in the magnitudes (x1, t) at a fixed angle:
//   sqrt(a1 |h11s x1 + h12s t e^{i theta}|^2 + b1) <= t
//   sqrt(a2 |h21s x1 + h22s t e^{i theta}|^2 + b2) <= x1
// over [0, x_max] x [0, t_max]. hNMs are the squared complex gains.
struct Socp2Data {
  double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
  cplx h11s, h12s, h21s, h22s;
  double x_max = 0.0, t_max = 0.0;
};

// Decides the system by exact minimization of the jointly convex max residual
// (nested golden-section line searches). Witness is the residual minimizer.
FeasibilityVerdict<Eigen::Vector2d> socp2_feasible(const Socp2Data& d, double theta,
                                                   double tol = 1e-9);

enum class SdpStatus { feasible, infeasible, undecided };

struct SdpWitness {
  Eigen::Matrix3d C;
  Eigen::Matrix2cd Q;
};

struct SdpVerdict {
  bool feasible = false;
  SdpStatus status = SdpStatus::undecided;
  std::optional<SdpWitness> witness;
  // Negated optimal slack of the max-slack program, in normalized constraint
  // units; <= tol means feasible.
  double max_violation = std::numeric_limits<double>::infinity();
  int newton_steps = 0;
};

// Feasibility of the rank-relaxed profile-rate system at sum rate `rate_sum`
// (nats): 12 linear inequalities plus C >= 0 (C11 = 1) and Q >= 0. Decided by
// an interior-point max-slack program; an iteration-capped run returns
// undecided (treated as infeasible by callers, who count it).
SdpVerdict sdp_feasible(const SdrData& sdr, double rate_sum, double tol = 1e-7);

}  // namespace igs
