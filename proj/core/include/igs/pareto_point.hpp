#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "igs/signal_model.hpp"

namespace igs {

// Positive rate weights summing to one. A boundary point for profile alpha
// solves max R s.t. R_k >= alpha_k R, so R = R_1 + R_2 when both bind.
struct RateProfile {
  double a1, a2;
  RateProfile(double a1_, double a2_) : a1(a1_), a2(a2_) {
    if (!(a1 > 0.0) || !(a2 > 0.0) || std::abs(a1 + a2 - 1.0) > 1e-12)
      throw std::invalid_argument("rate profile weights must be positive and sum to one");
  }
  double operator[](int k) const { return k == 0 ? a1 : a2; }
};

enum ThetaSource {
  theta_closed_form = 0,  // antiphase alignment angles
  theta_set_a = 1,        // stationary system with user-1 magnitude frozen
  theta_set_b = 2,        // stationary system with user-2 magnitude frozen
  theta_grid = 3,         // dense fallback sweep
};

struct ThetaCandidate {
  double theta = 0.0;
  int source = theta_grid;
  double companion = 0.0;  // free pseudo magnitude solving the stationary system
  double residual = 0.0;   // worst normalized residual of that system
};

struct ParetoDiagnostics {
  double r_star = std::numeric_limits<double>::quiet_NaN();       // proper-stage value, nats
  double upper_bound = std::numeric_limits<double>::quiet_NaN();  // relaxation bound, nats
  double bisect_value = std::numeric_limits<double>::quiet_NaN(); // certified sup of feasible probes
  bool rank1_c = false, rank1_q = false;
  int trials = 0, best_trial = -1, redraws = 0, undecided_probes = 0;
  long evaluations = 0;
  std::uint64_t seed = 0;
  double ray_deviation = std::numeric_limits<double>::quiet_NaN();  // max_k |R_k - alpha_k R|
  double winning_theta = std::numeric_limits<double>::quiet_NaN();
  double theta_slack = std::numeric_limits<double>::quiet_NaN();    // cone slack at the winner
  std::vector<ThetaCandidate> theta_audit;
  std::string status;  // "ok" or a failure note
};

// One operating point on (or near) the boundary: value = min_k R_k / alpha_k
// in nats, rates as achieved by the stored strategies.
struct ParetoPoint {
  double value = 0.0;
  std::array<double, 2> rates{};
  std::array<SisoStrategy, 2> strategy{};
  ParetoDiagnostics diag;
};

// max_k (1/alpha_k) log(1 + |h_kk|^2 P_k / sigma2): no profile point can
// exceed the interference-free single-user rate on either ray.
inline double profile_rate_upper_bound(const SisoIcInstance& ic, const RateProfile& pr) {
  double ub = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double snr = std::norm(ic.h[k][k]) * ic.power[k] / ic.sigma2;
    ub = std::max(ub, std::log1p(snr) / pr[k]);
  }
  return ub;
}

}  // namespace igs
