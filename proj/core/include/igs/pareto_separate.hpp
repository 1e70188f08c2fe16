#pragma once

#include <utility>
#include <vector>

#include "igs/conic_solvers.hpp"
#include "igs/pareto_point.hpp"

namespace igs {

struct ProperSolution {
  double r_star = 0.0;              // sup feasible profile value with ct = 0, nats
  Eigen::Vector2d c = Eigen::Vector2d::Zero();  // witness powers
  bool ok = false;
  int probes = 0;
};

// Power-only stage: bisection on the profile value where each probe is a
// 2-variable LP in the powers.
ProperSolution proper_pareto_point(const SisoIcInstance& ic, const RateProfile& profile,
                                   double tol = 1e-4);

// Coefficients of the pseudo-covariance stage at target value R, with powers
// and received stats frozen at the power-stage witness:
//   beta_k = e^{2 alpha_k (R - r_star)},
//   a_k = cs_k^2 / (beta_k cy_k^2 |h_k,other|^4),
//   b_k = (1 - 1/beta_k) cs_k^2 / |h_k,other|^4.
struct PseudoCoeffs {
  double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
  double beta1 = 1.0, beta2 = 1.0;
  std::array<double, 2> cy{}, cs{};
  bool degenerate = false;  // vanishing gain or power makes the angle systems singular
};

PseudoCoeffs pseudo_coeffs(const SisoIcInstance& ic, const Eigen::Vector2d& c_star,
                           double r_star, double rate_sum, const RateProfile& profile);

// Real roots (eta, m), m in [0, m_max], of the stationary system
//   m cos(eta)         + d1 m^2 + d2 = 0
//   m cos(eta + omega) + d3 m^2 + d4 = 0
// via elimination to a quadratic in m^2; both arccos branches are kept only
// when they satisfy the second equation within tolerance.
std::vector<std::pair<double, double>> solve_reduced_theta(double d1, double d2, double d3,
                                                           double d4, double omega,
                                                           double m_max);

struct ThetaCandidateSet {
  std::vector<ThetaCandidate> items;
  bool fallback_grid = false;  // degenerate coefficients force a dense sweep
};

// Finite optimal-angle candidate set: the two antiphase closed forms plus the
// roots of the two stationary systems (one per frozen boundary magnitude),
// deduplicated modulo 2 pi.
ThetaCandidateSet theta_candidates(const SisoIcInstance& ic, const PseudoCoeffs& pc,
                                   const Eigen::Vector2d& c_star);

struct SeparateOptions {
  double proper_tol = 1e-4;
  double rate_tol = 1e-4;
  double socp_tol = 1e-9;
  int grid_fallback = 720;
};

// Two-stage boundary point: powers first, then the pseudo-covariances by
// bisection where each probe scans the candidate angles and solves the
// two-cone system in the magnitudes.
ParetoPoint improper_pareto_point(const SisoIcInstance& ic, const RateProfile& profile,
                                  const SeparateOptions& opts = {});

}  // namespace igs
