#pragma once

#include <cstdint>

#include "igs/conic_solvers.hpp"
#include "igs/pareto_point.hpp"
#include "igs/rng.hpp"
#include "igs/sdr_data.hpp"

namespace igs {

SdrData build_sdr(const SisoIcInstance& ic, const RateProfile& profile);

struct SdrSolveOptions {
  double bisect_tol = 1e-4;  // nats
  double sdp_tol = 1e-7;
};

struct SdrSolution {
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
  Eigen::Matrix2cd Q = Eigen::Matrix2cd::Zero();
  double bound = 0.0;  // certified upper bound on the relaxed profile value, nats
  double value = 0.0;  // sup of the certified-feasible probes, nats
  int probes = 0;
  int undecided = 0;
  bool ok = false;
};

// Bisection over the relaxed feasibility oracle on [0, single-user bound].
SdrSolution solve_sdr(const SdrData& sdr, const SdrSolveOptions& opts = {});

// Ratio test on the second largest eigenvalue, relative to the largest.
bool is_rank1(const Eigen::Matrix3d& m, double tol = 1e-6);
bool is_rank1(const Eigen::Matrix2cd& m, double tol = 1e-6);

struct RandomizeResult {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  Eigen::Vector2cd q = Eigen::Vector2cd::Zero();
  double value = -std::numeric_limits<double>::infinity();  // min_k R_k/alpha_k, nats
  int best_trial = -1;
  int redraws = 0;
};

// Gaussian rounding of a relaxed pair: trial 0 takes the principal components,
// later trials draw from N(0, C) / CN(0, Q), rescale by the homogenizing
// coordinate, and project onto the feasible box. Deterministic for a given rng
// seed; trials with a vanishing homogenizing draw are redrawn.
RandomizeResult randomize(const Eigen::Matrix3d& C, const Eigen::Matrix2cd& Q,
                          const SdrData& sdr, int trials, const Rng& rng);

struct JointOptions {
  int trials = 1000;
  std::uint64_t seed = 1;
  SdrSolveOptions sdr{};
};

// Relax-then-randomize boundary point for the given profile. The power-only
// point competes with the rounded candidates, so the result never drops below
// the proper stage; best_trial = -1 marks that fallback.
ParetoPoint joint_pareto_point(const SisoIcInstance& ic, const RateProfile& profile,
                               const JointOptions& opts = {});

}  // namespace igs
