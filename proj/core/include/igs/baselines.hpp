#pragma once

#include "igs/pareto_joint.hpp"
#include "igs/pareto_point.hpp"
#include "igs/pareto_separate.hpp"

namespace igs {

// Exhaustive reference search over (c1, c2, |ct1|/c1, |ct2|/c2, theta) with
// the common phase fixed to leave ct1 real; theta is the phase of ct2.
struct GridSpec {
  int n_power = 21;
  int n_mag = 11;
  int n_theta = 72;
  int refine = 3;  // 5-point-per-axis local rounds, range shrinks 4x each
};

ParetoPoint grid_oracle(const SisoIcInstance& ic, const RateProfile& profile,
                        const GridSpec& spec = {});

// Half-time alternation at full per-slot power, no power pooling; nats.
double tdma_maxmin(const SisoIcInstance& ic);

enum class MaxminMethod { proper, separate, joint, oracle, tdma };

struct MaxminOptions {
  GridSpec grid{};
  JointOptions joint{};
  SeparateOptions separate{};
};

// Egalitarian point: the profile (1/2, 1/2) under the chosen method. The
// max-min figure of merit is min(rates).
ParetoPoint maxmin_point(const SisoIcInstance& ic, MaxminMethod method,
                         const MaxminOptions& opts = {});

}  // namespace igs
