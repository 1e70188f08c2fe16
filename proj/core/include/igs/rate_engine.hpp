#pragma once

#include <array>
#include <vector>

#include "igs/signal_model.hpp"

namespace igs {

enum class RateUnits { nats, bits };

// Achievable rate of one user with interference treated as noise, split into
// the rate of a proper-signaling system with the same powers plus the
// correction contributed by the pseudo-covariances. total = proper + improper
// up to floating point noise; improper can be negative.
struct RateBreakdown {
  double total = 0.0;
  double proper_part = 0.0;
  double improper_part = 0.0;
  RateUnits units = RateUnits::nats;

  RateBreakdown in_bits() const;
  RateBreakdown in_nats() const;
};

RateBreakdown siso_rate(const SisoIcInstance& ic, const std::array<SisoStrategy, 2>& tx,
                        int user);
RateBreakdown mimo_rate(const MimoIcInstance& ic, const std::vector<SignalStrategy>& tx,
                        int user);

// Rate pairs (nats) for a batch of strategy pairs.
std::vector<std::array<double, 2>> rate_region_sample(
    const SisoIcInstance& ic, const std::vector<std::array<SisoStrategy, 2>>& batch);

}  // namespace igs
