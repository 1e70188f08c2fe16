#pragma once

#include <Eigen/Dense>
#include <array>

#include "igs/pareto_point.hpp"
#include "igs/signal_model.hpp"

namespace igs {

// Homogenized quadratic data for the rank-relaxed boundary search. Powers
// enter through the lifted symmetric C = [1, c^T; c, c c^T] and the
// pseudo-covariances through the Hermitian Q = q q^H, so every rate constraint
// becomes linear in (C, Q):
//   tr(A_k C) - tr(F_k Q) >= e^{2 alpha_k R} (tr(B_k C) - tr(G_k Q)).
struct SdrData {
  std::array<Eigen::Vector2d, 2> a, b;    // |h|^2 rows with / without the direct link
  std::array<Eigen::Vector2cd, 2> f, g;   // conjugated squared gains, f[k]^H q = cty_k
  std::array<Eigen::Matrix3d, 2> A, B;    // (sigma2, a_k) / (sigma2, b_k) outer products
  std::array<Eigen::Matrix2cd, 2> F, G;   // f f^H and g g^H
  std::array<Eigen::Matrix3d, 2> K;       // tr(K_k C) = c_k (sign constraints)
  std::array<Eigen::Matrix3d, 2> Ehat;    // tr(Ehat_k C) = C_{k+1,k+1} (lifted square)
  std::array<Eigen::Matrix2d, 2> E;       // tr(E_k Q) = |q_k|^2
  RateProfile profile{0.5, 0.5};
  std::array<double, 2> power{1.0, 1.0};
  double sigma2 = 1.0;
};

}  // namespace igs
