#pragma once

#include <Eigen/Dense>

#include "igs/rng.hpp"
#include "igs/signal_model.hpp"

namespace igs {

// Filter pair of the widely linear map x = b1 d + b2 conj(d), which turns a
// proper unit-covariance d into a signal with covariance c and
// pseudo-covariance ct. eig/basis hold the eigendecomposition (descending) of
// the real composite form the factorization came from.
struct WidelyLinearFactor {
  Eigen::MatrixXcd b1, b2;
  Eigen::VectorXd eig;
  Eigen::MatrixXd basis;
};

// (1/sqrt(2)) [[I, iI], [I, -iI]]; unitary change of basis between the
// augmented complex representation and the stacked real one.
Eigen::MatrixXcd augmented_unitary(int m);

// Factors a valid strategy; throws std::invalid_argument when the augmented
// covariance is not PSD within tolerance. Eigenvalues in [-1e-9, 0) are
// clamped to zero so boundary strategies (e.g. maximally improper) factor.
WidelyLinearFactor augmented_sqrt(const SignalStrategy& s);

Eigen::VectorXcd precode(const WidelyLinearFactor& w, const Eigen::VectorXcd& d);

// The same operator acting on stacked real coordinates [Re d; Im d].
Eigen::MatrixXd real_representation(const WidelyLinearFactor& w);

// n iid draws of x (as columns), d drawn proper standard complex normal.
Eigen::MatrixXcd sample_improper(const WidelyLinearFactor& w, int n, Rng& rng);

}  // namespace igs
