#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <vector>

namespace igs {

using cplx = std::complex<double>;

// Two-user scalar interference channel. h[k][j] is the gain from transmitter j
// to receiver k, so the off-diagonal entries carry the interference.
struct SisoIcInstance {
  std::array<std::array<cplx, 2>, 2> h{};
  double sigma2 = 1.0;
  std::array<double, 2> power{1.0, 1.0};
};

// K-user MIMO interference channel; H[k][j] maps transmitter j (M_j antennas)
// to receiver k (N_k antennas). Noise is white with per-antenna power sigma2.
struct MimoIcInstance {
  std::vector<std::vector<Eigen::MatrixXcd>> H;
  double sigma2 = 1.0;
  std::vector<double> power;
  int users() const { return static_cast<int>(H.size()); }
};

// Second-order transmit description: covariance c = E[x x^H] (Hermitian) and
// pseudo-covariance ct = E[x x^T] (symmetric). ct = 0 is the proper case.
struct SignalStrategy {
  Eigen::MatrixXcd c, ct;
};

// Scalar specialization: c >= 0 real, ct complex with |ct| <= c.
struct SisoStrategy {
  double c = 0.0;
  cplx ct = 0.0;
};

struct ValidityReport {
  bool valid = false;
  double min_augmented_eig = 0.0;  // smallest eigenvalue of the augmented covariance
  double power_margin = 0.0;       // budget minus trace
  std::string reason;              // empty when valid
};

// [[c, ct], [conj(ct), conj(c)]]; throws std::invalid_argument on shape,
// hermiticity, or symmetry violations.
Eigen::MatrixXcd augmented_covariance(const SignalStrategy& s);

// A strategy is realizable iff the augmented covariance is PSD (tolerance
// 1e-9 on the minimum eigenvalue) and trace(c) fits the power budget.
ValidityReport validate_strategy(const SignalStrategy& s, double power_budget);
ValidityReport validate_strategy(const SisoStrategy& s, double power_budget);

SignalStrategy to_matrix_strategy(const SisoStrategy& s);

// Per-receiver second-order statistics of the total signal (cy, cty) and of
// noise plus interference only (cs, cts).
struct SisoReceiverStats {
  double cy = 0.0, cs = 0.0;
  cplx cty = 0.0, cts = 0.0;
};
struct ReceiverStats {
  Eigen::MatrixXcd cy, cty, cs, cts;
};

std::array<SisoReceiverStats, 2> received_stats(const SisoIcInstance& ic,
                                                const std::array<SisoStrategy, 2>& tx);
std::vector<ReceiverStats> received_stats(const MimoIcInstance& ic,
                                          const std::vector<SignalStrategy>& tx);

// Covariance of the stacked real signal [Re x; Im x]. For the scalar case
// Q = 0.5 * [[c + Re ct, Im ct], [Im ct, c - Re ct]]; trace(Q) = c.
Eigen::Matrix2d complex_to_real(const SisoStrategy& s);
Eigen::MatrixXd complex_to_real(const SignalStrategy& s);
SisoStrategy real_to_complex(const Eigen::Matrix2d& q);

// |h_k,other|^2 / |h_kk|^2 for user k (0-based). Zero cross gain gives 0; a
// zero direct gain with nonzero cross gain is reported as +infinity.
double interference_ratio(const SisoIcInstance& ic, int user);

}  // namespace igs
