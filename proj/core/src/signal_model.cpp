#include "igs/signal_model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace igs {
namespace {

constexpr double kShapeTol = 1e-12;  // hermiticity / symmetry, relative
constexpr double kPsdTol = 1e-9;     // minimum augmented eigenvalue slack
constexpr double kPowerTol = 1e-9;

void check_shape(const SignalStrategy& s) {
  if (s.c.rows() == 0 || s.c.rows() != s.c.cols())
    throw std::invalid_argument("covariance must be square and nonempty");
  if (s.ct.rows() != s.c.rows() || s.ct.cols() != s.c.cols())
    throw std::invalid_argument("pseudo-covariance dimensions must match the covariance");
  const double scale =
      std::max({1.0, s.c.cwiseAbs().maxCoeff(), s.ct.cwiseAbs().maxCoeff()});
  if ((s.c - s.c.adjoint()).cwiseAbs().maxCoeff() > kShapeTol * scale)
    throw std::invalid_argument("covariance must be Hermitian");
  if ((s.ct - s.ct.transpose()).cwiseAbs().maxCoeff() > kShapeTol * scale)
    throw std::invalid_argument("pseudo-covariance must be symmetric");
}

}  // namespace

Eigen::MatrixXcd augmented_covariance(const SignalStrategy& s) {
  check_shape(s);
  const auto m = s.c.rows();
  Eigen::MatrixXcd aug(2 * m, 2 * m);
  aug.topLeftCorner(m, m) = s.c;
  aug.topRightCorner(m, m) = s.ct;
  aug.bottomLeftCorner(m, m) = s.ct.conjugate();
  aug.bottomRightCorner(m, m) = s.c.conjugate();
  return aug;
}

ValidityReport validate_strategy(const SignalStrategy& s, double power_budget) {
  ValidityReport rep;
  const Eigen::MatrixXcd aug = augmented_covariance(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(aug, Eigen::EigenvaluesOnly);
  rep.min_augmented_eig = es.eigenvalues().minCoeff();
  rep.power_margin = power_budget - s.c.trace().real();
  if (rep.min_augmented_eig < -kPsdTol)
    rep.reason = "augmented covariance not positive semidefinite";
  else if (rep.power_margin < -kPowerTol)
    rep.reason = "power budget exceeded";
  else
    rep.valid = true;
  return rep;
}

ValidityReport validate_strategy(const SisoStrategy& s, double power_budget) {
  ValidityReport rep;
  rep.min_augmented_eig = s.c - std::abs(s.ct);  // eigenvalues are c +- |ct|
  rep.power_margin = power_budget - s.c;
  if (rep.min_augmented_eig < -kPsdTol)
    rep.reason = "pseudo-covariance magnitude exceeds the covariance";
  else if (rep.power_margin < -kPowerTol)
    rep.reason = "power budget exceeded";
  else
    rep.valid = true;
  return rep;
}

SignalStrategy to_matrix_strategy(const SisoStrategy& s) {
  SignalStrategy m;
  m.c = Eigen::MatrixXcd::Constant(1, 1, cplx(s.c, 0.0));
  m.ct = Eigen::MatrixXcd::Constant(1, 1, s.ct);
  return m;
}

std::array<SisoReceiverStats, 2> received_stats(const SisoIcInstance& ic,
                                                const std::array<SisoStrategy, 2>& tx) {
  std::array<SisoReceiverStats, 2> out;
  for (int k = 0; k < 2; ++k) {
    SisoReceiverStats st;
    st.cy = ic.sigma2;
    st.cs = ic.sigma2;
    for (int j = 0; j < 2; ++j) {
      const cplx hkj = ic.h[k][j];
      const double gain = std::norm(hkj);
      const cplx sq = hkj * hkj;
      st.cy += gain * tx[j].c;
      st.cty += sq * tx[j].ct;
      if (j != k) {
        st.cs += gain * tx[j].c;
        st.cts += sq * tx[j].ct;
      }
    }
    out[k] = st;
  }
  return out;
}

std::vector<ReceiverStats> received_stats(const MimoIcInstance& ic,
                                          const std::vector<SignalStrategy>& tx) {
  const int users = ic.users();
  if (static_cast<int>(tx.size()) != users)
    throw std::invalid_argument("one strategy per user required");
  std::vector<ReceiverStats> out(users);
  for (int k = 0; k < users; ++k) {
    const auto n = ic.H[k][k].rows();
    ReceiverStats st;
    st.cy = ic.sigma2 * Eigen::MatrixXcd::Identity(n, n);
    st.cs = st.cy;
    st.cty = Eigen::MatrixXcd::Zero(n, n);
    st.cts = st.cty;
    for (int j = 0; j < users; ++j) {
      const Eigen::MatrixXcd& hkj = ic.H[k][j];
      if (hkj.rows() != n || hkj.cols() != tx[j].c.rows())
        throw std::invalid_argument("channel and strategy dimensions disagree");
      const Eigen::MatrixXcd cov = hkj * tx[j].c * hkj.adjoint();
      const Eigen::MatrixXcd pcov = hkj * tx[j].ct * hkj.transpose();
      st.cy += cov;
      st.cty += pcov;
      if (j != k) {
        st.cs += cov;
        st.cts += pcov;
      }
    }
    out[k] = std::move(st);
  }
  return out;
}

Eigen::Matrix2d complex_to_real(const SisoStrategy& s) {
  Eigen::Matrix2d q;
  q << 0.5 * (s.c + s.ct.real()), 0.5 * s.ct.imag(),
       0.5 * s.ct.imag(), 0.5 * (s.c - s.ct.real());
  return q;
}

Eigen::MatrixXd complex_to_real(const SignalStrategy& s) {
  check_shape(s);
  const auto m = s.c.rows();
  Eigen::MatrixXd q(2 * m, 2 * m);
  q.topLeftCorner(m, m) = 0.5 * (s.c + s.ct).real();
  q.topRightCorner(m, m) = 0.5 * (s.ct - s.c).imag();
  q.bottomLeftCorner(m, m) = 0.5 * (s.ct + s.c).imag();
  q.bottomRightCorner(m, m) = 0.5 * (s.c - s.ct).real();
  return q;
}

SisoStrategy real_to_complex(const Eigen::Matrix2d& q) {
  SisoStrategy s;
  s.c = q(0, 0) + q(1, 1);
  const double off = 0.5 * (q(0, 1) + q(1, 0));
  s.ct = cplx(q(0, 0) - q(1, 1), 2.0 * off);
  return s;
}

double interference_ratio(const SisoIcInstance& ic, int user) {
  if (user < 0 || user > 1) throw std::invalid_argument("user index must be 0 or 1");
  const double cross = std::norm(ic.h[user][1 - user]);
  const double direct = std::norm(ic.h[user][user]);
  if (cross == 0.0) return 0.0;
  if (direct == 0.0) return std::numeric_limits<double>::infinity();
  return cross / direct;
}

}  // namespace igs
