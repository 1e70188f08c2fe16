#include "igs/rate_engine.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

namespace igs {
namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kZeroClamp = 1e-15;  // kill -0.0 and representation dust

double clamp_rate(double x) { return std::abs(x) < kZeroClamp ? 0.0 : x; }

double logdet_hpd(const Eigen::MatrixXcd& m) {
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("received covariance not positive definite");
  const Eigen::MatrixXcd l = llt.matrixL();
  return 2.0 * l.diagonal().real().array().log().sum();
}

// (1/2) log det of the augmented matrix [[cov, pcov], [conj(pcov), conj(cov)]]
double half_logdet_augmented(const Eigen::MatrixXcd& cov, const Eigen::MatrixXcd& pcov) {
  const auto n = cov.rows();
  Eigen::MatrixXcd aug(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = cov;
  aug.topRightCorner(n, n) = pcov;
  aug.bottomLeftCorner(n, n) = pcov.conjugate();
  aug.bottomRightCorner(n, n) = cov.conjugate();
  return 0.5 * logdet_hpd(aug);
}

// (1/2) log det(I - inv(cov) pcov inv(conj(cov)) conj(pcov)); the augmented
// log-determinant minus twice the proper one, by the Schur complement.
double improper_term(const Eigen::MatrixXcd& cov, const Eigen::MatrixXcd& pcov) {
  if (pcov.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const auto n = cov.rows();
  Eigen::LLT<Eigen::MatrixXcd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("received covariance not positive definite");
  const Eigen::MatrixXcd a = llt.solve(pcov);
  const Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(n, n) - a * a.conjugate();
  const cplx det = Eigen::PartialPivLU<Eigen::MatrixXcd>(p).determinant();
  if (!(det.real() > 0.0))
    throw std::domain_error("augmented received covariance not positive definite");
  return 0.5 * std::log(det.real());
}

}  // namespace

RateBreakdown RateBreakdown::in_bits() const {
  if (units == RateUnits::bits) return *this;
  return {total / kLn2, proper_part / kLn2, improper_part / kLn2, RateUnits::bits};
}

RateBreakdown RateBreakdown::in_nats() const {
  if (units == RateUnits::nats) return *this;
  return {total * kLn2, proper_part * kLn2, improper_part * kLn2, RateUnits::nats};
}

RateBreakdown siso_rate(const SisoIcInstance& ic, const std::array<SisoStrategy, 2>& tx,
                        int user) {
  if (user < 0 || user > 1) throw std::invalid_argument("user index must be 0 or 1");
  const SisoReceiverStats st = received_stats(ic, tx)[user];
  const double ny = st.cy * st.cy - std::norm(st.cty);
  const double ns = st.cs * st.cs - std::norm(st.cts);
  if (!(ny > 0.0) || !(ns > 0.0))
    throw std::domain_error("augmented received covariance not positive definite");
  RateBreakdown r;
  r.total = clamp_rate(0.5 * std::log(ny / ns));
  r.proper_part = clamp_rate(std::log(st.cy / st.cs));
  const double wy = 1.0 - std::norm(st.cty) / (st.cy * st.cy);
  const double ws = 1.0 - std::norm(st.cts) / (st.cs * st.cs);
  r.improper_part = clamp_rate(0.5 * std::log(wy / ws));
  return r;
}

RateBreakdown mimo_rate(const MimoIcInstance& ic, const std::vector<SignalStrategy>& tx,
                        int user) {
  if (user < 0 || user >= ic.users())
    throw std::invalid_argument("user index out of range");
  const ReceiverStats st = received_stats(ic, tx)[user];
  RateBreakdown r;
  // total goes through the augmented determinants; the parts through their own
  // formulas, so the decomposition identity is a genuine cross-check
  r.total = clamp_rate(half_logdet_augmented(st.cy, st.cty) -
                       half_logdet_augmented(st.cs, st.cts));
  r.proper_part = clamp_rate(logdet_hpd(st.cy) - logdet_hpd(st.cs));
  r.improper_part =
      clamp_rate(improper_term(st.cy, st.cty) - improper_term(st.cs, st.cts));
  return r;
}

std::vector<std::array<double, 2>> rate_region_sample(
    const SisoIcInstance& ic, const std::vector<std::array<SisoStrategy, 2>>& batch) {
  std::vector<std::array<double, 2>> out;
  out.reserve(batch.size());
  for (const auto& tx : batch)
    out.push_back({siso_rate(ic, tx, 0).total, siso_rate(ic, tx, 1).total});
  return out;
}

}  // namespace igs
