#include "igs/widely_linear.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace igs {
namespace {

constexpr double kEigClampTol = 1e-9;

}  // namespace

Eigen::MatrixXcd augmented_unitary(int m) {
  if (m <= 0) throw std::invalid_argument("dimension must be positive");
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  t.topLeftCorner(m, m) = s * Eigen::MatrixXcd::Identity(m, m);
  t.topRightCorner(m, m) = cplx(0.0, s) * Eigen::MatrixXcd::Identity(m, m);
  t.bottomLeftCorner(m, m) = s * Eigen::MatrixXcd::Identity(m, m);
  t.bottomRightCorner(m, m) = cplx(0.0, -s) * Eigen::MatrixXcd::Identity(m, m);
  return t;
}

WidelyLinearFactor augmented_sqrt(const SignalStrategy& s) {
  augmented_covariance(s);  // shape, hermiticity, symmetry checks
  // real composite form of the augmented covariance: congruence by the
  // augmented unitary gives [[Re(c + ct), Im(ct - c)], [Im(ct + c), Re(c - ct)]],
  // real symmetric with the same eigenvalues
  const auto m = s.c.rows();
  Eigen::MatrixXd g(2 * m, 2 * m);
  g.topLeftCorner(m, m) = (s.c + s.ct).real();
  g.topRightCorner(m, m) = (s.ct - s.c).imag();
  g.bottomLeftCorner(m, m) = (s.ct + s.c).imag();
  g.bottomRightCorner(m, m) = (s.c - s.ct).real();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success)
    throw std::invalid_argument("eigendecomposition of the composite form failed");

  Eigen::VectorXd lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < -kEigClampTol)
      throw std::invalid_argument("augmented covariance not positive semidefinite");
    if (lam[i] < 0.0) lam[i] = 0.0;
  }

  WidelyLinearFactor w;
  // descending order
  w.eig = lam.reverse();
  w.basis = es.eigenvectors().rowwise().reverse();
  // symmetric square root: basis-invariant, and for a proper strategy it
  // inherits the composite rotation structure so b2 vanishes identically
  const Eigen::MatrixXd sqrt_g =
      w.basis * w.eig.cwiseSqrt().asDiagonal() * w.basis.transpose();

  // rotate back: blocks of T W T^H give the filter pair
  const Eigen::MatrixXd w11 = sqrt_g.topLeftCorner(m, m);
  const Eigen::MatrixXd w12 = sqrt_g.topRightCorner(m, m);
  const Eigen::MatrixXd w21 = sqrt_g.bottomLeftCorner(m, m);
  const Eigen::MatrixXd w22 = sqrt_g.bottomRightCorner(m, m);
  w.b1 = 0.5 * ((w11 + w22).cast<cplx>() + cplx(0.0, 1.0) * (w21 - w12).cast<cplx>());
  w.b2 = 0.5 * ((w11 - w22).cast<cplx>() + cplx(0.0, 1.0) * (w21 + w12).cast<cplx>());
  return w;
}

Eigen::VectorXcd precode(const WidelyLinearFactor& w, const Eigen::VectorXcd& d) {
  if (d.size() != w.b1.cols())
    throw std::invalid_argument("symbol vector dimension mismatch");
  return w.b1 * d + w.b2 * d.conjugate();
}

Eigen::MatrixXd real_representation(const WidelyLinearFactor& w) {
  const auto m = w.b1.rows();
  Eigen::MatrixXd r(2 * m, 2 * m);
  r.topLeftCorner(m, m) = (w.b1 + w.b2).real();
  r.topRightCorner(m, m) = (w.b2 - w.b1).imag();
  r.bottomLeftCorner(m, m) = (w.b2 + w.b1).imag();
  r.bottomRightCorner(m, m) = (w.b1 - w.b2).real();
  return r;
}

Eigen::MatrixXcd sample_improper(const WidelyLinearFactor& w, int n, Rng& rng) {
  if (n < 0) throw std::invalid_argument("sample count must be nonnegative");
  const auto m = w.b1.rows();
  Eigen::MatrixXcd out(m, n);
  Eigen::VectorXcd d(m);
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) d[j] = rng.cnormal(1.0);
    out.col(i) = w.b1 * d + w.b2 * d.conjugate();
  }
  return out;
}

}  // namespace igs
