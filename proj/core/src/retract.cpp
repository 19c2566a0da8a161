#include "twistor/retract.hpp"

#include <cmath>
#include <stdexcept>

namespace twistor::retract {

namespace {

// f(S) for symmetric S via its eigendecomposition.
template <typename Fn>
Eigen::MatrixXd symmetric_function(const Eigen::MatrixXd& s, Fn&& f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigendecomposition failed");
  }
  Eigen::VectorXd d = eig.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = f(d(i));
  return eig.eigenvectors() * d.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

Decomposition decompose(const matcore::ComplexStructure& a) {
  const Eigen::MatrixXd& m = a.matrix();
  Decomposition d;
  d.a1 = 0.5 * (m - m.transpose());
  d.a2 = 0.5 * (m + m.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(d.a2);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition of the symmetric part failed");
  }
  d.a2_eigenvalues = eig.eigenvalues();

  // P = (I + A2^2)^{1/2} in the eigenbasis of A2; its inverse reuses the
  // same basis, so B = A1 P^{-1} costs one more triple product.
  Eigen::VectorXd sq(d.a2_eigenvalues.size());
  for (Eigen::Index i = 0; i < sq.size(); ++i) {
    sq(i) = std::sqrt(1.0 + d.a2_eigenvalues(i) * d.a2_eigenvalues(i));
  }
  const Eigen::MatrixXd& v = eig.eigenvectors();
  d.p = v * sq.asDiagonal() * v.transpose();
  d.b = d.a1 * (v * sq.cwiseInverse().asDiagonal() * v.transpose());
  return d;
}

Eigen::MatrixXd path(const Decomposition& d, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("deformation parameter must lie in [0, 1]");
  }
  const Eigen::MatrixXd a2sq = d.a2 * d.a2;
  const Eigen::Index k = d.a2.rows();
  const Eigen::MatrixXd pt = symmetric_function(
      Eigen::MatrixXd(Eigen::MatrixXd::Identity(k, k) + t * t * a2sq),
      [](double x) { return std::sqrt(x); });
  return d.b * pt + t * d.a2;
}

matcore::ComplexStructure retract_to_orthogonal(const Eigen::MatrixXd& m,
                                                double skew_tol) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw std::invalid_argument("polar retraction expects square even order");
  }
  const double scale = std::max(1.0, m.norm());
  if ((m + m.transpose()).norm() > skew_tol * scale) {
    throw std::invalid_argument("polar retraction expects a skew matrix");
  }
  const Eigen::MatrixXd gram = m.transpose() * m;  // = -M^2, symmetric
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition of M^t M failed");
  }
  if (eig.eigenvalues().minCoeff() <= 1e-14 * scale * scale) {
    throw std::invalid_argument("polar retraction expects a nonsingular matrix");
  }
  Eigen::VectorXd inv_sqrt = eig.eigenvalues();
  for (Eigen::Index i = 0; i < inv_sqrt.size(); ++i) {
    inv_sqrt(i) = 1.0 / std::sqrt(inv_sqrt(i));
  }
  const Eigen::MatrixXd b = m * (eig.eigenvectors() * inv_sqrt.asDiagonal() *
                                 eig.eigenvectors().transpose());
  return matcore::ComplexStructure(b, /*tol=*/1e-8);
}

}  // namespace twistor::retract
