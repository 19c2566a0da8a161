#include "twistor/matcore.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace twistor::matcore {

namespace {

void require_square_even(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  if (m.rows() % 2 != 0 || m.rows() == 0) {
    throw std::invalid_argument("matrix order must be even and positive");
  }
}

double membership(const Eigen::MatrixXd& m) {
  const Eigen::Index k = m.rows();
  return (m * m + Eigen::MatrixXd::Identity(k, k)).norm();
}

}  // namespace

ComplexStructure::ComplexStructure(Eigen::MatrixXd entries, double tol)
    : a_(std::move(entries)) {
  require_square_even(a_);
  residual_ = membership(a_);
  if (!(residual_ <= tol)) {
    throw std::invalid_argument("matrix does not square to -I within tolerance");
  }
  orthogonal_ = (a_ + a_.transpose()).norm() <= tol;
}

TangentMatrix::TangentMatrix(ComplexStructure base, Eigen::MatrixXd entries,
                             bool normal, double tol)
    : base_(std::move(base)), x_(std::move(entries)), normal_(normal) {
  if (x_.rows() != base_.order() || x_.cols() != base_.order()) {
    throw std::invalid_argument("tangent entries must match base order");
  }
  const Eigen::MatrixXd& a = base_.matrix();
  const double defect =
      normal_ ? (a * x_ - x_ * a).norm() : (a * x_ + x_ * a).norm();
  const double scale = std::max(1.0, x_.norm());
  if (!(defect <= tol * scale)) {
    throw std::invalid_argument(normal_
                                    ? "matrix does not commute with the base"
                                    : "matrix does not anticommute with the base");
  }
}

ComplexStructure make_standard_j0(Eigen::Index order) {
  if (order % 2 != 0 || order <= 0) {
    throw std::invalid_argument("standard structure needs positive even order");
  }
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(order, order);
  for (Eigen::Index i = 0; i < order; i += 2) {
    j(i, i + 1) = -1.0;
    j(i + 1, i) = 1.0;
  }
  return ComplexStructure(std::move(j));
}

bool is_complex_structure(const Eigen::MatrixXd& m, double tol) {
  require_square_even(m);
  return membership(m) <= tol;
}

TangentMatrix tangent_project(const ComplexStructure& a, const Eigen::MatrixXd& m) {
  if (m.rows() != a.order() || m.cols() != a.order()) {
    throw std::invalid_argument("projection input must match base order");
  }
  const Eigen::MatrixXd& j = a.matrix();
  return TangentMatrix(a, 0.5 * (m + j * m * j), /*normal=*/false,
                       /*tol=*/1e-6);
}

TangentMatrix normal_project(const ComplexStructure& a, const Eigen::MatrixXd& m) {
  if (m.rows() != a.order() || m.cols() != a.order()) {
    throw std::invalid_argument("projection input must match base order");
  }
  const Eigen::MatrixXd& j = a.matrix();
  return TangentMatrix(a, 0.5 * (m - j * m * j), /*normal=*/true,
                       /*tol=*/1e-6);
}

double ambient_inner(const ComplexStructure& a, const Eigen::MatrixXd& x,
                     const Eigen::MatrixXd& y) {
  const Eigen::MatrixXd& j = a.matrix();
  // A^{-1} = -A, so A X A^{-1} = -A X A; the sign cancels in the pairing.
  const Eigen::MatrixXd xc = j * x * j;
  const Eigen::MatrixXd yc = j * y * j;
  return 0.5 * (x.cwiseProduct(y).sum() + xc.cwiseProduct(yc).sum());
}

double ds2(const ComplexStructure& a, const TangentMatrix& x, const TangentMatrix& y) {
  if (x.base().matrix() != a.matrix() || y.base().matrix() != a.matrix()) {
    throw std::invalid_argument("ds2 arguments must share the base point");
  }
  if (x.is_normal() || y.is_normal()) {
    throw std::invalid_argument("ds2 is defined on tangent vectors");
  }
  const Eigen::MatrixXd& j = a.matrix();
  return 0.5 * ambient_inner(a, x.matrix(), y.matrix()) +
         0.5 * ambient_inner(a, j * x.matrix(), j * y.matrix());
}

TangentMatrix jtilde_apply(const ComplexStructure& a, const TangentMatrix& x) {
  if (x.base().matrix() != a.matrix()) {
    throw std::invalid_argument("tangent vector belongs to a different base");
  }
  if (x.is_normal()) {
    throw std::invalid_argument("J acts on tangent vectors, not normal ones");
  }
  return TangentMatrix(a, a.matrix() * x.matrix());
}

TangentMatrix covariant_derivative_along(const MatrixCurve& curve,
                                         const MatrixField& field, double s,
                                         double h, double membership_tol) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  const Eigen::MatrixXd at = curve(s);
  ComplexStructure base(at, /*tol=*/membership_tol);
  for (double sh : {s - h, s + h}) {
    const Eigen::MatrixXd near = curve(sh);
    if (membership(near) > membership_tol) {
      throw std::invalid_argument(
          "step too large: curve leaves the manifold at the stencil");
    }
  }
  const Eigen::MatrixXd deriv = (field(s + h) - field(s - h)) / (2.0 * h);
  return tangent_project(base, deriv);
}

double gaussian(std::mt19937_64& rng) {
  // Box-Muller on the raw engine output; avoids std::normal_distribution so
  // streams are identical across standard libraries.
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  double u1 = 0.0;
  do {
    u1 = static_cast<double>(rng() >> 11) * kScale;
  } while (u1 <= 0.0);
  const double u2 = static_cast<double>(rng() >> 11) * kScale;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::MatrixXd random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                       std::mt19937_64& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gaussian(rng);
  return m;
}

Eigen::MatrixXd random_skew_matrix(Eigen::Index order, std::mt19937_64& rng) {
  const Eigen::MatrixXd g = random_gaussian_matrix(order, order, rng);
  return 0.5 * (g - g.transpose());
}

ComplexStructure random_complex_structure(Eigen::Index order, std::mt19937_64& rng) {
  const Eigen::MatrixXd j0 = make_standard_j0(order).matrix();
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Eigen::MatrixXd g = random_gaussian_matrix(order, order, rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > 1e2) continue;  // keep conditioning tame
    const Eigen::MatrixXd a = g * j0 * g.inverse();
    if (membership(a) <= kMembershipTol) return ComplexStructure(a);
  }
  throw std::runtime_error("failed to sample a well-conditioned structure");
}

ComplexStructure random_orthogonal_structure(Eigen::Index order,
                                             std::mt19937_64& rng) {
  const Eigen::MatrixXd g = random_gaussian_matrix(order, order, rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  // Fix the sign convention of the QR factor so Q is a deterministic
  // function of g.
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < order; ++i) {
    if (r(i, i) < 0.0) q.col(i) *= -1.0;
  }
  const Eigen::MatrixXd j0 = make_standard_j0(order).matrix();
  return ComplexStructure(q * j0 * q.transpose());
}

TangentMatrix random_tangent(const ComplexStructure& a, std::mt19937_64& rng,
                             bool skew) {
  const Eigen::MatrixXd seed = skew ? random_skew_matrix(a.order(), rng)
                                    : random_gaussian_matrix(a.order(), a.order(), rng);
  TangentMatrix t = tangent_project(a, seed);
  const double norm = t.matrix().norm();
  if (norm < 1e-12) throw std::runtime_error("degenerate random tangent");
  return TangentMatrix(a, t.matrix() / norm);
}

}  // namespace twistor::matcore
