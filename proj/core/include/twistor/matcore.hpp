#pragma once

// Twistor space of linear complex structures, as a matrix manifold.
//
// The space J(R^{2n}) consists of the real 2n x 2n matrices A with A^2 = -I.
// Its tangent space at A is { X : AX + XA = 0 }, the normal space is
// { Y : AY - YA = 0 }, and (M -/+ A M A)/2 project onto them.  The subspace of
// skew-symmetric A (equivalently orthogonal A) is the orthogonal twistor
// space; on its tangent vectors the ambient inner product reduces to the
// Frobenius pairing tr(X Y^t).
//
// Conventions: matrices are dense doubles; the standard structure J0 is
// block-diagonal with 2x2 blocks [[0,-1],[1,0]], so J0 maps basis vector
// e_{2i-1} to e_{2i}.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>

namespace twistor::matcore {

inline constexpr double kMembershipTol = 1e-9;

// A point of J(R^{2n}): square matrix of even order with A^2 = -I within tol.
// Construction validates membership and records whether the structure is
// orthogonal (A^t = -A within tol).
class ComplexStructure {
 public:
  explicit ComplexStructure(Eigen::MatrixXd entries, double tol = kMembershipTol);

  const Eigen::MatrixXd& matrix() const { return a_; }
  Eigen::Index order() const { return a_.rows(); }
  bool orthogonal() const { return orthogonal_; }
  double membership_residual() const { return residual_; }

 private:
  Eigen::MatrixXd a_;
  double residual_ = 0.0;
  bool orthogonal_ = false;
};

// A tangent (AX + XA = 0) or, with normal = true, normal (AY - YA = 0) vector
// at a fixed base point.  Construction validates the defining equation.
class TangentMatrix {
 public:
  TangentMatrix(ComplexStructure base, Eigen::MatrixXd entries,
                bool normal = false, double tol = kMembershipTol);

  const ComplexStructure& base() const { return base_; }
  const Eigen::MatrixXd& matrix() const { return x_; }
  bool is_normal() const { return normal_; }

 private:
  ComplexStructure base_;
  Eigen::MatrixXd x_;
  bool normal_;
};

// Block-diagonal standard structure on R^{2n} (order = 2n, even, >= 2).
ComplexStructure make_standard_j0(Eigen::Index order);

// True when ||M^2 + I||_F <= tol.  Throws on non-square or odd order.
bool is_complex_structure(const Eigen::MatrixXd& m, double tol = kMembershipTol);

// Tangent / normal projections (M -/+ AMA)/2 at base A.
TangentMatrix tangent_project(const ComplexStructure& a, const Eigen::MatrixXd& m);
TangentMatrix normal_project(const ComplexStructure& a, const Eigen::MatrixXd& m);

// Inner product on matrices anchored at base A:
//   <X,Y> = tr(X Y^t)/2 + tr( A X A^{-1} (A Y A^{-1})^t )/2,  A^{-1} = -A.
// Symmetric and positive definite; tangent and normal spaces are orthogonal
// under it, and on a pair of tangent vectors it equals tr(X Y^t).
double ambient_inner(const ComplexStructure& a, const Eigen::MatrixXd& x,
                     const Eigen::MatrixXd& y);

// Riemannian metric ds^2(X,Y) = <X,Y>/2 + <AX, AY>/2 on tangent vectors.
// Invariant under X -> AX by construction; equals tr(X Y^t) when A is
// orthogonal.  Throws if the two tangent vectors sit at different bases.
double ds2(const ComplexStructure& a, const TangentMatrix& x, const TangentMatrix& y);

// The almost complex structure of the twistor space itself: X -> AX.
// Rejects normal-flagged input and base mismatch.
TangentMatrix jtilde_apply(const ComplexStructure& a, const TangentMatrix& x);

// A curve of structures and a matrix field along it.
using MatrixCurve = std::function<Eigen::MatrixXd(double)>;
using MatrixField = std::function<Eigen::MatrixXd(double)>;

// Covariant derivative of `field` along `curve` at parameter s: tangent
// projection at curve(s) of the central difference of the field.
// The curve must stay on the manifold at the stencil points (membership
// within `membership_tol`), otherwise the step h is rejected as too large.
TangentMatrix covariant_derivative_along(const MatrixCurve& curve,
                                         const MatrixField& field, double s,
                                         double h = 1e-5,
                                         double membership_tol = 1e-6);

// --- seeded random generators (all randomness flows through the caller's
// engine; Gaussian samples use an engine-stable Box-Muller transform) -------

double gaussian(std::mt19937_64& rng);
Eigen::MatrixXd random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                       std::mt19937_64& rng);
Eigen::MatrixXd random_skew_matrix(Eigen::Index order, std::mt19937_64& rng);

// Conjugate g J0 g^{-1}; g is resampled until it is well conditioned.
ComplexStructure random_complex_structure(Eigen::Index order, std::mt19937_64& rng);

// Haar-ish orthogonal conjugate Q J0 Q^t (skew, orthogonal).
ComplexStructure random_orthogonal_structure(Eigen::Index order, std::mt19937_64& rng);

// Random tangent vector at A; with skew = true the result is also
// skew-symmetric (tangent to the orthogonal twistor space when A is skew).
TangentMatrix random_tangent(const ComplexStructure& a, std::mt19937_64& rng,
                             bool skew = false);

}  // namespace twistor::matcore
