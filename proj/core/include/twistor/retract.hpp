#pragma once

// Retraction of a general complex structure onto the orthogonal ones.
//
// Every A with A^2 = -I splits as A = A1 + A2 into skew and symmetric parts
// satisfying A1^2 + A2^2 = -I and A1 A2 + A2 A1 = 0.  The skew part factors
// as A1 = B P with B skew-orthogonal (B^2 = -I) and
// P = (I + A2^2)^{1/2} symmetric positive definite; B, P, and A2 commute
// pairwise up to the stated anticommutations.  Deforming the symmetric part,
//   A(t) = B (I + t^2 A2^2)^{1/2} + t A2,
// stays inside the space of complex structures, joins B = A(0) to A = A(1),
// and exhibits the orthogonal structures as a deformation retract.

#include <Eigen/Dense>

#include "twistor/matcore.hpp"

namespace twistor::retract {

struct Decomposition {
  Eigen::MatrixXd a1;           // skew part (A - A^t)/2
  Eigen::MatrixXd a2;           // symmetric part (A + A^t)/2
  Eigen::MatrixXd b;            // skew-orthogonal polar factor of A1
  Eigen::MatrixXd p;            // (I + A2^2)^{1/2}, symmetric positive definite
  Eigen::VectorXd a2_eigenvalues;  // spectrum of A2 (sorted ascending)
};

// Split A and compute the polar data.  Throws if A is not a complex
// structure within tol.
Decomposition decompose(const matcore::ComplexStructure& a);

// Point of the deformation path at parameter t (t=1 gives A, t=0 gives B).
Eigen::MatrixXd path(const Decomposition& d, double t);

// Polar retraction M -> M (M^t M)^{-1/2} for skew nonsingular M; the result
// is skew-orthogonal with square -I.  Throws on non-skew or singular input.
matcore::ComplexStructure retract_to_orthogonal(const Eigen::MatrixXd& m,
                                                double skew_tol = 1e-8);

}  // namespace twistor::retract
