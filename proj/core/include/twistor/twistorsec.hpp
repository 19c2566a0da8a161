#pragma once

// Sections of the twistor bundle over the sphere, as matrix-valued maps.
//
// A field B on the chart induces the structure
//   f(y) = e0 e_{-1}^t - e_{-1} e0^t + E B E^t     on R^{2n+2},
// where e_{-1} is the first standard basis vector, e0 the embedded sphere
// point, and E the (2n+2) x 2n matrix of frame vectors.  Then f^2 = -I,
// f e_{-1} = e0 (the bundle projection), and f is skew exactly when B is.
//
// Tangent vectors split into a vertical part (fiber motion of the structure)
// and a horizontal lift: for a chart vector X with frame components X^l,
//   f_* X = E (X B + w(X) B - B w(X)) E^t + Xhat,
//   Xhat  = M + f M f,  M = xa e_{-1}^t - e_{-1} xa^t,  xa = E X_f,
// with w(X)_{kj} = (y^k X^j - y^j X^k)/2 the connection matrix and X B the
// directional derivative of B.  The pushforward itself is computed by
// central differences of f along chart lines, so the identity above is an
// independent check rather than the definition.
//
// At points where the frame is adapted to an orthogonal structure (B in
// standard block form) the tangent space of the orthogonal twistor space is
// spanned by explicit rank-4 generators: vertical alpha_ij, beta_ij
// (1 <= i < j <= n) and horizontal xt_l (1 <= l <= 2n) with f alpha = beta,
// f xt_{2i-1} = xt_{2i}, and projection xt_l e_{-1} = frame vector l.
//
// A section is holomorphic at (y, l) when J~(f_* e_l) = f_*(J e_l), i.e. the
// residual f (f_* e_l) - f_*(sum_k B_{kl} e_k) vanishes; this happens exactly
// when the field is orthogonal and integrable.

#include <Eigen/Dense>

#include "twistor/acsfield.hpp"
#include "twistor/spheregeo.hpp"

namespace twistor::twistorsec {

struct SectionValue {
  Eigen::MatrixXd f;        // (2n+2) x (2n+2), f^2 = -I
  spheregeo::FrameData frame;
  Eigen::MatrixXd b;        // field value at the point
  bool orthogonal = false;
};

// Evaluate the induced section at a chart point.
SectionValue embed_section(const acsfield::ACSField& field,
                           const spheregeo::ChartPoint& p);

// Orthonormal-frame data adapted to a skew orthogonal structure A on
// R^{2n+2}: e_minus1 is the first standard basis vector, e0 = A e_minus1,
// and the frame spans their orthogonal complement with A acting in standard
// block form on it.
spheregeo::FrameData build_adapted_frame(const Eigen::MatrixXd& a,
                                         double tol = 1e-9);

struct AdaptedGenerators {
  std::vector<Eigen::MatrixXd> alpha;  // vertical, pairs i<j
  std::vector<Eigen::MatrixXd> beta;   // vertical, pairs i<j
  std::vector<Eigen::MatrixXd> xt;     // horizontal, l = 1..2n
};

// Tangent generators at an adapted point.  The section's B must be in
// standard block form within tol (orthogonal, adapted frame).
AdaptedGenerators adapted_generators(const SectionValue& sv, double tol = 1e-8);

// Same generators from a bare skew orthogonal structure via its adapted frame.
AdaptedGenerators adapted_generators(const spheregeo::FrameData& frame);

// Horizontal lift Xhat = M + f M f of the chart vector with frame components
// x (size 2n).
Eigen::MatrixXd horizontal_lift(const SectionValue& sv, const Eigen::VectorXd& x);

// Pushforward f_* X by central differences of the section along the chart
// line through p with velocity rho(p) * x (frame components x).
Eigen::MatrixXd pushforward(const acsfield::ACSField& field,
                            const spheregeo::ChartPoint& p,
                            const Eigen::VectorXd& x, double h = 1e-5);
Eigen::MatrixXd pushforward(const acsfield::ACSField& field,
                            const spheregeo::ChartPoint& p, int l,
                            double h = 1e-5);

// Vertical part E (X B + w(X) B - B w(X)) E^t of f_* X.
Eigen::MatrixXd vertical_part(const acsfield::ACSField& field,
                              const spheregeo::ChartPoint& p,
                              const Eigen::VectorXd& x);

struct TangentSplit {
  Eigen::MatrixXd vertical;    // annihilates e_{-1}
  Eigen::MatrixXd horizontal;  // maps e_{-1} to the pushed sphere vector
};

// Closed-form split of f_* X into vertical + horizontal.
TangentSplit split(const acsfield::ACSField& field, const spheregeo::ChartPoint& p,
                   const Eigen::VectorXd& x);

// || f (f_* e_l) - f_* (J e_l) ||: the holomorphy defect in direction l.
double holomorphy_residual(const acsfield::ACSField& field,
                           const spheregeo::ChartPoint& p, int l, double h = 1e-5);

// || pi_*( J~ f_* X ) - (J X at p) || where pi_* Z = Z e_{-1}: the projected
// twisted pushforward reproduces J of the sphere vector for every section.
double projected_structure_residual(const acsfield::ACSField& field,
                                    const spheregeo::ChartPoint& p,
                                    const Eigen::VectorXd& x, double h = 1e-5);

}  // namespace twistor::twistorsec
