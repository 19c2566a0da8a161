#pragma once

// Almost complex structure fields on the sphere chart and their
// integrability obstructions.
//
// A field assigns to each chart point a matrix B(y) with B^2 = -I acting on
// frame components: J e_i = sum_j e_j B_{ji}.  Directional derivatives of B
// are analytic when the construction provides them and fall back to central
// differences otherwise.
//
// The Nijenhuis tensor is computed two independent ways:
//   direct:  N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] via chart brackets;
//   formula: N(e_i,e_j) = sum_k e_k [ (Je_i)B_{kj} - (Je_j)B_{ki} ]
//                       - sum_k Je_k [ e_i B_{kj} - e_j B_{ki} ].
// Two equivalent residual forms detect integrability:
//   (1) sum_k e_k  [ e_i B_{kj} - e_j B_{ki} ]
//     + sum_k Je_k [ (Je_i)B_{kj} - (Je_j)B_{ki} ]   (any field; equals J.N),
//   (2) sum_k e_k (e_i B_{kj}) + sum_k Je_k ((Je_i)B_{kj})   (orthogonal
//       fields only).
// For fields of (1,0) type X_i = e_i - sqrt(-1) J e_i the closed forms for
// grad_{X_i} X_j and [X_i, X_j] are implemented next to direct cross-checks;
// the symmetry defect ||grad_{X_i}X_j + grad_{X_j}X_i|| is generally nonzero
// even for constant orthogonal fields.
//
// Indices are 1-based.

#include <Eigen/Dense>
#include <json.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>

#include "twistor/spheregeo.hpp"

namespace twistor::acsfield {

inline constexpr double kFieldMembershipTol = 1e-9;

class ACSField {
 public:
  // General constructor from closures.  `partial`, when given, returns
  // dB/dy^k for 1-based k; otherwise derivatives use central differences.
  ACSField(int n,
           std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> value,
           std::function<Eigen::MatrixXd(const Eigen::VectorXd&, int)> partial,
           bool orthogonal, double fd_step = spheregeo::kDefaultFdStep);

  int n() const { return n_; }
  bool orthogonal() const { return orthogonal_; }
  double fd_step() const { return fd_step_; }

  // Value at y; validates B^2 = -I (and skewness when flagged orthogonal).
  Eigen::MatrixXd evaluate(const Eigen::VectorXd& y) const;

  // dB/dy^k at y (1-based k), analytic or central-difference.
  Eigen::MatrixXd partial(const Eigen::VectorXd& y, int k) const;

  // J e_i as a chart vector field (components = column i of B).
  spheregeo::VectorField j_frame_field(int i) const;

  // Image of a components vector under J at y.
  Eigen::VectorXd apply(const Eigen::VectorXd& y, const Eigen::VectorXd& v) const;

 private:
  int n_;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> value_;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, int)> partial_;
  bool orthogonal_;
  double fd_step_;
};

// Constant field B(y) = B0.  Rejects matrices with B0^2 != -I.
ACSField make_constant_field(const Eigen::MatrixXd& b0);

// Rotated field B(y) = R(y) B0 R(y)^t with R(y) = exp(scale * sum_k y^k S_k).
// Requires skew-orthogonal B0 and skew S_k (one generator per coordinate);
// derivatives are analytic via the Frechet derivative of the exponential.
ACSField make_rotated_field(const Eigen::MatrixXd& b0,
                            const std::vector<Eigen::MatrixXd>& s, double scale);

// Serializable construction recipe for sweeps.
struct FieldSpec {
  std::string kind;  // "constant" | "rotated"
  int n = 0;
  Eigen::MatrixXd b0;
  std::vector<Eigen::MatrixXd> s;  // rotated only
  double scale = 0.0;              // rotated only
  std::uint64_t seed = 0;          // provenance of the random draw

  nlohmann::ordered_json to_json() const;
  static FieldSpec from_json(const nlohmann::json& j);
  ACSField build() const;
};

// Nijenhuis tensor N(e_i, e_j) by brackets of the four involved fields.
Eigen::VectorXd nijenhuis_direct(const ACSField& field,
                                 const spheregeo::ChartPoint& p, int i, int j);

// Nijenhuis tensor by the closed derivative formula.
Eigen::VectorXd nijenhuis_formula(const ACSField& field,
                                  const spheregeo::ChartPoint& p, int i, int j);

struct IntegrabilityResidual {
  Eigen::VectorXd general;                   // form (1), any field
  std::optional<Eigen::VectorXd> orthogonal;  // form (2), orthogonal fields
};

// Both residual forms at (p, i, j); form (2) is present only when the field
// is orthogonal.
IntegrabilityResidual integrability_residual(const ACSField& field,
                                             const spheregeo::ChartPoint& p,
                                             int i, int j);

using ComplexVec = Eigen::VectorXcd;

// Closed form of [X_i, X_j] for X_i = e_i - sqrt(-1) J e_i, as complex frame
// components; `direct` cross-computes it from real chart brackets.
ComplexVec bracket10_formula(const ACSField& field, const spheregeo::ChartPoint& p,
                             int i, int j);
ComplexVec bracket10_direct(const ACSField& field, const spheregeo::ChartPoint& p,
                            int i, int j);

// Closed form of grad_{X_i} X_j (complex frame components), and the direct
// route through the chart covariant derivative.
ComplexVec covderiv10_formula(const ACSField& field, const spheregeo::ChartPoint& p,
                              int i, int j);
ComplexVec covderiv10_direct(const ACSField& field, const spheregeo::ChartPoint& p,
                             int i, int j);

// || grad_{X_i} X_j + grad_{X_j} X_i || for an orthogonal field: the defect
// of the would-be symmetry of (1,0) covariant derivatives.
double covderiv10_symmetry_defect(const ACSField& field,
                                  const spheregeo::ChartPoint& p, int i, int j);

}  // namespace twistor::acsfield
