#pragma once

// Round-sphere geometry of S^{2n} in a stereographic chart.
//
// Chart conventions: coordinates y in R^{2n}, conformal factor
// rho(y) = 1 + |y|^2/4, metric ds^2 = rho^{-2} sum (dy^i)^2, orthonormal
// frame e_i = rho d/dy^i with dual coframe w^i = dy^i / rho.  The embedding
//   sigma(y) = (4y, 4 - |y|^2) / (4 + |y|^2)        in R^{2n+1}
// realizes the chart isometrically on the unit sphere; ambient vectors are
// padded with a leading zero coordinate so they live in R^{2n+2} alongside
// the distinguished first basis vector.
//
// The Riemannian connection of this metric is
//   grad_{e_i} e_j = -1/2 y^j e_i + 1/2 delta_ij sum_k y^k e_k,
// equivalently w_j^k = -1/2 y^j w^k + 1/2 y^k w^j, and the frame brackets are
// [e_i, e_j] = 1/2 (y^i e_j - y^j e_i).  The curvature tensor is the
// constant-curvature-one model R(X,Y)Z = <Y,Z>X - <X,Z>Y, with the sign
// convention pinned by R(e_1,e_2)e_2 = +e_1.
//
// All indices in this API are 1-based.

#include <Eigen/Dense>

#include <functional>

namespace twistor::spheregeo {

inline constexpr double kChartRadiusMax = 1e3;
inline constexpr double kDefaultFdStep = 1e-5;

// A chart point: n >= 1 and a coordinate vector y of size 2n, |y| bounded.
struct ChartPoint {
  ChartPoint(int n_, Eigen::VectorXd y_);
  int n;
  Eigen::VectorXd y;
};

double rho(const ChartPoint& p);

// Ambient embedding data at a chart point, in R^{2n+2}: e_minus1 is the
// first standard basis vector, e0 = (0, sigma(y)) is the sphere point, and
// frame[l] = (0, rho * d sigma / dy^{l+1}) are orthonormal and orthogonal to
// both e_minus1 and e0.
struct FrameData {
  Eigen::VectorXd e_minus1;
  Eigen::VectorXd e0;
  std::vector<Eigen::VectorXd> frame;  // size 2n

  // Columns e0-orthogonal frame as a (2n+2) x 2n matrix.
  Eigen::MatrixXd frame_matrix() const;
};

FrameData embed(const ChartPoint& p);

// Scalar field on the chart with an optional analytic gradient
// (gradient(y)(k) = d phi / dy^{k+1}); central differences otherwise.
struct ScalarField {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;  // optional
  double fd_step = kDefaultFdStep;

  double operator()(const Eigen::VectorXd& y) const { return value(y); }
  Eigen::VectorXd grad(const Eigen::VectorXd& y) const;
};

// Vector field given by frame components X = sum_l comp^l e_l, with an
// optional analytic Jacobian (jacobian(y)(l,k) = d comp^l / dy^{k+1}).
struct VectorField {
  int n = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> components;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;  // optional
  double fd_step = kDefaultFdStep;

  Eigen::VectorXd operator()(const Eigen::VectorXd& y) const { return components(y); }
  Eigen::MatrixXd jac(const Eigen::VectorXd& y) const;
};

// Constant frame field e_i (1-based).
VectorField frame_field(int n, int i);

// Directional frame derivative e_i phi = rho * d phi / dy^i (1-based i).
double frame_derivative(const ScalarField& phi, const ChartPoint& p, int i);

// Connection coefficient vector of grad_{e_i} e_j at p: the frame components
// of -1/2 y^j e_i + 1/2 delta_ij sum_k y^k e_k (1-based i, j).
Eigen::VectorXd connection_coefficients(const ChartPoint& p, int i, int j);

// Frame bracket [e_i, e_j] = 1/2 (y^i e_j - y^j e_i) as components (1-based).
Eigen::VectorXd frame_bracket(const ChartPoint& p, int i, int j);

// Covariant derivative grad_X Y at p, as frame components.
Eigen::VectorXd covariant_derivative(const VectorField& x, const VectorField& y,
                                     const ChartPoint& p);

// Lie bracket [X, Y] at p, as frame components.
Eigen::VectorXd bracket(const VectorField& x, const VectorField& y,
                        const ChartPoint& p);

// Curvature R(e_i, e_j) e_k at p (1-based indices), computed by
// differentiating the connection-coefficient fields with central differences
// of step h and applying
//   R(X,Y)Z = grad_X grad_Y Z - grad_Y grad_X Z - grad_[X,Y] Z.
Eigen::VectorXd curvature(const ChartPoint& p, int i, int j, int k,
                          double h = 1e-4);

}  // namespace twistor::spheregeo
