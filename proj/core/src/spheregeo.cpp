#include "twistor/spheregeo.hpp"

#include <stdexcept>

namespace twistor::spheregeo {

ChartPoint::ChartPoint(int n_, Eigen::VectorXd y_) : n(n_), y(std::move(y_)) {
  if (n < 1) throw std::invalid_argument("chart dimension needs n >= 1");
  if (y.size() != 2 * n) throw std::invalid_argument("chart point needs 2n coordinates");
  if (!y.allFinite() || y.norm() >= kChartRadiusMax) {
    throw std::invalid_argument("chart point outside the working radius");
  }
}

double rho(const ChartPoint& p) { return 1.0 + 0.25 * p.y.squaredNorm(); }

Eigen::MatrixXd FrameData::frame_matrix() const {
  Eigen::MatrixXd e(e0.size(), static_cast<Eigen::Index>(frame.size()));
  for (std::size_t l = 0; l < frame.size(); ++l) {
    e.col(static_cast<Eigen::Index>(l)) = frame[l];
  }
  return e;
}

FrameData embed(const ChartPoint& p) {
  const int m = 2 * p.n;
  const double r = rho(p);
  const double denom = 4.0 * r;  // = 4 + |y|^2

  FrameData f;
  f.e_minus1 = Eigen::VectorXd::Zero(m + 2);
  f.e_minus1(0) = 1.0;

  f.e0 = Eigen::VectorXd::Zero(m + 2);
  for (int i = 0; i < m; ++i) f.e0(1 + i) = 4.0 * p.y(i) / denom;
  f.e0(m + 1) = (4.0 - p.y.squaredNorm()) / denom;

  // rho * d sigma / dy^l: first block rho*(delta_ml/r - y_m y_l/(2 r^2)),
  // last coordinate rho * (-y_l / r^2) = -y_l / r.
  f.frame.resize(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m + 2);
    for (int mm = 0; mm < m; ++mm) {
      v(1 + mm) = (mm == l ? 1.0 : 0.0) - 0.5 * p.y(mm) * p.y(l) / r;
    }
    v(m + 1) = -p.y(l) / r;
    f.frame[static_cast<std::size_t>(l)] = v;
  }
  return f;
}

Eigen::VectorXd ScalarField::grad(const Eigen::VectorXd& y) const {
  if (gradient) return gradient(y);
  Eigen::VectorXd g(y.size());
  Eigen::VectorXd yp = y, ym = y;
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    yp(k) += fd_step;
    ym(k) -= fd_step;
    g(k) = (value(yp) - value(ym)) / (2.0 * fd_step);
    yp(k) = y(k);
    ym(k) = y(k);
  }
  return g;
}

Eigen::MatrixXd VectorField::jac(const Eigen::VectorXd& y) const {
  if (jacobian) return jacobian(y);
  const Eigen::Index m = y.size();
  Eigen::MatrixXd j(m, m);
  Eigen::VectorXd yp = y, ym = y;
  for (Eigen::Index k = 0; k < m; ++k) {
    yp(k) += fd_step;
    ym(k) -= fd_step;
    j.col(k) = (components(yp) - components(ym)) / (2.0 * fd_step);
    yp(k) = y(k);
    ym(k) = y(k);
  }
  return j;
}

VectorField frame_field(int n, int i) {
  if (i < 1 || i > 2 * n) throw std::invalid_argument("frame index out of range");
  const int m = 2 * n;
  VectorField f;
  f.n = n;
  f.components = [m, i](const Eigen::VectorXd&) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(m);
    c(i - 1) = 1.0;
    return c;
  };
  f.jacobian = [m](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(m, m); };
  return f;
}

double frame_derivative(const ScalarField& phi, const ChartPoint& p, int i) {
  if (i < 1 || i > 2 * p.n) throw std::invalid_argument("frame index out of range");
  return rho(p) * phi.grad(p.y)(i - 1);
}

Eigen::VectorXd connection_coefficients(const ChartPoint& p, int i, int j) {
  const int m = 2 * p.n;
  if (i < 1 || i > m || j < 1 || j > m) {
    throw std::invalid_argument("connection indices out of range");
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(m);
  c(i - 1) -= 0.5 * p.y(j - 1);
  if (i == j) c += 0.5 * p.y;
  return c;
}

Eigen::VectorXd frame_bracket(const ChartPoint& p, int i, int j) {
  const int m = 2 * p.n;
  if (i < 1 || i > m || j < 1 || j > m) {
    throw std::invalid_argument("bracket indices out of range");
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(m);
  c(j - 1) += 0.5 * p.y(i - 1);
  c(i - 1) -= 0.5 * p.y(j - 1);
  return c;
}

Eigen::VectorXd covariant_derivative(const VectorField& x, const VectorField& y,
                                     const ChartPoint& p) {
  const int m = 2 * p.n;
  const Eigen::VectorXd xv = x(p.y);
  const Eigen::VectorXd yv = y(p.y);
  if (xv.size() != m || yv.size() != m) {
    throw std::invalid_argument("field dimension mismatch");
  }
  // grad_X Y = sum_j X(Y^j) e_j + sum_{l,j} X^l Y^j grad_{e_l} e_j, where
  // X(Y^j) = rho * sum_l X^l dY^j/dy^l.
  const Eigen::MatrixXd jy = y.jac(p.y);
  Eigen::VectorXd out = rho(p) * (jy * xv);
  // Connection part: sum_l X^l [ -1/2 y^j-weighted e_l + diag term ].
  // Expanded: -1/2 (y . Y) X + 1/2 (X . Y) y   in frame components.
  out += -0.5 * p.y.dot(yv) * xv + 0.5 * xv.dot(yv) * p.y;
  return out;
}

Eigen::VectorXd bracket(const VectorField& x, const VectorField& y,
                        const ChartPoint& p) {
  const Eigen::VectorXd xv = x(p.y);
  const Eigen::VectorXd yv = y(p.y);
  const Eigen::MatrixXd jx = x.jac(p.y);
  const Eigen::MatrixXd jy = y.jac(p.y);
  // [X,Y]^k = rho (X^l dY^k/dy^l - Y^l dX^k/dy^l) + sum X^l Y^m [e_l,e_m]^k,
  // and the frame brackets contract to 1/2 ((y.X) Y - (y.Y) X).
  Eigen::VectorXd out = rho(p) * (jy * xv - jx * yv);
  out += 0.5 * (p.y.dot(xv) * yv - p.y.dot(yv) * xv);
  return out;
}

Eigen::VectorXd curvature(const ChartPoint& p, int i, int j, int k, double h) {
  const int m = 2 * p.n;
  if (i < 1 || i > m || j < 1 || j > m || k < 1 || k > m) {
    throw std::invalid_argument("curvature indices out of range");
  }
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  const int n = p.n;
  auto nabla_field = [n, k, h](int a, int b) {
    VectorField f;
    f.n = n;
    f.fd_step = h;
    f.components = [n, a, b](const Eigen::VectorXd& y) {
      return connection_coefficients(ChartPoint(n, y), a, b);
    };
    return f;
  };
  const VectorField ei = frame_field(p.n, i);
  const VectorField ej = frame_field(p.n, j);
  const VectorField njk = nabla_field(j, k);
  const VectorField nik = nabla_field(i, k);

  Eigen::VectorXd out = covariant_derivative(ei, njk, p);
  out -= covariant_derivative(ej, nik, p);
  // grad_{[e_i,e_j]} e_k with [e_i,e_j] = 1/2 (y^i e_j - y^j e_i); the lower
  // slot is tensorial, so contract the closed-form coefficients directly.
  out -= 0.5 * p.y(i - 1) * connection_coefficients(p, j, k);
  out += 0.5 * p.y(j - 1) * connection_coefficients(p, i, k);
  return out;
}

}  // namespace twistor::spheregeo
