#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "twistor/matcore.hpp"
#include "twistor/spheregeo.hpp"

using namespace twistor;

namespace {

// Christoffel symbols of the conformal chart metric delta_ij / rho^2 by
// central differences of the metric alone; converted to frame components
// this is an oracle for connection_coefficients that never touches the
// library's closed form.
Eigen::VectorXd frame_connection_from_metric(const spheregeo::ChartPoint& p,
                                             int i, int j) {
  const Eigen::Index m = p.y.size();
  const double h = 1e-5;
  auto metric = [](const Eigen::VectorXd& y) {
    const double rho = 1.0 + 0.25 * y.squaredNorm();
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(y.size(), y.size()) /
                           (rho * rho));
  };
  auto dmetric = [&](int k) {
    Eigen::VectorXd yp = p.y, ym = p.y;
    yp(k - 1) += h;
    ym(k - 1) -= h;
    return Eigen::MatrixXd((metric(yp) - metric(ym)) / (2.0 * h));
  };
  const double rho = 1.0 + 0.25 * p.y.squaredNorm();
  const Eigen::MatrixXd ginv =
      Eigen::MatrixXd::Identity(m, m) * rho * rho;
  const Eigen::MatrixXd di = dmetric(i);
  const Eigen::MatrixXd dj = dmetric(j);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  for (int k = 1; k <= m; ++k) {
    double gamma = 0.0;
    for (int l = 1; l <= m; ++l) {
      gamma += 0.5 * ginv(k - 1, l - 1) *
               (di(j - 1, l - 1) + dj(i - 1, l - 1) - dmetric(l)(i - 1, j - 1));
    }
    // frame components: c_k = delta_jk d_i(rho) + rho Gamma^k_ij
    out(k - 1) = (j == k ? 0.5 * p.y(i - 1) : 0.0) + rho * gamma;
  }
  return out;
}

}  // namespace

TEST_CASE("chart points validate dimension and radius") {
  CHECK_THROWS_AS(spheregeo::ChartPoint(2, Eigen::VectorXd::Zero(3)),
                  std::invalid_argument);
  Eigen::VectorXd far(2);
  far << 2e3, 0.0;
  CHECK_THROWS_AS(spheregeo::ChartPoint(1, far), std::invalid_argument);
}

TEST_CASE("embedding lands on the unit sphere with an orthonormal frame") {
  const int n = 2, m = 2 * n;
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd y(m);
    for (int k = 0; k < m; ++k) y(k) = matcore::gaussian(rng);
    const spheregeo::FrameData fr = spheregeo::embed(spheregeo::ChartPoint(n, y));

    Eigen::MatrixXd full(m + 2, m + 2);
    full.col(0) = fr.e_minus1;
    full.col(1) = fr.e0;
    full.rightCols(m) = fr.frame_matrix();
    CHECK((full.transpose() * full - Eigen::MatrixXd::Identity(m + 2, m + 2))
              .norm() < 1e-12);
    CHECK(fr.e_minus1(0) == 1.0);
    CHECK(fr.e0(0) == 0.0);
  }

  // chart center maps to the distinguished pole
  const spheregeo::FrameData at0 =
      spheregeo::embed(spheregeo::ChartPoint(n, Eigen::VectorXd::Zero(m)));
  CHECK((at0.e0 - Eigen::VectorXd::Unit(m + 2, m + 1)).norm() < 1e-14);
  for (int i = 0; i < m; ++i) {
    CHECK((at0.frame[i] - Eigen::VectorXd::Unit(m + 2, i + 1)).norm() < 1e-14);
  }

  // frozen image of y = (1,0,0,0)
  Eigen::VectorXd y1 = Eigen::VectorXd::Zero(m);
  y1(0) = 1.0;
  const spheregeo::FrameData fr1 = spheregeo::embed(spheregeo::ChartPoint(n, y1));
  Eigen::VectorXd expect(m + 2);
  expect << 0.0, 0.8, 0.0, 0.0, 0.0, 0.6;
  CHECK((fr1.e0 - expect).norm() < 1e-14);
}

TEST_CASE("connection coefficients at a frozen point") {
  const int n = 2, m = 2 * n;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  y(0) = 1.0;
  const spheregeo::ChartPoint p(n, y);

  CHECK(spheregeo::connection_coefficients(p, 1, 1).norm() < 1e-15);
  CHECK(spheregeo::connection_coefficients(p, 1, 2).norm() < 1e-15);

  Eigen::VectorXd e22 = Eigen::VectorXd::Zero(m);
  e22(0) = 0.5;
  CHECK((spheregeo::connection_coefficients(p, 2, 2) - e22).norm() < 1e-15);

  Eigen::VectorXd e21 = Eigen::VectorXd::Zero(m);
  e21(1) = -0.5;
  CHECK((spheregeo::connection_coefficients(p, 2, 1) - e21).norm() < 1e-15);

  Eigen::VectorXd br = Eigen::VectorXd::Zero(m);
  br(1) = 0.5;
  CHECK((spheregeo::frame_bracket(p, 1, 2) - br).norm() < 1e-15);
}

TEST_CASE("connection coefficients match differentiating the metric") {
  std::mt19937_64 rng(32);
  for (const int n : {1, 2, 3}) {
    const int m = 2 * n;
    for (int rep = 0; rep < 5; ++rep) {
      Eigen::VectorXd y(m);
      for (int k = 0; k < m; ++k) y(k) = 0.8 * matcore::gaussian(rng);
      const spheregeo::ChartPoint p(n, y);
      for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= m; ++j) {
          CHECK((spheregeo::connection_coefficients(p, i, j) -
                 frame_connection_from_metric(p, i, j))
                    .norm() < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("frame covariant derivative equals its coefficient expansion") {
  const int n = 3, m = 2 * n;
  std::mt19937_64 rng(33);
  Eigen::VectorXd y(m);
  for (int k = 0; k < m; ++k) y(k) = 0.7 * matcore::gaussian(rng);
  const spheregeo::ChartPoint p(n, y);
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) {
      CHECK((spheregeo::covariant_derivative(spheregeo::frame_field(n, i),
                                             spheregeo::frame_field(n, j), p) -
             spheregeo::connection_coefficients(p, i, j))
                .norm() < 1e-12);
      CHECK((spheregeo::bracket(spheregeo::frame_field(n, i),
                                spheregeo::frame_field(n, j), p) -
             spheregeo::frame_bracket(p, i, j))
                .norm() < 1e-12);
    }
  }
}

TEST_CASE("scalar frame derivative scales the chart gradient") {
  const int n = 2, m = 2 * n;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  y(0) = 1.0;
  const spheregeo::ChartPoint p(n, y);
  spheregeo::ScalarField phi;
  phi.value = [](const Eigen::VectorXd& v) { return v(0); };
  CHECK(std::abs(spheregeo::frame_derivative(phi, p, 1) - 1.25) < 1e-9);
  CHECK(std::abs(spheregeo::frame_derivative(phi, p, 2)) < 1e-9);

  // analytic gradient path gives the same value
  phi.gradient = [m](const Eigen::VectorXd&) {
    return Eigen::VectorXd(Eigen::VectorXd::Unit(m, 0));
  };
  CHECK(std::abs(spheregeo::frame_derivative(phi, p, 1) - 1.25) < 1e-15);
}

TEST_CASE("curvature at the frozen point follows the constant-one model") {
  const int n = 2, m = 2 * n;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  y(0) = 1.0;
  const spheregeo::ChartPoint p(n, y);

  CHECK((spheregeo::curvature(p, 1, 2, 2) - Eigen::VectorXd::Unit(m, 0)).norm() <
        1e-6);
  CHECK((spheregeo::curvature(p, 1, 2, 1) + Eigen::VectorXd::Unit(m, 1)).norm() <
        1e-6);
  CHECK(spheregeo::curvature(p, 1, 2, 3).norm() < 1e-6);
  CHECK(spheregeo::curvature(p, 1, 1, 2).norm() < 1e-6);
}

TEST_CASE("torsion vanishes for fields with analytic jacobians") {
  const int n = 2, m = 2 * n;
  std::mt19937_64 rng(34);
  Eigen::VectorXd y(m);
  for (int k = 0; k < m; ++k) y(k) = 0.6 * matcore::gaussian(rng);
  const spheregeo::ChartPoint p(n, y);

  const Eigen::VectorXd cx = matcore::random_gaussian_matrix(m, 1, rng);
  const Eigen::MatrixXd mx = matcore::random_gaussian_matrix(m, m, rng);
  const Eigen::VectorXd cy = matcore::random_gaussian_matrix(m, 1, rng);
  const Eigen::MatrixXd my = matcore::random_gaussian_matrix(m, m, rng);
  spheregeo::VectorField fx, fy;
  fx.n = n;
  fx.components = [cx, mx](const Eigen::VectorXd& v) {
    return Eigen::VectorXd(cx + mx * v);
  };
  fx.jacobian = [mx](const Eigen::VectorXd&) { return mx; };
  fy.n = n;
  fy.components = [cy, my](const Eigen::VectorXd& v) {
    return Eigen::VectorXd(cy + my * v);
  };
  // leave fy's jacobian to finite differences on purpose

  CHECK((spheregeo::covariant_derivative(fx, fy, p) -
         spheregeo::covariant_derivative(fy, fx, p) -
         spheregeo::bracket(fx, fy, p))
            .norm() < 1e-8);
}
