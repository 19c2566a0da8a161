#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <random>

#include "twistor/matcore.hpp"
#include "twistor/matrix_json.hpp"

using namespace twistor;

namespace {

Eigen::MatrixXd id(Eigen::Index m) { return Eigen::MatrixXd::Identity(m, m); }

}  // namespace

TEST_CASE("standard block structure is a skew orthogonal square root of -I") {
  const matcore::ComplexStructure j0 = matcore::make_standard_j0(6);
  CHECK((j0.matrix() * j0.matrix() + id(6)).norm() < 1e-14);
  CHECK((j0.matrix() + j0.matrix().transpose()).norm() < 1e-14);
  CHECK(j0.orthogonal());
  CHECK(j0.matrix()(0, 1) == -1.0);
  CHECK(j0.matrix()(1, 0) == 1.0);
}

TEST_CASE("membership validation rejects non-structures") {
  CHECK_THROWS_AS(matcore::ComplexStructure(id(4)), std::invalid_argument);
  CHECK_THROWS_AS(matcore::ComplexStructure(Eigen::MatrixXd::Zero(3, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(matcore::make_standard_j0(5), std::invalid_argument);
  CHECK_FALSE(matcore::is_complex_structure(id(4)));
  CHECK(matcore::is_complex_structure(matcore::make_standard_j0(4).matrix()));
}

TEST_CASE("projectors split a matrix into commuting and anticommuting parts") {
  std::mt19937_64 rng(11);
  const auto a = matcore::random_complex_structure(6, rng);
  const Eigen::MatrixXd m = matcore::random_gaussian_matrix(6, 6, rng);

  const auto t = matcore::tangent_project(a, m);
  const auto n = matcore::normal_project(a, m);
  CHECK((t.matrix() + n.matrix() - m).norm() < 1e-12);
  CHECK((a.matrix() * t.matrix() + t.matrix() * a.matrix()).norm() < 1e-10);
  CHECK((a.matrix() * n.matrix() - n.matrix() * a.matrix()).norm() < 1e-10);
  // idempotence
  CHECK((matcore::tangent_project(a, t.matrix()).matrix() - t.matrix()).norm() <
        1e-12);
  CHECK((matcore::normal_project(a, n.matrix()).matrix() - n.matrix()).norm() <
        1e-12);
}

TEST_CASE("ambient inner product reduces to the trace form on tangents") {
  std::mt19937_64 rng(12);
  const auto a = matcore::random_complex_structure(8, rng);
  const auto x = matcore::tangent_project(a, matcore::random_gaussian_matrix(8, 8, rng));
  const auto y = matcore::tangent_project(a, matcore::random_gaussian_matrix(8, 8, rng));
  const auto nor = matcore::normal_project(a, matcore::random_gaussian_matrix(8, 8, rng));

  const double inner = matcore::ambient_inner(a, x.matrix(), y.matrix());
  CHECK(std::abs(inner - (x.matrix() * y.matrix().transpose()).trace()) < 1e-10);
  // tangent and normal subspaces are orthogonal under the ambient product
  CHECK(std::abs(matcore::ambient_inner(a, x.matrix(), nor.matrix())) < 1e-10);
}

TEST_CASE("twistor structure on tangents squares to minus one and is isometric") {
  std::mt19937_64 rng(13);
  const auto a = matcore::random_orthogonal_structure(6, rng);
  const auto x = matcore::tangent_project(a, matcore::random_gaussian_matrix(6, 6, rng));
  const auto y = matcore::tangent_project(a, matcore::random_gaussian_matrix(6, 6, rng));

  const auto jx = matcore::jtilde_apply(a, x);
  CHECK((matcore::jtilde_apply(a, jx).matrix() + x.matrix()).norm() < 1e-12);
  CHECK(std::abs(matcore::ds2(a, jx, matcore::jtilde_apply(a, y)) -
                 matcore::ds2(a, x, y)) < 1e-10);
  // at orthogonal points the metric is the plain trace form
  CHECK(std::abs(matcore::ds2(a, x, y) -
                 (x.matrix() * y.matrix().transpose()).trace()) < 1e-10);
}

TEST_CASE("twistor structure maps a frozen tangent as expected") {
  const matcore::ComplexStructure j0 = matcore::make_standard_j0(2);
  const double a = 0.7, b = -0.3;
  Eigen::MatrixXd x(2, 2);
  x << a, b, b, -a;
  const matcore::TangentMatrix tx(j0, x);
  Eigen::MatrixXd expect(2, 2);
  expect << -b, a, a, b;
  CHECK((matcore::jtilde_apply(j0, tx).matrix() - expect).norm() < 1e-15);
}

TEST_CASE("metric rejects normal directions and mismatched base points") {
  std::mt19937_64 rng(14);
  const auto a = matcore::random_orthogonal_structure(6, rng);
  const auto b = matcore::random_orthogonal_structure(6, rng);
  const auto x = matcore::tangent_project(a, matcore::random_gaussian_matrix(6, 6, rng));
  const auto nor = matcore::normal_project(a, matcore::random_gaussian_matrix(6, 6, rng));
  CHECK_THROWS_AS(matcore::ds2(a, x, nor), std::invalid_argument);
  const auto xb = matcore::tangent_project(b, matcore::random_gaussian_matrix(6, 6, rng));
  CHECK_THROWS_AS(matcore::ds2(a, x, xb), std::invalid_argument);
}

TEST_CASE("covariant derivative of a velocity field along a geodesic vanishes") {
  std::mt19937_64 rng(15);
  const auto a = matcore::random_orthogonal_structure(6, rng);
  const auto x = matcore::random_tangent(a, rng, /*skew=*/true);
  const Eigen::MatrixXd k = -0.5 * x.matrix() * a.matrix();
  const Eigen::MatrixXd base = a.matrix();

  matcore::MatrixCurve curve = [k, base](double t) {
    const Eigen::MatrixXd g = (t * k).exp();
    return Eigen::MatrixXd(g * base * g.transpose());
  };
  matcore::MatrixField velocity = [k, &curve](double t) {
    const Eigen::MatrixXd at = curve(t);
    return Eigen::MatrixXd(k * at - at * k);
  };
  CHECK(velocity(0.0).isApprox(x.matrix(), 1e-9));
  const auto dv = matcore::covariant_derivative_along(curve, velocity, 0.0, 1e-5);
  CHECK(dv.matrix().norm() < 1e-8);
}

TEST_CASE("derivative along a curve rejects steps that leave the membership band") {
  std::mt19937_64 rng(16);
  const auto a = matcore::random_orthogonal_structure(4, rng);
  const Eigen::MatrixXd drift = matcore::random_gaussian_matrix(4, 4, rng);
  const Eigen::MatrixXd base = a.matrix();
  matcore::MatrixCurve bad = [base, drift](double t) {
    return Eigen::MatrixXd(base + t * drift);  // leaves the manifold at order t
  };
  matcore::MatrixField f = [&bad](double t) { return bad(t); };
  CHECK_THROWS_AS(matcore::covariant_derivative_along(bad, f, 0.0, 1e-2),
                  std::invalid_argument);
}

TEST_CASE("random structure generators satisfy their contracts") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    const auto a = matcore::random_complex_structure(8, rng);
    CHECK(a.membership_residual() < 1e-9);
    const auto o = matcore::random_orthogonal_structure(8, rng);
    CHECK(o.membership_residual() < 1e-9);
    CHECK((o.matrix() + o.matrix().transpose()).norm() < 1e-10);
    CHECK((o.matrix().transpose() * o.matrix() - id(8)).norm() < 1e-10);
    const auto t = matcore::random_tangent(o, rng, /*skew=*/true);
    CHECK(std::abs(t.matrix().norm() - 1.0) < 1e-12);
    CHECK((t.matrix() + t.matrix().transpose()).norm() < 1e-10);
  }
}

TEST_CASE("gaussian sampling is deterministic per seed with sane moments") {
  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(matcore::gaussian(a) == matcore::gaussian(b));
  std::mt19937_64 rng(5);
  double sum = 0.0, sq = 0.0;
  const int reps = 20000;
  for (int i = 0; i < reps; ++i) {
    const double g = matcore::gaussian(rng);
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / reps) < 0.05);
  CHECK(std::abs(sq / reps - 1.0) < 0.05);
}

TEST_CASE("matrix json round trips and rejects malformed input") {
  std::mt19937_64 rng(18);
  const Eigen::MatrixXd m = matcore::random_gaussian_matrix(3, 5, rng);
  const Eigen::MatrixXd back = matrix_from_json(matrix_to_json(m));
  CHECK((back - m).norm() == 0.0);

  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[[1,2],[3]]")),
                  std::invalid_argument);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[]")),
                  std::invalid_argument);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[[1,\"x\"]]")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      square_even_matrix_from_json(nlohmann::json::parse("[[1,2,3],[4,5,6]]")),
      std::invalid_argument);
  CHECK_THROWS_AS(square_even_matrix_from_json(
                      nlohmann::json::parse("[[1,2,3],[4,5,6],[7,8,9]]")),
                  std::invalid_argument);
}
