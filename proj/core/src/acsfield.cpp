#include "twistor/acsfield.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <stdexcept>

#include "twistor/matrix_json.hpp"

namespace twistor::acsfield {

namespace {

using spheregeo::ChartPoint;
using spheregeo::VectorField;

constexpr std::complex<double> kI{0.0, 1.0};

void check_structure(const Eigen::MatrixXd& b, bool orthogonal, double tol) {
  const Eigen::Index m = b.rows();
  if (b.cols() != m || m % 2 != 0 || m == 0) {
    throw std::invalid_argument("field value must be square of even order");
  }
  if ((b * b + Eigen::MatrixXd::Identity(m, m)).norm() > tol) {
    throw std::invalid_argument("field value does not square to -I");
  }
  if (orthogonal && (b + b.transpose()).norm() > tol) {
    throw std::invalid_argument("field flagged orthogonal has non-skew value");
  }
}

// Frechet derivative of the matrix exponential at M in direction E, read off
// the top-right block of exp([[M, E], [0, M]]).
Eigen::MatrixXd exp_frechet(const Eigen::MatrixXd& m, const Eigen::MatrixXd& e) {
  const Eigen::Index k = m.rows();
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  block.topLeftCorner(k, k) = m;
  block.topRightCorner(k, k) = e;
  block.bottomRightCorner(k, k) = m;
  const Eigen::MatrixXd eb = block.exp();
  return eb.topRightCorner(k, k);
}

}  // namespace

ACSField::ACSField(int n,
                   std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> value,
                   std::function<Eigen::MatrixXd(const Eigen::VectorXd&, int)> partial,
                   bool orthogonal, double fd_step)
    : n_(n), value_(std::move(value)), partial_(std::move(partial)),
      orthogonal_(orthogonal), fd_step_(fd_step) {
  if (n_ < 1) throw std::invalid_argument("field needs n >= 1");
  if (!value_) throw std::invalid_argument("field needs a value closure");
  if (!(fd_step_ > 0.0)) throw std::invalid_argument("fd step must be positive");
}

Eigen::MatrixXd ACSField::evaluate(const Eigen::VectorXd& y) const {
  if (y.size() != 2 * n_) throw std::invalid_argument("field point dimension mismatch");
  Eigen::MatrixXd b = value_(y);
  check_structure(b, orthogonal_, kFieldMembershipTol);
  return b;
}

Eigen::MatrixXd ACSField::partial(const Eigen::VectorXd& y, int k) const {
  if (k < 1 || k > 2 * n_) throw std::invalid_argument("partial index out of range");
  if (partial_) return partial_(y, k);
  Eigen::VectorXd yp = y, ym = y;
  yp(k - 1) += fd_step_;
  ym(k - 1) -= fd_step_;
  return (value_(yp) - value_(ym)) / (2.0 * fd_step_);
}

spheregeo::VectorField ACSField::j_frame_field(int i) const {
  if (i < 1 || i > 2 * n_) throw std::invalid_argument("frame index out of range");
  VectorField f;
  f.n = n_;
  f.fd_step = fd_step_;
  f.components = [self = *this, i](const Eigen::VectorXd& y) {
    return Eigen::VectorXd(self.evaluate(y).col(i - 1));
  };
  f.jacobian = [self = *this, i](const Eigen::VectorXd& y) {
    const int m = 2 * self.n_;
    Eigen::MatrixXd j(m, m);
    for (int k = 1; k <= m; ++k) j.col(k - 1) = self.partial(y, k).col(i - 1);
    return j;
  };
  return f;
}

Eigen::VectorXd ACSField::apply(const Eigen::VectorXd& y,
                                const Eigen::VectorXd& v) const {
  return evaluate(y) * v;
}

ACSField make_constant_field(const Eigen::MatrixXd& b0) {
  check_structure(b0, /*orthogonal=*/false, kFieldMembershipTol);
  const bool orth = (b0 + b0.transpose()).norm() <= kFieldMembershipTol;
  const Eigen::Index m = b0.rows();
  return ACSField(static_cast<int>(m / 2),
                  [b0](const Eigen::VectorXd&) { return b0; },
                  [m](const Eigen::VectorXd&, int) {
                    return Eigen::MatrixXd::Zero(m, m);
                  },
                  orth);
}

ACSField make_rotated_field(const Eigen::MatrixXd& b0,
                            const std::vector<Eigen::MatrixXd>& s, double scale) {
  check_structure(b0, /*orthogonal=*/true, kFieldMembershipTol);
  const Eigen::Index m = b0.rows();
  if (s.size() != static_cast<std::size_t>(m)) {
    throw std::invalid_argument("rotated field needs one generator per coordinate");
  }
  for (const auto& sk : s) {
    if (sk.rows() != m || sk.cols() != m) {
      throw std::invalid_argument("generator size mismatch");
    }
    if ((sk + sk.transpose()).norm() > 1e-12 * std::max(1.0, sk.norm())) {
      throw std::invalid_argument("generators must be skew");
    }
  }
  if (!std::isfinite(scale)) throw std::invalid_argument("scale must be finite");

  auto exponent = [s, scale, m](const Eigen::VectorXd& y) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      acc += scale * y(k) * s[static_cast<std::size_t>(k)];
    }
    return acc;
  };
  auto value = [b0, exponent](const Eigen::VectorXd& y) {
    const Eigen::MatrixXd r = exponent(y).exp();
    return Eigen::MatrixXd(r * b0 * r.transpose());
  };
  auto partial = [b0, s, scale, exponent](const Eigen::VectorXd& y, int k) {
    const Eigen::MatrixXd mexp = exponent(y);
    const Eigen::MatrixXd r = mexp.exp();
    const Eigen::MatrixXd dr =
        exp_frechet(mexp, scale * s[static_cast<std::size_t>(k - 1)]);
    return Eigen::MatrixXd(dr * b0 * r.transpose() + r * b0 * dr.transpose());
  };
  return ACSField(static_cast<int>(m / 2), std::move(value), std::move(partial),
                  /*orthogonal=*/true);
}

nlohmann::ordered_json FieldSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["n"] = n;
  j["b0"] = matrix_to_json(b0);
  if (kind == "rotated") {
    nlohmann::ordered_json gens = nlohmann::ordered_json::array();
    for (const auto& sk : s) gens.push_back(matrix_to_json(sk));
    j["s"] = std::move(gens);
    j["scale"] = scale;
  }
  j["seed"] = seed;
  return j;
}

FieldSpec FieldSpec::from_json(const nlohmann::json& j) {
  FieldSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  if (spec.kind != "constant" && spec.kind != "rotated") {
    throw std::invalid_argument("unknown field kind");
  }
  spec.n = j.at("n").get<int>();
  spec.b0 = square_even_matrix_from_json(j.at("b0"));
  if (spec.kind == "rotated") {
    for (const auto& g : j.at("s")) spec.s.push_back(square_even_matrix_from_json(g));
    spec.scale = j.at("scale").get<double>();
  }
  spec.seed = j.value("seed", std::uint64_t{0});
  if (spec.b0.rows() != 2 * spec.n) {
    throw std::invalid_argument("field spec dimension mismatch");
  }
  return spec;
}

ACSField FieldSpec::build() const {
  if (kind == "constant") return make_constant_field(b0);
  return make_rotated_field(b0, s, scale);
}

Eigen::VectorXd nijenhuis_direct(const ACSField& field, const ChartPoint& p,
                                 int i, int j) {
  const int m = 2 * p.n;
  if (field.n() != p.n) throw std::invalid_argument("field/point dimension mismatch");
  if (i < 1 || i > m || j < 1 || j > m) throw std::invalid_argument("index out of range");

  const VectorField ei = spheregeo::frame_field(p.n, i);
  const VectorField ej = spheregeo::frame_field(p.n, j);
  const VectorField jei = field.j_frame_field(i);
  const VectorField jej = field.j_frame_field(j);

  const Eigen::VectorXd t1 = spheregeo::bracket(jei, jej, p);
  const Eigen::VectorXd t2 = spheregeo::bracket(jei, ej, p);
  const Eigen::VectorXd t3 = spheregeo::bracket(ei, jej, p);
  const Eigen::VectorXd t4 = spheregeo::bracket(ei, ej, p);

  const Eigen::MatrixXd b = field.evaluate(p.y);
  return t1 - b * t2 - b * t3 - t4;
}

Eigen::VectorXd nijenhuis_formula(const ACSField& field, const ChartPoint& p,
                                  int i, int j) {
  const int m = 2 * p.n;
  if (field.n() != p.n) throw std::invalid_argument("field/point dimension mismatch");
  if (i < 1 || i > m || j < 1 || j > m) throw std::invalid_argument("index out of range");

  const double r = spheregeo::rho(p);
  const Eigen::MatrixXd b = field.evaluate(p.y);
  std::vector<Eigen::MatrixXd> d(static_cast<std::size_t>(m));
  for (int l = 1; l <= m; ++l) d[static_cast<std::size_t>(l - 1)] = field.partial(p.y, l);

  // Component k of sum_k e_k [ (Je_i)B_{kj} - (Je_j)B_{ki} ].
  Eigen::VectorXd first(m);
  for (int k = 0; k < m; ++k) {
    double acc = 0.0;
    for (int l = 0; l < m; ++l) {
      const auto& dl = d[static_cast<std::size_t>(l)];
      acc += b(l, i - 1) * dl(k, j - 1) - b(l, j - 1) * dl(k, i - 1);
    }
    first(k) = r * acc;
  }
  // - sum_k Je_k [ e_i B_{kj} - e_j B_{ki} ]  =  -B w.
  Eigen::VectorXd w(m);
  for (int k = 0; k < m; ++k) {
    w(k) = r * (d[static_cast<std::size_t>(i - 1)](k, j - 1) -
                d[static_cast<std::size_t>(j - 1)](k, i - 1));
  }
  return first - b * w;
}

IntegrabilityResidual integrability_residual(const ACSField& field,
                                             const ChartPoint& p, int i, int j) {
  const int m = 2 * p.n;
  if (field.n() != p.n) throw std::invalid_argument("field/point dimension mismatch");
  if (i < 1 || i > m || j < 1 || j > m) throw std::invalid_argument("index out of range");

  const double r = spheregeo::rho(p);
  const Eigen::MatrixXd b = field.evaluate(p.y);
  std::vector<Eigen::MatrixXd> d(static_cast<std::size_t>(m));
  for (int l = 1; l <= m; ++l) d[static_cast<std::size_t>(l - 1)] = field.partial(p.y, l);

  IntegrabilityResidual out;

  // Form (1): sum e_k [e_i B_{kj} - e_j B_{ki}] + sum Je_k [(Je_i)B_{kj} - (Je_j)B_{ki}].
  Eigen::VectorXd u(m), v(m);
  for (int k = 0; k < m; ++k) {
    u(k) = r * (d[static_cast<std::size_t>(i - 1)](k, j - 1) -
                d[static_cast<std::size_t>(j - 1)](k, i - 1));
    double acc = 0.0;
    for (int l = 0; l < m; ++l) {
      const auto& dl = d[static_cast<std::size_t>(l)];
      acc += b(l, i - 1) * dl(k, j - 1) - b(l, j - 1) * dl(k, i - 1);
    }
    v(k) = r * acc;
  }
  out.general = u + b * v;

  // Form (2): sum e_k (e_i B_{kj}) + sum Je_k ((Je_i)B_{kj}); orthogonal only.
  if (field.orthogonal()) {
    Eigen::VectorXd c(m), g(m);
    for (int k = 0; k < m; ++k) {
      c(k) = r * d[static_cast<std::size_t>(i - 1)](k, j - 1);
      double acc = 0.0;
      for (int l = 0; l < m; ++l) {
        acc += b(l, i - 1) * d[static_cast<std::size_t>(l)](k, j - 1);
      }
      g(k) = r * acc;
    }
    out.orthogonal = c + b * g;
  }
  return out;
}

namespace {

// Real and imaginary parts of X_i = e_i - sqrt(-1) J e_i as chart fields.
VectorField x10_real(const ACSField& field, int i) {
  return spheregeo::frame_field(field.n(), i);
}
VectorField x10_imag(const ACSField& field, int i) {
  VectorField jei = field.j_frame_field(i);
  VectorField f;
  f.n = jei.n;
  f.fd_step = jei.fd_step;
  f.components = [jei](const Eigen::VectorXd& y) {
    return Eigen::VectorXd(-jei.components(y));
  };
  f.jacobian = [jei](const Eigen::VectorXd& y) {
    return Eigen::MatrixXd(-jei.jac(y));
  };
  return f;
}

ComplexVec x10_components(const Eigen::MatrixXd& b, int i) {
  const Eigen::Index m = b.rows();
  ComplexVec x = ComplexVec::Zero(m);
  x(i - 1) += 1.0;
  for (Eigen::Index k = 0; k < m; ++k) x(k) -= kI * b(k, i - 1);
  return x;
}

}  // namespace

ComplexVec bracket10_formula(const ACSField& field, const ChartPoint& p,
                             int i, int j) {
  const int m = 2 * p.n;
  const double r = spheregeo::rho(p);
  const Eigen::MatrixXd b = field.evaluate(p.y);
  std::vector<Eigen::MatrixXd> d(static_cast<std::size_t>(m));
  for (int l = 1; l <= m; ++l) d[static_cast<std::size_t>(l - 1)] = field.partial(p.y, l);

  // (X_i) B_{kj} = e_i B_{kj} - sqrt(-1) (Je_i) B_{kj}.
  auto x_deriv = [&](int a, int kk, int jj) {
    const double real = r * d[static_cast<std::size_t>(a - 1)](kk, jj);
    double imag = 0.0;
    for (int l = 0; l < m; ++l) {
      imag += b(l, a - 1) * d[static_cast<std::size_t>(l)](kk, jj);
    }
    return std::complex<double>(real, -r * imag);
  };

  ComplexVec out = ComplexVec::Zero(m);
  for (int k = 0; k < m; ++k) {
    out(k) += -kI * x_deriv(i, k, j - 1) + kI * x_deriv(j, k, i - 1);
  }
  const ComplexVec xi = x10_components(b, i);
  const ComplexVec xj = x10_components(b, j);
  const Eigen::VectorXd bty = b.transpose() * p.y;  // b_a = sum_k y^k B_{ka}
  const std::complex<double> ci(p.y(j - 1), -bty(j - 1));
  const std::complex<double> cj(p.y(i - 1), -bty(i - 1));
  out += -0.5 * ci * xi + 0.5 * cj * xj;
  return out;
}

ComplexVec bracket10_direct(const ACSField& field, const ChartPoint& p,
                            int i, int j) {
  const VectorField ui = x10_real(field, i), wi = x10_imag(field, i);
  const VectorField uj = x10_real(field, j), wj = x10_imag(field, j);
  const Eigen::VectorXd re = spheregeo::bracket(ui, uj, p) - spheregeo::bracket(wi, wj, p);
  const Eigen::VectorXd im = spheregeo::bracket(ui, wj, p) + spheregeo::bracket(wi, uj, p);
  return re.cast<std::complex<double>>() + kI * im.cast<std::complex<double>>();
}

ComplexVec covderiv10_formula(const ACSField& field, const ChartPoint& p,
                              int i, int j) {
  const int m = 2 * p.n;
  const double r = spheregeo::rho(p);
  const Eigen::MatrixXd b = field.evaluate(p.y);
  std::vector<Eigen::MatrixXd> d(static_cast<std::size_t>(m));
  for (int l = 1; l <= m; ++l) d[static_cast<std::size_t>(l - 1)] = field.partial(p.y, l);

  ComplexVec out = ComplexVec::Zero(m);
  // -sqrt(-1) [X_i B_{kj}] e_k
  for (int k = 0; k < m; ++k) {
    const double real = r * d[static_cast<std::size_t>(i - 1)](k, j - 1);
    double imag = 0.0;
    for (int l = 0; l < m; ++l) {
      imag += b(l, i - 1) * d[static_cast<std::size_t>(l)](k, j - 1);
    }
    out(k) += -kI * std::complex<double>(real, -r * imag);
  }
  // -1/2 (y^j - sqrt(-1) y^k B_{kj}) X_i
  const Eigen::VectorXd bty = b.transpose() * p.y;
  const ComplexVec xi = x10_components(b, i);
  out += -0.5 * std::complex<double>(p.y(j - 1), -bty(j - 1)) * xi;
  // +1/2 [delta_ij - sum_k B_{ki} B_{kj} - sqrt(-1)(B_{ij} + B_{ji})] sum_l y^l e_l
  const double gram = b.col(i - 1).dot(b.col(j - 1));
  const std::complex<double> coef(
      (i == j ? 1.0 : 0.0) - gram, -(b(i - 1, j - 1) + b(j - 1, i - 1)));
  out += 0.5 * coef * p.y.cast<std::complex<double>>();
  return out;
}

ComplexVec covderiv10_direct(const ACSField& field, const ChartPoint& p,
                             int i, int j) {
  const VectorField ui = x10_real(field, i), wi = x10_imag(field, i);
  const VectorField uj = x10_real(field, j), wj = x10_imag(field, j);
  const Eigen::VectorXd re = spheregeo::covariant_derivative(ui, uj, p) -
                             spheregeo::covariant_derivative(wi, wj, p);
  const Eigen::VectorXd im = spheregeo::covariant_derivative(ui, wj, p) +
                             spheregeo::covariant_derivative(wi, uj, p);
  return re.cast<std::complex<double>>() + kI * im.cast<std::complex<double>>();
}

double covderiv10_symmetry_defect(const ACSField& field, const ChartPoint& p,
                                  int i, int j) {
  if (!field.orthogonal()) {
    throw std::invalid_argument("symmetry defect is defined for orthogonal fields");
  }
  const ComplexVec sym = covderiv10_formula(field, p, i, j) +
                         covderiv10_formula(field, p, j, i);
  return sym.norm();
}

}  // namespace twistor::acsfield
