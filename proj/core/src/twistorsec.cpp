#include "twistor/twistorsec.hpp"

#include <stdexcept>

namespace twistor::twistorsec {

namespace {

using spheregeo::ChartPoint;
using spheregeo::FrameData;

Eigen::MatrixXd section_matrix(const FrameData& fr, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd e = fr.frame_matrix();
  return fr.e0 * fr.e_minus1.transpose() - fr.e_minus1 * fr.e0.transpose() +
         e * b * e.transpose();
}

// Connection matrix w(X)_{kj} = (y^k X^j - y^j X^k) / 2.
Eigen::MatrixXd omega_of(const Eigen::VectorXd& y, const Eigen::VectorXd& x) {
  return 0.5 * (y * x.transpose() - x * y.transpose());
}

}  // namespace

SectionValue embed_section(const acsfield::ACSField& field, const ChartPoint& p) {
  if (field.n() != p.n) throw std::invalid_argument("field/point dimension mismatch");
  SectionValue sv;
  sv.frame = spheregeo::embed(p);
  sv.b = field.evaluate(p.y);
  sv.orthogonal = field.orthogonal();
  sv.f = section_matrix(sv.frame, sv.b);
  return sv;
}

FrameData build_adapted_frame(const Eigen::MatrixXd& a, double tol) {
  const Eigen::Index dim = a.rows();
  if (a.cols() != dim || dim % 2 != 0 || dim < 4) {
    throw std::invalid_argument("adapted frame needs square even order >= 4");
  }
  if ((a + a.transpose()).norm() > tol * std::max(1.0, a.norm()) ||
      (a * a + Eigen::MatrixXd::Identity(dim, dim)).norm() > tol) {
    throw std::invalid_argument("adapted frame needs a skew orthogonal structure");
  }

  FrameData fr;
  fr.e_minus1 = Eigen::VectorXd::Zero(dim);
  fr.e_minus1(0) = 1.0;
  fr.e0 = a * fr.e_minus1;

  // Greedily complete an orthonormal basis of {e_{-1}, e0}^perp by pairs
  // (v, A v); A preserves that complement, and skewness makes A v unit and
  // orthogonal to v, so the restriction of A lands in standard block form.
  std::vector<Eigen::VectorXd> basis{fr.e_minus1, fr.e0};
  auto project_out = [&basis](Eigen::VectorXd v) {
    for (const auto& u : basis) v -= u.dot(v) * u;
    return v;
  };
  fr.frame.clear();
  for (Eigen::Index seed = 0; static_cast<Eigen::Index>(basis.size()) < dim; ++seed) {
    if (seed >= dim) throw std::runtime_error("adapted frame construction stalled");
    Eigen::VectorXd v = project_out(Eigen::VectorXd::Unit(dim, seed));
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    v /= norm;
    v = project_out(v).normalized();  // re-orthogonalize for stability
    const Eigen::VectorXd av = project_out(a * v).normalized();
    fr.frame.push_back(v);
    fr.frame.push_back(av);
    basis.push_back(v);
    basis.push_back(av);
  }
  return fr;
}

AdaptedGenerators adapted_generators(const FrameData& fr) {
  const int m = static_cast<int>(fr.frame.size());
  if (m % 2 != 0 || m == 0) throw std::invalid_argument("frame size must be even");
  const int n = m / 2;
  auto rank2 = [](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return Eigen::MatrixXd(u * v.transpose() - v * u.transpose());
  };
  const auto& e = fr.frame;  // e[2i-2] = e_{2i-1}, e[2i-1] = e_{2i}

  AdaptedGenerators g;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const auto& a1 = e[static_cast<std::size_t>(2 * i - 2)];
      const auto& a2 = e[static_cast<std::size_t>(2 * i - 1)];
      const auto& b1 = e[static_cast<std::size_t>(2 * j - 2)];
      const auto& b2 = e[static_cast<std::size_t>(2 * j - 1)];
      g.alpha.push_back(rank2(b1, a1) - rank2(b2, a2));
      g.beta.push_back(rank2(b2, a1) + rank2(b1, a2));
    }
  }
  for (int i = 1; i <= n; ++i) {
    const auto& o1 = e[static_cast<std::size_t>(2 * i - 2)];
    const auto& o2 = e[static_cast<std::size_t>(2 * i - 1)];
    g.xt.push_back(rank2(o1, fr.e_minus1) + rank2(fr.e0, o2));
    g.xt.push_back(rank2(o2, fr.e_minus1) - rank2(fr.e0, o1));
  }
  return g;
}

AdaptedGenerators adapted_generators(const SectionValue& sv, double tol) {
  const Eigen::Index m = sv.b.rows();
  Eigen::MatrixXd j0 = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; i += 2) {
    j0(i, i + 1) = -1.0;
    j0(i + 1, i) = 1.0;
  }
  if (!sv.orthogonal || (sv.b - j0).norm() > tol) {
    throw std::invalid_argument("section is not adapted (B must be standard block form)");
  }
  return adapted_generators(sv.frame);
}

Eigen::MatrixXd horizontal_lift(const SectionValue& sv, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(sv.frame.frame.size())) {
    throw std::invalid_argument("horizontal lift dimension mismatch");
  }
  Eigen::VectorXd xa = Eigen::VectorXd::Zero(sv.f.rows());
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    xa += x(l) * sv.frame.frame[static_cast<std::size_t>(l)];
  }
  const Eigen::MatrixXd m =
      xa * sv.frame.e_minus1.transpose() - sv.frame.e_minus1 * xa.transpose();
  return m + sv.f * m * sv.f;
}

Eigen::MatrixXd pushforward(const acsfield::ACSField& field, const ChartPoint& p,
                            const Eigen::VectorXd& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  if (x.size() != 2 * p.n) throw std::invalid_argument("direction dimension mismatch");
  const Eigen::VectorXd dir = spheregeo::rho(p) * x;  // chart velocity of sum x^l e_l
  const SectionValue plus =
      embed_section(field, ChartPoint(p.n, p.y + h * dir));
  const SectionValue minus =
      embed_section(field, ChartPoint(p.n, p.y - h * dir));
  return (plus.f - minus.f) / (2.0 * h);
}

Eigen::MatrixXd pushforward(const acsfield::ACSField& field, const ChartPoint& p,
                            int l, double h) {
  if (l < 1 || l > 2 * p.n) throw std::invalid_argument("frame index out of range");
  return pushforward(field, p, Eigen::VectorXd::Unit(2 * p.n, l - 1), h);
}

Eigen::MatrixXd vertical_part(const acsfield::ACSField& field, const ChartPoint& p,
                              const Eigen::VectorXd& x) {
  if (x.size() != 2 * p.n) throw std::invalid_argument("direction dimension mismatch");
  const SectionValue sv = embed_section(field, p);
  const int m = 2 * p.n;
  // Directional derivative of B along X = sum x^l e_l: chart velocity rho*x.
  Eigen::MatrixXd db = Eigen::MatrixXd::Zero(m, m);
  const double r = spheregeo::rho(p);
  for (int k = 1; k <= m; ++k) db += r * x(k - 1) * field.partial(p.y, k);
  const Eigen::MatrixXd w = omega_of(p.y, x);
  const Eigen::MatrixXd e = sv.frame.frame_matrix();
  return e * (db + w * sv.b - sv.b * w) * e.transpose();
}

TangentSplit split(const acsfield::ACSField& field, const ChartPoint& p,
                   const Eigen::VectorXd& x) {
  TangentSplit out;
  out.vertical = vertical_part(field, p, x);
  out.horizontal = horizontal_lift(embed_section(field, p), x);
  return out;
}

double holomorphy_residual(const acsfield::ACSField& field, const ChartPoint& p,
                           int l, double h) {
  if (l < 1 || l > 2 * p.n) throw std::invalid_argument("frame index out of range");
  const SectionValue sv = embed_section(field, p);
  const Eigen::VectorXd el = Eigen::VectorXd::Unit(2 * p.n, l - 1);
  const Eigen::MatrixXd lhs = sv.f * pushforward(field, p, el, h);
  const Eigen::MatrixXd rhs = pushforward(field, p, Eigen::VectorXd(sv.b * el), h);
  return (lhs - rhs).norm();
}

double projected_structure_residual(const acsfield::ACSField& field,
                                    const ChartPoint& p, const Eigen::VectorXd& x,
                                    double h) {
  const SectionValue sv = embed_section(field, p);
  const Eigen::VectorXd pushed =
      (sv.f * pushforward(field, p, x, h)) * sv.frame.e_minus1;
  // Ambient image of J X at p.
  Eigen::VectorXd jx = Eigen::VectorXd::Zero(sv.f.rows());
  const Eigen::VectorXd bx = sv.b * x;
  for (Eigen::Index l = 0; l < bx.size(); ++l) {
    jx += bx(l) * sv.frame.frame[static_cast<std::size_t>(l)];
  }
  return (pushed - jx).norm();
}

}  // namespace twistor::twistorsec
