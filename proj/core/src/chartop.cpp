#include "twistor/chartop.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <stdexcept>
#include <utility>

#include "twistor/retract.hpp"

namespace twistor::chartop {

namespace {

BigInt gcd_big(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

}  // namespace

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw std::invalid_argument("rational: zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  const BigInt g = gcd_big(num_, den_);
  num_ /= g;
  den_ /= g;
}

std::string Rational::str() const {
  if (den_ == 1) return num_.str();
  return num_.str() + "/" + den_.str();
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ *= o.den_;
  normalize();
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  num_ *= o.num_;
  den_ *= o.den_;
  normalize();
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::invalid_argument("rational: division by zero");
  num_ *= o.den_;
  den_ *= o.num_;
  normalize();
  return *this;
}

BigInt factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  BigInt r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

Rational pow_rational(const Rational& base, int exp) {
  if (exp < 0) return Rational(1) / pow_rational(base, -exp);
  Rational r(1);
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

IntPoly::IntPoly(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void IntPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPoly IntPoly::one() { return IntPoly({BigInt(1)}); }

IntPoly IntPoly::monomial(int degree, BigInt coeff) {
  if (degree < 0) throw std::invalid_argument("monomial: negative degree");
  std::vector<BigInt> c(static_cast<size_t>(degree) + 1, BigInt(0));
  c.back() = std::move(coeff);
  return IntPoly(std::move(c));
}

BigInt IntPoly::coeff(int degree) const {
  if (degree < 0 || degree >= static_cast<int>(coeffs_.size())) return 0;
  return coeffs_[static_cast<size_t>(degree)];
}

BigInt IntPoly::evaluate(const BigInt& t) const {
  BigInt r = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * t + *it;
  return r;
}

IntPoly& IntPoly::operator+=(const IntPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), BigInt(0));
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

IntPoly& IntPoly::operator*=(const IntPoly& o) {
  if (coeffs_.empty() || o.coeffs_.empty()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<BigInt> out(coeffs_.size() + o.coeffs_.size() - 1, BigInt(0));
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
  coeffs_ = std::move(out);
  trim();
  return *this;
}

namespace {

// Element of Q[e_n] / (weight > n), with e_1, ..., e_{n-1} already set to
// zero: a + b e_n.  Any product involving two copies of e_n has weight 2n
// and is dropped.
struct TruncElem {
  Rational c0;
  Rational c1;

  TruncElem operator*(const TruncElem& o) const {
    return {c0 * o.c0, c0 * o.c1 + c1 * o.c0};
  }
  TruncElem& operator+=(const TruncElem& o) {
    c0 += o.c0;
    c1 += o.c1;
    return *this;
  }
  TruncElem scaled(const Rational& s) const { return {c0 * s, c1 * s}; }
};

}  // namespace

Rational newton_chern_identity(int n) {
  if (n < 1) throw std::invalid_argument("newton_chern_identity: need n >= 1");
  // e_k in the truncated ring.
  std::vector<TruncElem> e(static_cast<size_t>(n) + 1, TruncElem{Rational(0), Rational(0)});
  e[static_cast<size_t>(n)] = TruncElem{Rational(0), Rational(1)};
  // Newton's identities: p_k = sum_{i=1}^{k-1} (-1)^{i-1} e_i p_{k-i}
  //                            + (-1)^{k-1} k e_k.
  std::vector<TruncElem> p(static_cast<size_t>(n) + 1, TruncElem{Rational(0), Rational(0)});
  for (int k = 1; k <= n; ++k) {
    TruncElem acc{Rational(0), Rational(0)};
    for (int i = 1; i < k; ++i) {
      const Rational sign((i % 2 == 1) ? 1 : -1);
      acc += (e[static_cast<size_t>(i)] * p[static_cast<size_t>(k - i)]).scaled(sign);
    }
    const Rational lead_sign((k % 2 == 1) ? 1 : -1);
    acc += e[static_cast<size_t>(k)].scaled(lead_sign * Rational(k));
    p[static_cast<size_t>(k)] = acc;
  }
  if (p[static_cast<size_t>(n)].c0 != Rational(0))
    throw std::logic_error("newton_chern_identity: unexpected constant term");
  return p[static_cast<size_t>(n)].c1;
}

IndexResult signature_index(int n) {
  if (n < 2) throw std::invalid_argument("signature_index: need n >= 2");
  // rank-2^n twist, top Chern character coefficient p_n / n!, Euler
  // integral 2.
  const Rational value = pow_rational(Rational(2), n) * newton_chern_identity(n) /
                         Rational(factorial(n), BigInt(1)) * Rational(2);
  return {value, value.is_integer()};
}

Rational todd_quotient_s4(const Rational& c2_integral) {
  // Degree-4 Todd term (c_1^2 + c_2)/12 with no degree-2 class available.
  return c2_integral / Rational(12);
}

IndexResult dolbeault_index_s4() {
  const Rational value = todd_quotient_s4(Rational(2));
  return {value, value.is_integer()};
}

IntPoly poincare_polynomial(int n) {
  if (n < 0) throw std::invalid_argument("poincare_polynomial: negative n");
  IntPoly r = IntPoly::one();
  for (int k = 1; k <= n; ++k) r *= (IntPoly::one() + IntPoly::monomial(2 * k));
  return r;
}

Eigen::MatrixXd morse_reference(Eigen::Index order) {
  if (order < 4 || order % 2 != 0)
    throw std::invalid_argument("morse_reference: order must be even and >= 4");
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(order, order);
  k(order - 1, 0) = 1.0;
  k(0, order - 1) = -1.0;
  return k;
}

double morse_height(const matcore::ComplexStructure& a) {
  const Eigen::MatrixXd k = morse_reference(a.order());
  return (a.matrix() * k.transpose()).trace();
}

matcore::TangentMatrix morse_gradient(const matcore::ComplexStructure& a) {
  const Eigen::MatrixXd k = morse_reference(a.order());
  return matcore::tangent_project(a, k);
}

MorseState morse_state(const matcore::ComplexStructure& a) {
  const matcore::TangentMatrix g = morse_gradient(a);
  return {a, morse_height(a), g.matrix().norm()};
}

double morse_second_difference(const matcore::ComplexStructure& a,
                               const Eigen::MatrixXd& dir, double s) {
  if (s <= 0) throw std::invalid_argument("morse_second_difference: need s > 0");
  const double h0 = morse_height(a);
  const auto quad = [&](double t) {
    const auto ap = retract::retract_to_orthogonal(a.matrix() + t * dir);
    const auto am = retract::retract_to_orthogonal(a.matrix() - t * dir);
    return (morse_height(ap) - 2.0 * h0 + morse_height(am)) / (t * t);
  };
  const double coarse = quad(s);
  const double fine = quad(s / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

Eigen::VectorXd morse_hessian_spectrum(const matcore::ComplexStructure& a,
                                       const std::vector<Eigen::MatrixXd>& dirs,
                                       double s) {
  const int m = static_cast<int>(dirs.size());
  if (m == 0) throw std::invalid_argument("morse_hessian_spectrum: no directions");
  Eigen::MatrixXd q(m, m);
  std::vector<double> diag(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    diag[static_cast<size_t>(i)] = morse_second_difference(a, dirs[static_cast<size_t>(i)], s);
    q(i, i) = diag[static_cast<size_t>(i)];
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double mixed = morse_second_difference(
          a, dirs[static_cast<size_t>(i)] + dirs[static_cast<size_t>(j)], s);
      const double off =
          0.5 * (mixed - diag[static_cast<size_t>(i)] - diag[static_cast<size_t>(j)]);
      q(i, j) = off;
      q(j, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("morse_hessian_spectrum: eigensolve failed");
  return es.eigenvalues();
}

MorseState morse_ascend(const matcore::ComplexStructure& start, double step,
                        double target, int max_steps) {
  if (step <= 0) throw std::invalid_argument("morse_ascend: need step > 0");
  if (!start.orthogonal())
    throw std::invalid_argument("morse_ascend: start must be an orthogonal structure");
  matcore::ComplexStructure a = start;
  for (int it = 0; it < max_steps; ++it) {
    const matcore::TangentMatrix g = morse_gradient(a);
    const double gn = g.matrix().norm();
    if (morse_height(a) >= target || gn < 1e-15) break;
    a = retract::retract_to_orthogonal(a.matrix() + step * g.matrix());
  }
  return morse_state(a);
}

}  // namespace twistor::chartop
