#pragma once

// Exact arithmetic for characteristic-class indices, Poincare polynomials,
// and the Morse analysis of the height function on the orthogonal twistor
// space.
//
// Index computations are exact rationals.  With the elementary symmetric
// constraints e_1 = ... = e_{n-1} = 0 imposed, Newton's identities collapse
// the n-th power sum to p_n = (-1)^{n-1} n e_n; feeding the Euler number
// integral (= 2 on even spheres) through the resulting top Chern character
// gives the twisted signature index (-2)^{n+1} / (n-1)! whose integrality
// fails from n = 4 on, and the Todd genus route on S^4 gives 1/6.
//
// The Morse function is h(A) = tr(A K^t) with K the rotation of the first
// two coordinates; h = 2 <A e_{-1}, ebar_0>, its critical points are the two
// fibers over +/- ebar_0 with values +/- 2, and transverse Hessian
// eigenvalues -/+ 2 (index 2n at the maximum, 0 at the minimum) when probed
// along the horizontal generators xt_l, whose sphere projections are
// orthonormal.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "twistor/matcore.hpp"

namespace twistor::chartop {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational with positive denominator and reduced terms.
class Rational {
 public:
  Rational() = default;
  Rational(long long value) : num_(value) {}  // NOLINT: implicit by design
  Rational(BigInt num, BigInt den);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  std::string str() const;
  double to_double() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

 private:
  void normalize();
  BigInt num_ = 0;
  BigInt den_ = 1;
};

BigInt factorial(int n);
Rational pow_rational(const Rational& base, int exp);

// Integer-coefficient polynomial, coefficients ascending by degree; the zero
// polynomial has an empty coefficient list.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs);

  static IntPoly one();
  static IntPoly monomial(int degree, BigInt coeff = 1);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  BigInt coeff(int degree) const;
  BigInt evaluate(const BigInt& t) const;

  IntPoly& operator+=(const IntPoly& o);
  IntPoly& operator*=(const IntPoly& o);
  friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
  friend IntPoly operator*(IntPoly a, const IntPoly& b) { return a *= b; }
  friend bool operator==(const IntPoly& a, const IntPoly& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  void trim();
  std::vector<BigInt> coeffs_;
};

// Coefficient c with p_n = c * e_n once e_1 = ... = e_{n-1} = 0 are imposed
// in Newton's identities; equals (-1)^{n-1} n.  Requires n >= 1.
Rational newton_chern_identity(int n);

struct IndexResult {
  Rational value;
  bool integral;
};

// Twisted signature index on the 2n-sphere: 2^n * (top Chern character
// coefficient) * (Euler integral 2), computed through newton_chern_identity.
// Requires n >= 2; the n = 1 case carries no obstruction from this operator.
IndexResult signature_index(int n);

// Todd-genus route on S^4 with a prescribed value of the c_2 integral.
Rational todd_quotient_s4(const Rational& c2_integral);

// Dolbeault index on S^4: todd_quotient_s4(2) = 1/6, not an integer.
IndexResult dolbeault_index_s4();

// Poincare polynomial of the orthogonal twistor space of R^{2n}:
// prod_{k=1}^{n} (1 + t^{2k}).
IntPoly poincare_polynomial(int n);

// --- Morse data for h(A) = tr(A K^t) on skew orthogonal structures --------

// The reference rank-2 rotation K = ebar_0 ebar_{-1}^t - ebar_{-1} ebar_0^t.
Eigen::MatrixXd morse_reference(Eigen::Index order);

// h(A); |h| <= 2, with equality exactly on the fibers over +/- ebar_0.
double morse_height(const matcore::ComplexStructure& a);

// Riemannian gradient: tangent projection (K + A K A)/2; vanishes exactly
// when A e_{-1} = +/- ebar_0.
matcore::TangentMatrix morse_gradient(const matcore::ComplexStructure& a);

struct MorseState {
  matcore::ComplexStructure a;
  double height;
  double grad_norm;
};

MorseState morse_state(const matcore::ComplexStructure& a);

// Second-difference Hessian of h at a critical point along the given tangent
// directions (symmetrized, Richardson-extrapolated from steps s and s/2),
// returned as the eigenvalues of the quadratic form matrix.
Eigen::VectorXd morse_hessian_spectrum(const matcore::ComplexStructure& a,
                                       const std::vector<Eigen::MatrixXd>& dirs,
                                       double s = 1e-3);

// Quadratic form value along a single direction (same scheme).
double morse_second_difference(const matcore::ComplexStructure& a,
                               const Eigen::MatrixXd& dir, double s = 1e-3);

// Fixed-step gradient ascent A <- retract(A + step * grad h).  Returns the
// trajectory's final state; iterates until h >= target or max_steps.
MorseState morse_ascend(const matcore::ComplexStructure& start, double step,
                        double target, int max_steps);

}  // namespace twistor::chartop
