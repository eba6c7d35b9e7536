// Exact arithmetic foundation: arbitrary-precision rationals, quadratic field
// elements a + b*sqrt(D), and composition algebras over Q via Cayley-Dickson
// doubling. All values are immutable after construction and safe to share
// between threads.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace attractor {

using Int = mpz_class;

// Thrown when exact-arithmetic preconditions fail (division by zero,
// mismatched fields or algebras).
struct exact_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonical rational: gcd(|num|, den) = 1, den > 0. Thin wrapper over
// mpq_class so the invariant is enforced at every construction site.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(const Int& n) : v_(n) {}
  Rational(const Int& n, const Int& d) : v_(n, d) {
    if (d == 0) throw exact_error("rational with zero denominator");
    v_.canonicalize();
  }
  Rational(long n, long d) : Rational(Int(n), Int(d)) {}
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  // Parses "n" or "n/d".
  static Rational from_string(const std::string& s);

  Int num() const { return v_.get_num(); }
  Int den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_zero() const { return v_ == 0; }
  int sign() const { return sgn(v_); }
  double to_double() const { return v_.get_d(); }
  std::string str() const;

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw exact_error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

 private:
  mpq_class v_;
};

// n = core * s^2 with core squarefree (sign of core = sign of n). Exact for
// |n| up to ~1e12: trial division to 1e6 plus a perfect-square test on the
// cofactor; larger inputs with a square prime factor above 1e6 would be
// misclassified, which this artifact never produces.
Int squarefree_core(const Int& n, Int* square_root_part = nullptr);

// Element a + b*sqrt(D) of Q(sqrt(D)), D squarefree and not 0 or 1.
// Purely rational values carry D = 1 with b = 0 and mix with any field.
class QuadFieldElem {
 public:
  QuadFieldElem() : a_(0), b_(0), d_(1) {}
  QuadFieldElem(Rational a) : a_(std::move(a)), b_(0), d_(1) {}  // NOLINT
  // Absorbs square factors of d into the surd part: a + b*sqrt(s^2 core)
  // becomes a + (b*s)*sqrt(core).
  QuadFieldElem(Rational a, Rational b, const Int& d);

  const Rational& rational_part() const { return a_; }
  const Rational& surd_part() const { return b_; }
  const Int& discriminant_core() const { return d_; }

  bool is_rational() const { return b_.is_zero(); }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  // Field norm a^2 - D b^2.
  Rational field_norm() const { return a_ * a_ - Rational(d_) * b_ * b_; }
  QuadFieldElem conj() const { return QuadFieldElem(a_, -b_, d_); }
  QuadFieldElem inverse() const;

  // Numeric image; requires D < 0 for the imaginary part to be real.
  std::pair<double, double> to_complex() const;
  std::string str() const;

  QuadFieldElem operator-() const { return QuadFieldElem(-a_, -b_, d_); }
  friend QuadFieldElem operator+(const QuadFieldElem& x, const QuadFieldElem& y);
  friend QuadFieldElem operator-(const QuadFieldElem& x, const QuadFieldElem& y);
  friend QuadFieldElem operator*(const QuadFieldElem& x, const QuadFieldElem& y);
  friend QuadFieldElem operator/(const QuadFieldElem& x, const QuadFieldElem& y);
  friend bool operator==(const QuadFieldElem& x, const QuadFieldElem& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_.is_zero() || x.d_ == y.d_);
  }
  friend bool operator!=(const QuadFieldElem& x, const QuadFieldElem& y) { return !(x == y); }

  QuadFieldElem& operator+=(const QuadFieldElem& o) { return *this = *this + o; }
  QuadFieldElem& operator-=(const QuadFieldElem& o) { return *this = *this - o; }
  QuadFieldElem& operator*=(const QuadFieldElem& o) { return *this = *this * o; }

 private:
  // Returns the common field core, coercing rational values; throws on a
  // genuine mismatch.
  static Int common_core(const QuadFieldElem& x, const QuadFieldElem& y);
  Rational a_, b_;
  Int d_;
};

enum class AlgebraKind : std::uint8_t {
  rational,             // dim 1
  imaginary_quadratic,  // dim 2, parameter d < 0
  quaternion,           // dim 4, parameters (a, b)
  octonion,             // dim 8, parameters (a, b, c)
};

// Composition algebra over Q in the Cayley-Dickson basis: coordinate 0 is the
// real unit, doubling level k adjoins a unit squaring to params[k-1].
// Default parameters are all -1 (the definite R, C, H, O descents).
class CompositionAlgebra {
 public:
  static std::shared_ptr<const CompositionAlgebra> make(
      AlgebraKind kind, std::vector<Rational> params = {});

  AlgebraKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<Rational>& params() const { return params_; }
  bool same_as(const CompositionAlgebra& o) const;
  std::string name() const;

  // (p,q)(r,s) = (pr + g s̄q, sp + qr̄) with g the level parameter.
  std::vector<Rational> mul(const std::vector<Rational>& x,
                            const std::vector<Rational>& y) const;
  std::vector<Rational> conj(const std::vector<Rational>& x) const;

 private:
  CompositionAlgebra(AlgebraKind kind, std::vector<Rational> params);
  void mul_rec(int dim, const Rational* x, const Rational* y, Rational* out,
               Rational* scratch) const;

  AlgebraKind kind_;
  int dim_;
  std::vector<Rational> params_;
};

class CompositionElem {
 public:
  CompositionElem(std::shared_ptr<const CompositionAlgebra> alg,
                  std::vector<Rational> coords);
  static CompositionElem zero(std::shared_ptr<const CompositionAlgebra> alg);
  static CompositionElem one(std::shared_ptr<const CompositionAlgebra> alg);
  static CompositionElem basis(std::shared_ptr<const CompositionAlgebra> alg, int i);

  const CompositionAlgebra& algebra() const { return *alg_; }
  const std::shared_ptr<const CompositionAlgebra>& algebra_ptr() const { return alg_; }
  const std::vector<Rational>& coords() const { return c_; }

  CompositionElem conj() const;
  // Tr(x) = x + x̄, a rational.
  Rational trace() const { return c_[0] + c_[0]; }
  // norm(x) = x*x̄; asserts the product is scalar.
  Rational norm() const;

  friend CompositionElem operator+(const CompositionElem& x, const CompositionElem& y);
  friend CompositionElem operator-(const CompositionElem& x, const CompositionElem& y);
  friend CompositionElem operator*(const CompositionElem& x, const CompositionElem& y);
  CompositionElem operator-() const;
  friend bool operator==(const CompositionElem& x, const CompositionElem& y);

 private:
  std::shared_ptr<const CompositionAlgebra> alg_;
  std::vector<Rational> c_;
};

CompositionElem comp_mul(const CompositionElem& x, const CompositionElem& y);

}  // namespace attractor
