#include "attractor/exactnum.hpp"

#include <cmath>
#include <utility>

namespace attractor {

Rational Rational::from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(Int(s));
  return Rational(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Int squarefree_core(const Int& n, Int* square_root_part) {
  if (square_root_part) *square_root_part = 1;
  if (n == 0) return 0;
  Int m = abs(n);
  Int core = 1, root = 1;
  for (Int p = 2; p * p <= m && p <= 1000000; p += (p == 2 ? 1 : 2)) {
    if (m % p != 0) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) root *= p;
    if (e % 2) core *= p;
  }
  if (m > 1) {
    if (mpz_perfect_square_p(m.get_mpz_t())) {
      Int r;
      mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
      root *= r;
    } else {
      core *= m;  // prime, or squarefree beyond the trial bound
    }
  }
  if (square_root_part) *square_root_part = root;
  return n < 0 ? Int(-core) : core;
}

QuadFieldElem::QuadFieldElem(Rational a, Rational b, const Int& d)
    : a_(std::move(a)), b_(std::move(b)), d_(d) {
  if (b_.is_zero()) {
    d_ = 1;
    return;
  }
  if (d_ == 0) throw exact_error("sqrt(0) is not a field generator");
  Int root;
  Int core = squarefree_core(d_, &root);
  if (core == 1) {  // d was a perfect square; the element is rational
    a_ += b_ * Rational(root);
    b_ = 0;
    d_ = 1;
    return;
  }
  b_ *= Rational(root);
  d_ = core;
}

Int QuadFieldElem::common_core(const QuadFieldElem& x, const QuadFieldElem& y) {
  if (x.b_.is_zero()) return y.d_;
  if (y.b_.is_zero()) return x.d_;
  if (x.d_ != y.d_) throw exact_error("quadratic field mismatch");
  return x.d_;
}

QuadFieldElem operator+(const QuadFieldElem& x, const QuadFieldElem& y) {
  Int d = QuadFieldElem::common_core(x, y);
  return QuadFieldElem(x.a_ + y.a_, x.b_ + y.b_, d);
}

QuadFieldElem operator-(const QuadFieldElem& x, const QuadFieldElem& y) {
  Int d = QuadFieldElem::common_core(x, y);
  return QuadFieldElem(x.a_ - y.a_, x.b_ - y.b_, d);
}

QuadFieldElem operator*(const QuadFieldElem& x, const QuadFieldElem& y) {
  Int d = QuadFieldElem::common_core(x, y);
  return QuadFieldElem(x.a_ * y.a_ + Rational(d) * x.b_ * y.b_,
                       x.a_ * y.b_ + x.b_ * y.a_, d);
}

QuadFieldElem QuadFieldElem::inverse() const {
  Rational n = field_norm();
  if (n.is_zero()) throw exact_error("quadratic field division by zero");
  return QuadFieldElem(a_ / n, -b_ / n, d_);
}

QuadFieldElem operator/(const QuadFieldElem& x, const QuadFieldElem& y) {
  Int d = QuadFieldElem::common_core(x, y);
  QuadFieldElem yi = QuadFieldElem(y.a_, y.b_, d).inverse();
  return x * yi;
}

std::pair<double, double> QuadFieldElem::to_complex() const {
  double s = std::sqrt(std::abs(d_.get_d()));
  if (d_ > 0) return {a_.to_double() + b_.to_double() * s, 0.0};
  return {a_.to_double(), b_.to_double() * s};
}

std::string QuadFieldElem::str() const {
  if (b_.is_zero()) return a_.str();
  return a_.str() + " + (" + b_.str() + ")*sqrt(" + d_.get_str() + ")";
}

namespace {
std::vector<Rational> default_params(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::rational: return {};
    case AlgebraKind::imaginary_quadratic: return {Rational(-1)};
    case AlgebraKind::quaternion: return {Rational(-1), Rational(-1)};
    case AlgebraKind::octonion: return {Rational(-1), Rational(-1), Rational(-1)};
  }
  throw exact_error("unknown algebra kind");
}

int expected_params(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::rational: return 0;
    case AlgebraKind::imaginary_quadratic: return 1;
    case AlgebraKind::quaternion: return 2;
    case AlgebraKind::octonion: return 3;
  }
  throw exact_error("unknown algebra kind");
}
}  // namespace

CompositionAlgebra::CompositionAlgebra(AlgebraKind kind, std::vector<Rational> params)
    : kind_(kind), dim_(1 << params.size()), params_(std::move(params)) {}

std::shared_ptr<const CompositionAlgebra> CompositionAlgebra::make(
    AlgebraKind kind, std::vector<Rational> params) {
  if (params.empty()) params = default_params(kind);
  if (static_cast<int>(params.size()) != expected_params(kind))
    throw exact_error("wrong parameter count for composition algebra");
  for (const auto& p : params)
    if (p.is_zero()) throw exact_error("composition algebra parameter must be nonzero");
  return std::shared_ptr<const CompositionAlgebra>(
      new CompositionAlgebra(kind, std::move(params)));
}

bool CompositionAlgebra::same_as(const CompositionAlgebra& o) const {
  return kind_ == o.kind_ && params_ == o.params_;
}

std::string CompositionAlgebra::name() const {
  switch (kind_) {
    case AlgebraKind::rational: return "rational";
    case AlgebraKind::imaginary_quadratic: return "imaginary_quadratic";
    case AlgebraKind::quaternion: return "quaternion";
    case AlgebraKind::octonion: return "octonion";
  }
  return "?";
}

// Cayley-Dickson product (p,q)(r,s) = (pr + g*conj(s)q, sp + q*conj(r)),
// with conj(p,q) = (conj(p), -q). This is the doubling for which the level-k
// unit e squares to the level parameter and e1*e2 = +e3 in the quaternions.
void CompositionAlgebra::mul_rec(int dim, const Rational* x, const Rational* y,
                                 Rational* out, Rational* scratch) const {
  if (dim == 1) {
    out[0] = x[0] * y[0];
    return;
  }
  int h = dim / 2;
  // level index: dim = 2^k uses params_[k-1]
  int level = 0;
  for (int d = dim; d > 1; d /= 2) ++level;
  const Rational& g = params_[level - 1];

  const Rational *p = x, *q = x + h, *r = y, *s = y + h;
  Rational* cs = scratch;            // conj(s), then conj(r)
  Rational* t1 = scratch + h;        // product temporaries
  Rational* rest = scratch + 2 * h;  // scratch for recursion

  // first half: p*r + g * conj(s)*q
  mul_rec(h, p, r, out, rest);
  cs[0] = s[0];
  for (int i = 1; i < h; ++i) cs[i] = -s[i];
  mul_rec(h, cs, q, t1, rest);
  for (int i = 0; i < h; ++i) out[i] += g * t1[i];

  // second half: s*p + q*conj(r)
  mul_rec(h, s, p, out + h, rest);
  cs[0] = r[0];
  for (int i = 1; i < h; ++i) cs[i] = -r[i];
  mul_rec(h, q, cs, t1, rest);
  for (int i = 0; i < h; ++i) out[h + i] += t1[i];
}

std::vector<Rational> CompositionAlgebra::mul(const std::vector<Rational>& x,
                                              const std::vector<Rational>& y) const {
  std::vector<Rational> out(dim_);
  std::vector<Rational> scratch(dim_ > 1 ? 2 * dim_ : 1);
  mul_rec(dim_, x.data(), y.data(), out.data(), scratch.data());
  return out;
}

std::vector<Rational> CompositionAlgebra::conj(const std::vector<Rational>& x) const {
  std::vector<Rational> out(x);
  for (int i = 1; i < dim_; ++i) out[i] = -out[i];
  return out;
}

CompositionElem::CompositionElem(std::shared_ptr<const CompositionAlgebra> alg,
                                 std::vector<Rational> coords)
    : alg_(std::move(alg)), c_(std::move(coords)) {
  if (static_cast<int>(c_.size()) != alg_->dim())
    throw exact_error("coordinate count does not match algebra dimension");
}

CompositionElem CompositionElem::zero(std::shared_ptr<const CompositionAlgebra> alg) {
  std::vector<Rational> c(alg->dim(), Rational(0));
  return CompositionElem(std::move(alg), std::move(c));
}

CompositionElem CompositionElem::one(std::shared_ptr<const CompositionAlgebra> alg) {
  std::vector<Rational> c(alg->dim(), Rational(0));
  c[0] = 1;
  return CompositionElem(std::move(alg), std::move(c));
}

CompositionElem CompositionElem::basis(std::shared_ptr<const CompositionAlgebra> alg, int i) {
  std::vector<Rational> c(alg->dim(), Rational(0));
  c.at(i) = 1;
  return CompositionElem(std::move(alg), std::move(c));
}

CompositionElem CompositionElem::conj() const {
  return CompositionElem(alg_, alg_->conj(c_));
}

Rational CompositionElem::norm() const {
  CompositionElem n = *this * this->conj();
  for (int i = 1; i < alg_->dim(); ++i)
    if (!n.c_[i].is_zero()) throw exact_error("norm did not land in the scalars");
  return n.c_[0];
}

static void check_same(const CompositionElem& x, const CompositionElem& y) {
  if (!x.algebra().same_as(y.algebra()))
    throw exact_error("incompatible composition algebras");
}

CompositionElem operator+(const CompositionElem& x, const CompositionElem& y) {
  check_same(x, y);
  std::vector<Rational> c(x.coords());
  for (size_t i = 0; i < c.size(); ++i) c[i] += y.coords()[i];
  return CompositionElem(x.algebra_ptr(), std::move(c));
}

CompositionElem operator-(const CompositionElem& x, const CompositionElem& y) {
  check_same(x, y);
  std::vector<Rational> c(x.coords());
  for (size_t i = 0; i < c.size(); ++i) c[i] -= y.coords()[i];
  return CompositionElem(x.algebra_ptr(), std::move(c));
}

CompositionElem CompositionElem::operator-() const {
  std::vector<Rational> c(c_);
  for (auto& v : c) v = -v;
  return CompositionElem(alg_, std::move(c));
}

CompositionElem operator*(const CompositionElem& x, const CompositionElem& y) {
  check_same(x, y);
  return CompositionElem(x.algebra_ptr(), x.algebra().mul(x.coords(), y.coords()));
}

bool operator==(const CompositionElem& x, const CompositionElem& y) {
  return x.algebra().same_as(y.algebra()) && x.coords() == y.coords();
}

CompositionElem comp_mul(const CompositionElem& x, const CompositionElem& y) {
  return x * y;
}

}  // namespace attractor
