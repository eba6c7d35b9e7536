#include "attractor/bps_attractor.hpp"

#include <algorithm>

namespace attractor {

SparsePoly SparsePoly::constant(int nvars, const Rational& c) {
  SparsePoly p(nvars);
  p.add_term(std::vector<std::uint8_t>(nvars, 0), c);
  return p;
}

SparsePoly SparsePoly::variable(int nvars, int i) {
  SparsePoly p(nvars);
  std::vector<std::uint8_t> e(nvars, 0);
  e[i] = 1;
  p.add_term(std::move(e), Rational(1));
  return p;
}

void SparsePoly::add_term(std::vector<std::uint8_t> e, const Rational& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(std::move(e), c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
  SparsePoly out(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      std::vector<std::uint8_t> e(ea);
      for (int i = 0; i < out.nvars_; ++i) e[i] = static_cast<std::uint8_t>(e[i] + eb[i]);
      out.add_term(std::move(e), ca * cb);
    }
  return out;
}

SparsePoly SparsePoly::scaled(const Rational& c) const {
  SparsePoly out(nvars_);
  if (c.is_zero()) return out;
  for (const auto& [e, v] : terms_) out.terms_.emplace(e, v * c);
  return out;
}

SparsePoly SparsePoly::derivative(int var) const {
  SparsePoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    std::vector<std::uint8_t> d(e);
    const int k = d[var]--;
    out.add_term(std::move(d), c * Rational(k));
  }
  return out;
}

Rational SparsePoly::eval_exact(const std::vector<Rational>& x) const {
  Rational acc(0);
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) term *= x[i];
    acc += term;
  }
  return acc;
}

// variable layout: 0 = p0, 1..n = p, n+1..2n = q (J coordinates), 2n+1 = q0
BpsSolver::BpsSolver(const CubicNormStructure& J) : J_(&J), i4_(2 * J.n + 2) {
  const int n = J.n;
  const int nv = 2 * n + 2;
  auto var = [&](int i) { return SparsePoly::variable(nv, i); };
  const int vp0 = 0, vq0 = nv - 1;
  auto vp = [&](int i) { return 1 + i; };
  auto vq = [&](int i) { return n + 1 + i; };

  SparsePoly a = var(vp0) * var(vq0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!J.gram[i][j].is_zero())
        a += (var(vp(i)) * var(vq(j))).scaled(J.gram[i][j]);

  SparsePoly np(nv), nq(nv);
  for (const auto& m : J.monomials) {
    np += (var(vp(m.i)) * var(vp(m.j)) * var(vp(m.k))).scaled(m.c);
    nq += (var(vq(m.i)) * var(vq(m.j)) * var(vq(m.k))).scaled(m.c);
  }

  // (q#, p#) = dN(q)^T G^{-1} dN(p)
  std::vector<SparsePoly> dnp, dnq;
  for (int i = 0; i < n; ++i) {
    dnp.push_back(np.derivative(vp(i)));
    dnq.push_back(nq.derivative(vq(i)));
  }
  SparsePoly cross(nv);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!J.gram_inv[i][j].is_zero()) cross += (dnq[i] * dnp[j]).scaled(J.gram_inv[i][j]);

  i4_ = (var(vq0) * np).scaled(Rational(4)) - (var(vp0) * nq).scaled(Rational(4)) +
        cross.scaled(Rational(4)) - a * a;

  di4_.reserve(nv);
  for (int v = 0; v < nv; ++v) di4_.push_back(i4_.derivative(v));
}

std::vector<Rational> BpsSolver::charge_values(const ChargeVector& g) const {
  if (g.J != J_) throw exact_error("charge belongs to a different norm structure");
  const int n = J_->n;
  std::vector<Rational> vals(2 * n + 2);
  vals[0] = g.p0;
  for (int i = 0; i < n; ++i) {
    vals[1 + i] = g.p[i];
    vals[n + 1 + i] = g.q[i];
  }
  vals[2 * n + 1] = g.q0;
  return vals;
}

Rational BpsSolver::quartic(const ChargeVector& g) const {
  return i4_.eval_exact(charge_values(g));
}

std::pair<Rational, std::vector<Rational>> BpsSolver::quartic_q_gradient(
    const ChargeVector& g) const {
  const int n = J_->n;
  const std::vector<Rational> vals = charge_values(g);
  const Rational dq0 = di4_[2 * n + 1].eval_exact(vals);
  std::vector<Rational> dw(n);
  for (int j = 0; j < n; ++j) dw[j] = di4_[n + 1 + j].eval_exact(vals);
  // q enters through w = q in J coordinates; d/dQ_i = sum_j Ginv_ij d/dw_j
  std::vector<Rational> dq = J_->gram_inv_apply(dw);
  return {dq0, dq};
}

std::pair<Rational, std::vector<Rational>> quartic_q_gradient_closed(const ChargeVector& g) {
  const CubicNormStructure& J = *g.J;
  const Rational a = g.p0 * g.q0 + J.pair(g.p, g.q);
  const Rational dq0 = Rational(-2) * a * g.p0 + Rational(4) * J.norm(g.p);
  const std::vector<Rational> qs = J.sharp(g.q);
  const std::vector<Rational> cr = J.cross(g.q, J.sharp(g.p));
  std::vector<Rational> dq(J.n);
  for (int i = 0; i < J.n; ++i)
    dq[i] = Rational(-2) * a * g.p[i] - Rational(4) * g.p0 * qs[i] + Rational(4) * cr[i];
  return {dq0, dq};
}

BpsSolution BpsSolver::solve(const ChargeVector& g) const {
  const int n = J_->n;
  BpsSolution sol;
  sol.quartic = quartic(g);
  if (sol.quartic.sign() <= 0)
    throw exact_error("charge is not BPS: quartic invariant is not positive");

  // I4 = (num den)/den^2; sqrt(I4) = (root/den) sqrt(core)
  Int root;
  const Int core = squarefree_core(sol.quartic.num() * sol.quartic.den(), &root);
  sol.disc_core = -core;
  sol.sigma = Rational(root, sol.quartic.den());

  const std::vector<Rational> vals = charge_values(g);
  auto [dq0, dq] = quartic_q_gradient(g);
  const Rational dp0 = di4_[0].eval_exact(vals);
  std::vector<Rational> dp(n);
  for (int i = 0; i < n; ++i) dp[i] = di4_[1 + i].eval_exact(vals);

  const Rational scale = Rational(1) / (Rational(2) * sol.sigma * Rational(core));
  const std::vector<Rational> qdual = J_->gram_apply(g.q);
  // X^I = p^I - i dI1/dq_I, F_I = q_I + i dI1/dp^I, with i sqrt(f) = sqrt(-f)
  sol.x0 = QuadFieldElem(g.p0, -dq0 * scale, sol.disc_core);
  sol.f0 = QuadFieldElem(g.q0, dp0 * scale, sol.disc_core);
  sol.xj.reserve(n);
  sol.fj.reserve(n);
  for (int i = 0; i < n; ++i) {
    sol.xj.emplace_back(g.p[i], -dq[i] * scale, sol.disc_core);
    sol.fj.emplace_back(qdual[i], dp[i] * scale, sol.disc_core);
  }

  if (sol.x0.is_zero()) {
    sol.homogeneous_only = true;
    return sol;
  }

  sol.t.reserve(n);
  for (int i = 0; i < n; ++i) sol.t.push_back(sol.xj[i] / sol.x0);

  // Branch of sqrt(I4): with t = a + b sqrt(-f), exactly one choice gives
  // N(b) > 0, which e^{-K} = 8 N(Im t) > 0 requires.
  std::vector<Rational> b(n);
  for (int i = 0; i < n; ++i) b[i] = sol.t[i].surd_part();
  const int nb = J_->norm(b).sign();
  if (nb == 0) throw exact_error("degenerate attractor point: N(Im t) = 0");
  if (nb < 0) {
    sol.sigma = -sol.sigma;
    sol.x0 = sol.x0.conj();
    sol.f0 = sol.f0.conj();
    for (auto& x : sol.xj) x = x.conj();
    for (auto& x : sol.fj) x = x.conj();
    for (auto& tt : sol.t) tt = tt.conj();
    for (auto& bi : b) bi = -bi;
  }

  // Interior of the symmetric cone is not guaranteed; record membership.
  auto trace_of = [&](const std::vector<Rational>& x) {
    Rational tr(0);
    for (int i = 0; i < n; ++i) tr += J_->basis_traces[i] * x[i];
    return tr;
  };
  sol.interior_cone = trace_of(b).sign() > 0 && trace_of(J_->sharp(b)).sign() > 0;
  return sol;
}

bool verify_attractor(const ChargeVector& g, const BpsSolution& s) {
  const CubicNormStructure& J = *g.J;
  const int n = J.n;
  if (static_cast<int>(s.xj.size()) != n || static_cast<int>(s.fj.size()) != n) return false;

  // real parts recover the charge in canonical symplectic coordinates
  if (!(s.x0.rational_part() == g.p0)) return false;
  if (!(s.f0.rational_part() == g.q0)) return false;
  const std::vector<Rational> qdual = J.gram_apply(g.q);
  for (int i = 0; i < n; ++i) {
    if (!(s.xj[i].rational_part() == g.p[i])) return false;
    if (!(s.fj[i].rational_part() == qdual[i])) return false;
  }

  // prepotential graph, chart-free so X^0 = 0 is covered:
  // X^0 F_i = N_i(X_J) and (X^0)^2 F_0 = -N(X_J)
  const std::vector<QuadFieldElem> dn = J.grad_at<QuadFieldElem>(s.xj.data());
  for (int i = 0; i < n; ++i)
    if (!(s.x0 * s.fj[i] == dn[i])) return false;
  const QuadFieldElem nx = J.norm_at<QuadFieldElem>(s.xj.data());
  return s.x0 * s.x0 * s.f0 == -nx;
}

namespace {
CmMinPoly minimal_polynomial(const QuadFieldElem& t) {
  const Rational a = t.rational_part();
  const Rational b = t.surd_part();
  if (b.is_zero()) {
    // linear: den(a) t - num(a)
    return CmMinPoly{0, a.den(), Int(-a.num())};
  }
  // monic: t^2 - 2a t + (a^2 - D b^2); clear denominators, reduce
  const Rational c1 = Rational(-2) * a;
  const Rational c0 = a * a - Rational(t.discriminant_core()) * b * b;
  Int l;
  mpz_lcm(l.get_mpz_t(), c1.den().get_mpz_t(), c0.den().get_mpz_t());
  Int A = l;
  Int B = (c1 * Rational(l)).num();
  Int C = (c0 * Rational(l)).num();
  Int d;
  mpz_gcd(d.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
  mpz_gcd(d.get_mpz_t(), d.get_mpz_t(), C.get_mpz_t());
  return CmMinPoly{A / d, B / d, C / d};
}
}  // namespace

CmCertificate cm_certificate(const ChargeVector& g, const BpsSolution& s) {
  CmCertificate cert;
  cert.disc_core = s.disc_core;
  cert.affine_chart = !s.homogeneous_only;
  cert.attractor_equations_exact = verify_attractor(g, s);
  if (s.homogeneous_only) {
    // no moduli chart; the field is witnessed by the projective periods
    bool any_surd = !s.x0.surd_part().is_zero() || !s.f0.surd_part().is_zero();
    for (const auto& x : s.xj) any_surd = any_surd || !x.surd_part().is_zero();
    cert.field_is_imaginary_quadratic = any_surd && s.disc_core < 0;
    return cert;
  }

  bool any_quadratic = false;
  for (const auto& t : s.t) {
    CmMinPoly mp = minimal_polynomial(t);
    if (mp.A != 0) {
      any_quadratic = true;
      // the root field of each quadratic factor must match disc_core
      const Int disc = mp.B * mp.B - 4 * mp.A * mp.C;
      if (disc >= 0 || squarefree_core(disc) != s.disc_core) {
        cert.attractor_equations_exact = false;
      }
    }
    cert.minpoly.push_back(mp);
  }
  cert.field_is_imaginary_quadratic = any_quadratic && s.disc_core < 0;
  return cert;
}

}  // namespace attractor
