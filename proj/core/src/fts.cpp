#include "attractor/fts.hpp"

namespace attractor {

namespace {
void check_compatible(const ChargeVector& v, const ChargeVector& w) {
  if (v.J != w.J) throw exact_error("charges live over different norm structures");
}
}  // namespace

ChargeVector ChargeVector::zero(const CubicNormStructure& J) {
  ChargeVector g;
  g.J = &J;
  g.p0 = Rational(0);
  g.q0 = Rational(0);
  g.p.assign(J.n, Rational(0));
  g.q.assign(J.n, Rational(0));
  return g;
}

ChargeVector operator+(const ChargeVector& v, const ChargeVector& w) {
  check_compatible(v, w);
  ChargeVector out = v;
  out.p0 += w.p0;
  out.q0 += w.q0;
  for (int i = 0; i < v.J->n; ++i) {
    out.p[i] += w.p[i];
    out.q[i] += w.q[i];
  }
  return out;
}

ChargeVector operator-(const ChargeVector& v, const ChargeVector& w) {
  check_compatible(v, w);
  ChargeVector out = v;
  out.p0 -= w.p0;
  out.q0 -= w.q0;
  for (int i = 0; i < v.J->n; ++i) {
    out.p[i] -= w.p[i];
    out.q[i] -= w.q[i];
  }
  return out;
}

ChargeVector scale(const Rational& s, const ChargeVector& v) {
  ChargeVector out = v;
  out.p0 *= s;
  out.q0 *= s;
  for (int i = 0; i < v.J->n; ++i) {
    out.p[i] *= s;
    out.q[i] *= s;
  }
  return out;
}

bool operator==(const ChargeVector& v, const ChargeVector& w) {
  return v.J == w.J && v.p0 == w.p0 && v.q0 == w.q0 && v.p == w.p && v.q == w.q;
}

Rational symplectic_form(const ChargeVector& v, const ChargeVector& w) {
  check_compatible(v, w);
  const CubicNormStructure& J = *v.J;
  return v.p0 * w.q0 + J.pair(v.p, w.q) - J.pair(v.q, w.p) - v.q0 * w.p0;
}

Rational quartic_invariant(const ChargeVector& g) {
  const CubicNormStructure& J = *g.J;
  const Rational a = g.p0 * g.q0 + J.pair(g.p, g.q);
  // (q#, p#) = dN(q)^T G^{-1} dN(p)
  const std::vector<Rational> dq = J.grad(g.q);
  const std::vector<Rational> gp = J.gram_inv_apply(J.grad(g.p));
  Rational cross(0);
  for (int i = 0; i < J.n; ++i)
    if (!dq[i].is_zero() && !gp[i].is_zero()) cross += dq[i] * gp[i];
  return -a * a + Rational(4) * g.q0 * J.norm(g.p) - Rational(4) * g.p0 * J.norm(g.q) +
         Rational(4) * cross;
}

OrbitClass classify(const ChargeVector& g) {
  const int s = quartic_invariant(g).sign();
  if (s > 0) return OrbitClass::bps;
  if (s < 0) return OrbitClass::non_bps;
  return OrbitClass::small;
}

std::string orbit_name(OrbitClass c) {
  switch (c) {
    case OrbitClass::bps: return "BPS";
    case OrbitClass::non_bps: return "nonBPS";
    case OrbitClass::small: return "small";
  }
  return "?";
}

Rational cubic_discriminant(const BinaryCubic& f) {
  const Rational &a = f.a, &b = f.b, &c = f.c, &d = f.d;
  return Rational(18) * a * b * c * d - Rational(4) * b * b * b * d + b * b * c * c -
         Rational(4) * a * c * c * c - Rational(27) * a * a * d * d;
}

ChargeVector charge_of_cubic(const CubicNormStructure& rank1, const BinaryCubic& f) {
  if (!rank1.is_rank1()) throw exact_error("the cubic-form dictionary needs the rank-1 model");
  ChargeVector g = ChargeVector::zero(rank1);
  g.p0 = Rational(3) * f.a;
  g.p[0] = -f.b;
  g.q[0] = f.c;
  g.q0 = Rational(3) * f.d;
  return g;
}

BinaryCubic cubic_of_charge(const ChargeVector& g) {
  if (!g.J->is_rank1()) throw exact_error("the cubic-form dictionary needs the rank-1 model");
  return BinaryCubic{g.p0 / Rational(3), -g.p[0], g.q[0], g.q0 / Rational(3)};
}

Rational dictionary_constant() { return Rational(3); }

SL2 operator*(const SL2& g, const SL2& h) {
  return {g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
          g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d};
}

BinaryCubic sl2_apply(const SL2& g, const BinaryCubic& f) {
  if (g.a * g.d - g.b * g.c != 1) throw exact_error("matrix is not in SL2");
  // substitute (X,Y) -> g^{-1}(X,Y) = (dX - bY, -cX + aY)
  const Rational u(g.d), v(Int(-g.b)), w(Int(-g.c)), s(g.a);
  const Rational &a = f.a, &b = f.b, &c = f.c, &d = f.d;
  BinaryCubic out;
  out.a = a * u * u * u + b * u * u * w + c * u * w * w + d * w * w * w;
  out.b = Rational(3) * a * u * u * v + b * (u * u * s + Rational(2) * u * v * w) +
          c * (w * w * v + Rational(2) * u * w * s) + Rational(3) * d * w * w * s;
  out.c = Rational(3) * a * u * v * v + b * (v * v * w + Rational(2) * u * v * s) +
          c * (u * s * s + Rational(2) * v * w * s) + Rational(3) * d * w * s * s;
  out.d = a * v * v * v + b * v * v * s + c * v * s * s + d * s * s * s;
  return out;
}

ChargeVector sl2_apply(const SL2& g, const ChargeVector& charge) {
  return charge_of_cubic(*charge.J, sl2_apply(g, cubic_of_charge(charge)));
}

}  // namespace attractor
