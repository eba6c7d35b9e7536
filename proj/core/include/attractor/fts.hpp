// Charge space Q + J + J + Q attached to a cubic norm structure: symplectic
// pairing, the quartic invariant, and (for the rank-1 model) the dictionary
// between charges and integral binary cubic forms.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attractor/jordan.hpp"

namespace attractor {

// Charge (p0, p, q, q0); p and q are stored in J coordinates, so the
// canonical dual momenta are q_0 itself and Q_i = (G q)_i.
struct ChargeVector {
  const CubicNormStructure* J = nullptr;
  Rational p0;
  std::vector<Rational> p;
  std::vector<Rational> q;
  Rational q0;

  static ChargeVector zero(const CubicNormStructure& J);
};

ChargeVector operator+(const ChargeVector& v, const ChargeVector& w);
ChargeVector operator-(const ChargeVector& v, const ChargeVector& w);
ChargeVector scale(const Rational& s, const ChargeVector& v);
bool operator==(const ChargeVector& v, const ChargeVector& w);

// <v,w> = p0(v) q0(w) + (p(v),q(w)) - (q(v),p(w)) - q0(v) p0(w)
Rational symplectic_form(const ChargeVector& v, const ChargeVector& w);

// I4 = -(p0 q0 + (p,q))^2 + 4 q0 N(p) - 4 p0 N(q) + 4 (q#, p#)
Rational quartic_invariant(const ChargeVector& g);

enum class OrbitClass { bps, non_bps, small };
OrbitClass classify(const ChargeVector& g);
std::string orbit_name(OrbitClass c);

// a X^3 + b X^2 Y + c X Y^2 + d Y^3
struct BinaryCubic {
  Rational a, b, c, d;
};

// 18abcd - 4b^3d + b^2c^2 - 4ac^3 - 27a^2d^2
Rational cubic_discriminant(const BinaryCubic& f);

// Charge of a cubic form in the rank-1 model: (p0, p1, q1, q0) = (3a, -b, c, 3d).
// Calibration: quartic_invariant(charge_of_cubic(f)) = 3 * disc(f).
ChargeVector charge_of_cubic(const CubicNormStructure& rank1, const BinaryCubic& f);
BinaryCubic cubic_of_charge(const ChargeVector& g);
// The constant in I4 = c0 * disc under the dictionary.
Rational dictionary_constant();

// Integer 2x2 matrix with det +1.
struct SL2 {
  Int a, b, c, d;
  static SL2 identity() { return {1, 0, 0, 1}; }
  SL2 inverse() const { return {d, -b, -c, a}; }
};
SL2 operator*(const SL2& g, const SL2& h);

// Left action (g . f)(v) = f(g^{-1} v); roots move by the Mobius map of g.
BinaryCubic sl2_apply(const SL2& g, const BinaryCubic& f);
// Same action transported through the dictionary.
ChargeVector sl2_apply(const SL2& g, const ChargeVector& charge);

}  // namespace attractor
