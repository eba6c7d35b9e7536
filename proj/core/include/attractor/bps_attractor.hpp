// Exact BPS attractor points. The quartic invariant is kept as a sparse
// polynomial in the charge components (p0, p_i, q_i, q0); its symbolic
// q-gradient gives the attractor periods X^I = p^I - i dI1/dq_I with
// I1 = sqrt(I4), which land in Q(sqrt(D)) for D = -squarefree part of I4.
#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "attractor/fts.hpp"

namespace attractor {

class SparsePoly {
 public:
  explicit SparsePoly(int nvars) : nvars_(nvars) {}
  static SparsePoly constant(int nvars, const Rational& c);
  static SparsePoly variable(int nvars, int i);

  int nvars() const { return nvars_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  SparsePoly& operator+=(const SparsePoly& o);
  SparsePoly& operator-=(const SparsePoly& o);
  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
  SparsePoly scaled(const Rational& c) const;
  SparsePoly derivative(int var) const;

  Rational eval_exact(const std::vector<Rational>& x) const;

 private:
  void add_term(std::vector<std::uint8_t> e, const Rational& c);
  int nvars_;
  std::map<std::vector<std::uint8_t>, Rational> terms_;

  friend class BpsSolver;
};

// Full attractor period vector: X^I = p^I - i dI1/dq_I together with its
// dual half F_I = q_I + i dI1/dp^I. The branch of sqrt(I4) is fixed by
// N(Im t) > 0; the point need not lie in the interior symmetric cone (a
// duality frame may be required for that), which interior_cone records.
struct BpsSolution {
  Rational quartic;    // I4 > 0
  Int disc_core;       // D < 0, squarefree
  Rational sigma;      // sqrt(I4) = sigma sqrt(-D)
  QuadFieldElem x0, f0;
  std::vector<QuadFieldElem> xj, fj;
  // X^0 = 0: the affine chart t = X_J/X^0 does not exist (t stays empty)
  bool homogeneous_only = false;
  bool interior_cone = false;
  std::vector<QuadFieldElem> t;
};

// A t^2 + B t + C = 0 with gcd(A,B,C) = 1; A = 0 encodes the linear B t + C.
struct CmMinPoly {
  Int A, B, C;
};

struct CmCertificate {
  Int disc_core = 0;
  bool affine_chart = true;        // false when X^0 = 0; minpoly then stays empty
  std::vector<CmMinPoly> minpoly;  // one per moduli coordinate
  bool attractor_equations_exact = false;
  bool field_is_imaginary_quadratic = false;
  bool ok() const { return attractor_equations_exact && field_is_imaginary_quadratic; }
};

class BpsSolver {
 public:
  explicit BpsSolver(const CubicNormStructure& J);

  const CubicNormStructure& structure() const { return *J_; }
  const SparsePoly& quartic_poly() const { return i4_; }

  Rational quartic(const ChargeVector& g) const;
  // (dI4/dq0, dI4/dQ_i) in canonical dual coordinates
  std::pair<Rational, std::vector<Rational>> quartic_q_gradient(const ChargeVector& g) const;
  BpsSolution solve(const ChargeVector& g) const;

 private:
  std::vector<Rational> charge_values(const ChargeVector& g) const;
  const CubicNormStructure* J_;
  SparsePoly i4_;
  std::vector<SparsePoly> di4_;
};

// Closed forms for the same gradient, used as an independent cross-check:
// dI4/dq0 = -2 A p0 + 4 N(p), dI4/dQ = -2 A p - 4 p0 q# + 4 q x p#,
// with A = p0 q0 + (p, q).
std::pair<Rational, std::vector<Rational>> quartic_q_gradient_closed(const ChargeVector& g);

// Exact attractor equations, checked chart-free on the period vector:
// Re X^I = p^I, Re F_I = q_I, and the prepotential graph identities
// X^0 F_i = N_i(X_J), (X^0)^2 F_0 = -N(X_J), all in Q(sqrt(D)).
bool verify_attractor(const ChargeVector& g, const BpsSolution& s);
CmCertificate cm_certificate(const ChargeVector& g, const BpsSolution& s);

}  // namespace attractor
