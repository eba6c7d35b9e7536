// The one-modulus cubic model end to end: form roots, the Julia height
// potential on hyperbolic 3-space and its minimizer, closed-form BPS and
// non-BPS attractor points, the D0-D6 fake superpotential and duality
// transport, a Hodge-line oracle, and attractor-reduced class enumeration.
#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "attractor/fts.hpp"

namespace attractor {

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct wrong_class_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using Cplx = std::complex<double>;

// (t, u): floor coordinate and height on hyperbolic 3-space, u > 0
struct H3Point {
  Cplx t;
  double u = 1.0;
};

// tau = x + iy on the upper half plane, y > 0
struct HPoint {
  double x = 0.0;
  double y = 1.0;
};

// Roots of F(x, 1); a leading-coefficient drop moves roots to infinity.
struct CubicRoots {
  std::vector<Cplx> finite;  // sorted by (re, im)
  int at_infinity = 0;
  bool multiple_root = false;  // disc(F) = 0
};

// Integer quadratic A tau^2 + B tau + C fitted to a numeric point, A > 0.
struct CmFit {
  long long A = 0, B = 0, C = 0;
  double residual = 0.0;
};

struct BpsPointResult {
  HPoint tau;
  CmFit cm;
};

struct D0D6Transform {
  Eigen::Matrix2d M;          // det 1; M . f is (numerically) p X^3 + q Y^3
  double p = 0.0, q = 0.0;
  bool closed_form = false;   // the displayed zeta/rho/xi matrix validated
};

// One attractor-reduced class: the representative's attractor point lies in
// the standard fundamental domain at (x, y).
struct FormClass {
  BinaryCubic form;
  Rational disc;
  double x = 0.0, y = 0.0;
  bool bps = false;
};

CubicRoots cubic_roots(const BinaryCubic& f);

// Product of (|t - root|^2 + u^2)/u over the finite roots, times 1/u per
// root at infinity (the |root|^2-normalized limit of the finite factor).
double julia_F1(const BinaryCubic& f, const H3Point& P);

// Unique minimizer of julia_F1 on hyperbolic 3-space (disc != 0 required);
// damped Newton with multistart from the root centroid and from (0, 1).
H3Point julia_covariant(const BinaryCubic& f);

// disc > 0: minimizer of |F(tau)|/y^{3/2} on the upper half plane plus the
// fitted integer quadratic it satisfies (negative discriminant enforced).
BpsPointResult bps_point(const BinaryCubic& f);

// disc < 0: closed form through the unique real root alpha and the
// quadratic h0 X^2 + h1 X + h2 built from the charges (d, c, b, -3a).
HPoint nonbps_point(const BinaryCubic& f);

// Fake superpotential of the D0-D6 form p X^3 + q Y^3 at tau; evaluates both
// displayed expressions (the 1 + 3(...) form and its product form) and
// cross-checks them before returning.
double fake_superpotential_F2(long long p, long long q, Cplx tau);

// Real 2x2 transport of a disc < 0 form to D0-D6 shape. The displayed
// closed-form matrix is attempted first and validated; on failure the
// transporter is found by rotating about the attractor point.
D0D6Transform d0d6_transform(const BinaryCubic& f);

// Residual of the charge against the span of the period line (1, tau,
// -tau^3/3, tau^2) and its conjugate; zero exactly at BPS attractor points.
double hodge_oracle(const BinaryCubic& f, Cplx tau);

// Canonical representative of the class of f under integer substitutions
// and global sign: the attractor point is reduced into the fundamental
// domain, points on its walls are forced to the Re = -1/2 / Re <= 0 side
// (with bands wide enough to absorb numeric jitter), the residual corner
// stabilizer is broken by coefficient order. The reduced point lands in
// *reduced when given. The two-argument form takes a precomputed attractor
// point; the one-argument form computes it from the discriminant sign.
BinaryCubic class_representative(const BinaryCubic& f, Cplx attractor_tau,
                                 Cplx* reduced = nullptr);
BinaryCubic class_representative(const BinaryCubic& f, Cplx* reduced = nullptr);

// All classes with 0 < sign*disc <= delta_bound, deduplicated by reducing
// each form's attractor point into the fundamental domain. sign is +1 or -1.
std::vector<FormClass> enumerate_forms(long long delta_bound, int sign);

// One row per class: a,b,c,d,disc,x,y,tag. Written atomically.
void write_classes_csv(const std::string& path, const std::vector<FormClass>& classes);

Cplx mobius(const SL2& g, Cplx tau);
Cplx mobius(const Eigen::Matrix2d& m, Cplx tau);
H3Point mobius_h3(const Eigen::Matrix2d& m, const H3Point& P);
H3Point mobius_h3(const SL2& g, const H3Point& P);
double h2_distance(Cplx a, Cplx b);
double h3_distance(const H3Point& a, const H3Point& b);

// Coefficients of f(dX - bY, -cX + aY): the sl2_apply substitution over R.
std::array<double, 4> real_cubic_transform(const Eigen::Matrix2d& m,
                                           const std::array<double, 4>& f);

// g with g.tau in the fundamental domain (|Re| <= 1/2, |tau| >= 1, boundary
// convention Re < 1/2 and Re <= 0 on |tau| = 1); the reduced point lands in
// *reduced.
SL2 reduce_to_fundamental(Cplx tau, Cplx* reduced);

}  // namespace attractor
