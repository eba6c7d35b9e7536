// Degree-3 cubic norm structures: the rank-1 model N(x) = x^3, the STU model
// N = x1 x2 x3, the generic family Q + quadratic space with N(a,x) = a*B(x),
// and the Hermitian families Herm3(K) over a composition algebra K.
//
// The norm is stored as a sparse monomial list; every derived object (the
// trilinear form with (x,x,x) = 6N(x), trace, gram pairing, sharp, cross)
// is computed from it. The trace form is (x,y) = Tr(x)Tr(y) - (1,x,y) with
// Tr(x) = (1,1,x)/2, the unique scaling compatible with (x^#)^# = N(x)x.
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <type_traits>
#include <vector>

#include "attractor/exactnum.hpp"

namespace attractor {

struct CubicNormStructure {
  struct Monomial {
    int i, j, k;  // i <= j <= k
    Rational c;   // coefficient of x_i x_j x_k in N
  };

  int n = 0;
  std::string family;
  std::vector<std::string> basis_labels;
  std::vector<Rational> unit;
  std::vector<Monomial> monomials;
  std::vector<std::vector<Rational>> gram;      // trace form matrix
  std::vector<std::vector<Rational>> gram_inv;
  std::vector<Rational> basis_traces;           // Tr(e_i)
  // K for the herm3 families; null otherwise.
  std::shared_ptr<const CompositionAlgebra> coeff_algebra;

  // numeric mirror of the monomial list and gram data
  struct MonomialD { int i, j, k; double c; };
  std::vector<MonomialD> monomials_d;
  std::vector<double> gram_d, gram_inv_d;  // row-major n*n

  template <class S>
  static S coef_cast(const Rational& c) {
    if constexpr (std::is_same_v<S, Rational>) {
      return c;
    } else if constexpr (std::is_same_v<S, QuadFieldElem>) {
      return QuadFieldElem(c);
    } else {
      return S(c.to_double());
    }
  }

  // N(x)
  template <class S>
  S norm_at(const S* x) const {
    S acc = coef_cast<S>(Rational(0));
    for (const auto& m : monomials) acc += coef_cast<S>(m.c) * x[m.i] * x[m.j] * x[m.k];
    return acc;
  }

  // N_i(x) = (x,x,e_i)/2 = dN/dx_i
  template <class S>
  std::vector<S> grad_at(const S* x) const {
    std::vector<S> g(n, coef_cast<S>(Rational(0)));
    for (const auto& m : monomials) {
      const S c = coef_cast<S>(m.c);
      g[m.i] += c * x[m.j] * x[m.k];
      g[m.j] += c * x[m.i] * x[m.k];
      g[m.k] += c * x[m.i] * x[m.j];
    }
    return g;
  }

  // d^2 N/dx_i dx_j = (x, e_i, e_j); row-major n*n
  template <class S>
  std::vector<S> hess_at(const S* x) const {
    std::vector<S> h(static_cast<size_t>(n) * n, coef_cast<S>(Rational(0)));
    auto add = [&](int a, int b, const S& v) { h[static_cast<size_t>(a) * n + b] += v; };
    for (const auto& m : monomials) {
      const S c = coef_cast<S>(m.c);
      add(m.i, m.j, c * x[m.k]);
      add(m.j, m.i, c * x[m.k]);
      add(m.i, m.k, c * x[m.j]);
      add(m.k, m.i, c * x[m.j]);
      add(m.j, m.k, c * x[m.i]);
      add(m.k, m.j, c * x[m.i]);
    }
    return h;
  }

  // trilinear (x,y,z), normalized so (x,x,x) = 6N(x)
  template <class S>
  S tri_at(const S* x, const S* y, const S* z) const {
    S acc = coef_cast<S>(Rational(0));
    for (const auto& m : monomials) {
      const S c = coef_cast<S>(m.c);
      acc += c * (x[m.i] * y[m.j] * z[m.k] + x[m.i] * y[m.k] * z[m.j] +
                  x[m.j] * y[m.i] * z[m.k] + x[m.j] * y[m.k] * z[m.i] +
                  x[m.k] * y[m.i] * z[m.j] + x[m.k] * y[m.j] * z[m.i]);
    }
    return acc;
  }

  // exact interface on coordinate vectors
  Rational norm(const std::vector<Rational>& x) const { return norm_at(x.data()); }
  // dN at x; component i equals (x,x,e_i)/2
  std::vector<Rational> grad(const std::vector<Rational>& x) const {
    return grad_at(x.data());
  }
  Rational tri(const std::vector<Rational>& x, const std::vector<Rational>& y,
               const std::vector<Rational>& z) const {
    return tri_at(x.data(), y.data(), z.data());
  }
  Rational trace_of(const std::vector<Rational>& x) const;
  Rational pair(const std::vector<Rational>& x, const std::vector<Rational>& y) const;
  // dual pairing matrix applications
  std::vector<Rational> gram_apply(const std::vector<Rational>& x) const;
  std::vector<Rational> gram_inv_apply(const std::vector<Rational>& x) const;
  // x^#, defined by (x^#, y) = (x,x,y)/2
  std::vector<Rational> sharp(const std::vector<Rational>& x) const;
  // x x y = (x+y)^# - x^# - y^#
  std::vector<Rational> cross(const std::vector<Rational>& x,
                              const std::vector<Rational>& y) const;
  // derived Jordan product, for completeness tests only
  std::vector<Rational> jordan_product(const std::vector<Rational>& x,
                                       const std::vector<Rational>& y) const;

  bool is_rank1() const { return n == 1; }
};

struct JordanElem {
  const CubicNormStructure* parent = nullptr;
  std::vector<Rational> coords;
};

CubicNormStructure build_rank1();
CubicNormStructure build_stu();
// N(a, x) = a * B(x) on Q + Q^m; B given by its gram matrix (B(x) = x^T G x),
// c0 a base point with B(c0) = 1. Defaults to the hyperbolic plane x1 x2.
CubicNormStructure build_generic(const std::vector<std::vector<Rational>>& B_gram,
                                 const std::vector<Rational>& c0);
CubicNormStructure build_generic_hyperbolic();
CubicNormStructure build_herm3(std::shared_ptr<const CompositionAlgebra> K);
CubicNormStructure build_herm3(AlgebraKind kind);

struct AxiomReport {
  // (1) N(1)=1, 1^#=1, 1 x y = (1,y)1 - y
  // (2) (x^#)^# = N(x) x
  // (3) (x,y) = Tr(x)Tr(y) - (1,x,y)
  // (4) N(x+y) = N(x) + (x^#,y) + (x,y^#) + N(y)
  std::array<bool, 4> pass{true, true, true, true};
  std::string witness;  // first failing sample, if any
  int samples = 0;
  bool all() const { return pass[0] && pass[1] && pass[2] && pass[3]; }
};

AxiomReport axiom_check(const CubicNormStructure& J, int samples, std::uint64_t seed = 1);

// Uniform exact sample: numerators in {-9..9}, denominators in {1,2,3}.
std::vector<Rational> random_exact_element(const CubicNormStructure& J, std::uint64_t& state);

}  // namespace attractor
