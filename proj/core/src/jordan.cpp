#include "attractor/jordan.hpp"

#include <random>
#include <sstream>

namespace attractor {

namespace {

// exact Gauss-Jordan inverse; throws on a singular pairing
std::vector<std::vector<Rational>> invert_exact(std::vector<std::vector<Rational>> a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = Rational(1);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r) {
      if (!a[r][col].is_zero()) { piv = r; break; }
    }
    if (piv < 0) throw exact_error("trace form is degenerate");
    std::swap(a[col], a[piv]);
    std::swap(inv[col], inv[piv]);
    const Rational d = a[col][col];
    for (int c = 0; c < n; ++c) { a[col][c] = a[col][c] / d; inv[col][c] = inv[col][c] / d; }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const Rational f = a[r][col];
      for (int c = 0; c < n; ++c) {
        a[r][c] = a[r][c] - f * a[col][c];
        inv[r][c] = inv[r][c] - f * inv[col][c];
      }
    }
  }
  return inv;
}

// trace, gram, numeric mirrors; call after n/unit/monomials are set
void finish_structure(CubicNormStructure& J) {
  const int n = J.n;
  std::vector<Rational> one = J.unit;
  J.basis_traces.assign(n, Rational(0));
  std::vector<Rational> ei(n, Rational(0));
  for (int i = 0; i < n; ++i) {
    ei[i] = Rational(1);
    J.basis_traces[i] = J.tri(one, one, ei) / Rational(2);
    ei[i] = Rational(0);
  }
  J.gram.assign(n, std::vector<Rational>(n, Rational(0)));
  std::vector<Rational> ej(n, Rational(0));
  for (int i = 0; i < n; ++i) {
    ei[i] = Rational(1);
    for (int j = i; j < n; ++j) {
      ej[j] = Rational(1);
      Rational g = J.basis_traces[i] * J.basis_traces[j] - J.tri(one, ei, ej);
      J.gram[i][j] = g;
      J.gram[j][i] = g;
      ej[j] = Rational(0);
    }
    ei[i] = Rational(0);
  }
  J.gram_inv = invert_exact(J.gram);

  J.monomials_d.clear();
  J.monomials_d.reserve(J.monomials.size());
  for (const auto& m : J.monomials)
    J.monomials_d.push_back({m.i, m.j, m.k, m.c.to_double()});
  J.gram_d.assign(static_cast<size_t>(n) * n, 0.0);
  J.gram_inv_d.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      J.gram_d[static_cast<size_t>(i) * n + j] = J.gram[i][j].to_double();
      J.gram_inv_d[static_cast<size_t>(i) * n + j] = J.gram_inv[i][j].to_double();
    }
}

std::vector<Rational> mat_apply(const std::vector<std::vector<Rational>>& m,
                                const std::vector<Rational>& x) {
  const int n = static_cast<int>(m.size());
  std::vector<Rational> out(n, Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!m[i][j].is_zero() && !x[j].is_zero()) out[i] += m[i][j] * x[j];
  return out;
}

}  // namespace

Rational CubicNormStructure::trace_of(const std::vector<Rational>& x) const {
  Rational t(0);
  for (int i = 0; i < n; ++i)
    if (!x[i].is_zero()) t += basis_traces[i] * x[i];
  return t;
}

Rational CubicNormStructure::pair(const std::vector<Rational>& x,
                                  const std::vector<Rational>& y) const {
  Rational acc(0);
  for (int i = 0; i < n; ++i) {
    if (x[i].is_zero()) continue;
    Rational row(0);
    for (int j = 0; j < n; ++j)
      if (!gram[i][j].is_zero() && !y[j].is_zero()) row += gram[i][j] * y[j];
    acc += x[i] * row;
  }
  return acc;
}

std::vector<Rational> CubicNormStructure::gram_apply(const std::vector<Rational>& x) const {
  return mat_apply(gram, x);
}

std::vector<Rational> CubicNormStructure::gram_inv_apply(const std::vector<Rational>& x) const {
  return mat_apply(gram_inv, x);
}

std::vector<Rational> CubicNormStructure::sharp(const std::vector<Rational>& x) const {
  return mat_apply(gram_inv, grad_at(x.data()));
}

std::vector<Rational> CubicNormStructure::cross(const std::vector<Rational>& x,
                                                const std::vector<Rational>& y) const {
  std::vector<Rational> s(n);
  for (int i = 0; i < n; ++i) s[i] = x[i] + y[i];
  std::vector<Rational> a = sharp(s), b = sharp(x), c = sharp(y);
  for (int i = 0; i < n; ++i) a[i] = a[i] - b[i] - c[i];
  return a;
}

std::vector<Rational> CubicNormStructure::jordan_product(
    const std::vector<Rational>& x, const std::vector<Rational>& y) const {
  // x o y = (x x y + Tr(x)y + Tr(y)x - S(x,y) 1)/2 with S(x,y) = (x,y,1)
  std::vector<Rational> out = cross(x, y);
  const Rational tx = trace_of(x), ty = trace_of(y);
  const Rational s = tri(x, y, unit);
  for (int i = 0; i < n; ++i)
    out[i] = (out[i] + tx * y[i] + ty * x[i] - s * unit[i]) / Rational(2);
  return out;
}

CubicNormStructure build_rank1() {
  CubicNormStructure J;
  J.n = 1;
  J.family = "rank1";
  J.basis_labels = {"x"};
  J.unit = {Rational(1)};
  J.monomials = {{0, 0, 0, Rational(1)}};
  finish_structure(J);
  return J;
}

CubicNormStructure build_stu() {
  CubicNormStructure J;
  J.n = 3;
  J.family = "stu";
  J.basis_labels = {"x1", "x2", "x3"};
  J.unit = {Rational(1), Rational(1), Rational(1)};
  J.monomials = {{0, 1, 2, Rational(1)}};
  finish_structure(J);
  return J;
}

CubicNormStructure build_generic(const std::vector<std::vector<Rational>>& B_gram,
                                 const std::vector<Rational>& c0) {
  const int m = static_cast<int>(B_gram.size());
  if (static_cast<int>(c0.size()) != m) throw exact_error("base point has wrong dimension");
  Rational bc(0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) bc += B_gram[i][j] * c0[i] * c0[j];
  if (!(bc == Rational(1))) throw exact_error("base point must satisfy B(c0) = 1");

  CubicNormStructure J;
  J.n = 1 + m;
  J.family = "generic";
  J.basis_labels.push_back("a");
  for (int i = 0; i < m; ++i) J.basis_labels.push_back("x" + std::to_string(i + 1));
  J.unit.assign(J.n, Rational(0));
  J.unit[0] = Rational(1);
  for (int i = 0; i < m; ++i) J.unit[1 + i] = c0[i];
  for (int i = 0; i < m; ++i) {
    if (!B_gram[i][i].is_zero()) J.monomials.push_back({0, 1 + i, 1 + i, B_gram[i][i]});
    for (int j = i + 1; j < m; ++j) {
      const Rational c = B_gram[i][j] + B_gram[j][i];
      if (!c.is_zero()) J.monomials.push_back({0, 1 + i, 1 + j, c});
    }
  }
  finish_structure(J);
  return J;
}

CubicNormStructure build_generic_hyperbolic() {
  const Rational h(1, 2);
  return build_generic({{Rational(0), h}, {h, Rational(0)}}, {Rational(1), Rational(1)});
}

CubicNormStructure build_herm3(std::shared_ptr<const CompositionAlgebra> K) {
  const int k = K->dim();
  CubicNormStructure J;
  J.n = 3 + 3 * k;
  J.family = "herm3_" + K->name();
  J.coeff_algebra = K;
  J.basis_labels = {"a", "b", "c"};
  for (const char* blk : {"x", "y", "z"})
    for (int u = 0; u < k; ++u)
      J.basis_labels.push_back(std::string(blk) + std::to_string(u));
  J.unit.assign(J.n, Rational(0));
  J.unit[0] = J.unit[1] = J.unit[2] = Rational(1);

  // Coordinates (a,b,c | x | y | z) of [[a, z, y*],[z*, b, x],[y, x*, c]];
  // N = abc + Re tr((x y) z) - a n(x) - b n(y) - c n(z).
  std::vector<CompositionElem> basis;
  basis.reserve(k);
  for (int u = 0; u < k; ++u) basis.push_back(CompositionElem::basis(K, u));

  // The composition norm must be diagonal on this basis for the monomial
  // expansion below; true for every Cayley-Dickson doubling tower.
  std::vector<Rational> nu(k);
  for (int u = 0; u < k; ++u) nu[u] = basis[u].norm();
  for (int u = 0; u < k; ++u)
    for (int v = u + 1; v < k; ++v) {
      const CompositionElem s = basis[u] + basis[v];
      if (!(s.norm() == nu[u] + nu[v]))
        throw exact_error("composition norm is not diagonal on the standard basis");
    }

  J.monomials.push_back({0, 1, 2, Rational(1)});
  const int ox = 3, oy = 3 + k, oz = 3 + 2 * k;
  for (int u = 0; u < k; ++u) {
    J.monomials.push_back({0, ox + u, ox + u, -nu[u]});
    J.monomials.push_back({1, oy + u, oy + u, -nu[u]});
    J.monomials.push_back({2, oz + u, oz + u, -nu[u]});
  }
  for (int u = 0; u < k; ++u)
    for (int v = 0; v < k; ++v) {
      const CompositionElem uv = basis[u] * basis[v];
      for (int w = 0; w < k; ++w) {
        const Rational t = (uv * basis[w]).trace();
        if (!t.is_zero()) J.monomials.push_back({ox + u, oy + v, oz + w, t});
      }
    }
  finish_structure(J);
  return J;
}

CubicNormStructure build_herm3(AlgebraKind kind) {
  return build_herm3(CompositionAlgebra::make(kind));
}

std::vector<Rational> random_exact_element(const CubicNormStructure& J, std::uint64_t& state) {
  std::mt19937_64 rng(state);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 3);
  std::vector<Rational> x(J.n);
  for (int i = 0; i < J.n; ++i) x[i] = Rational(num(rng), den(rng));
  state = rng();
  return x;
}

AxiomReport axiom_check(const CubicNormStructure& J, int samples, std::uint64_t seed) {
  AxiomReport rep;
  rep.samples = samples;
  const int n = J.n;
  const std::vector<Rational>& one = J.unit;

  auto record = [&](int axiom, const std::vector<Rational>& x,
                    const std::vector<Rational>* y) {
    if (!rep.pass[axiom]) return;
    rep.pass[axiom] = false;
    if (!rep.witness.empty()) return;
    std::ostringstream os;
    os << "axiom " << (axiom + 1) << " fails at x = (";
    for (int i = 0; i < n; ++i) os << (i ? "," : "") << x[i].str();
    os << ")";
    if (y) {
      os << ", y = (";
      for (int i = 0; i < n; ++i) os << (i ? "," : "") << (*y)[i].str();
      os << ")";
    }
    rep.witness = os.str();
  };

  // unit identities are sample independent
  {
    if (!(J.norm(one) == Rational(1))) record(0, one, nullptr);
    std::vector<Rational> os = J.sharp(one);
    for (int i = 0; i < n; ++i)
      if (!(os[i] == one[i])) { record(0, one, nullptr); break; }
  }

  std::uint64_t state = seed ? seed : 1;
  for (int s = 0; s < samples; ++s) {
    std::vector<Rational> x = random_exact_element(J, state);
    std::vector<Rational> y = random_exact_element(J, state);

    // (1) 1 x y = (1,y) 1 - y
    {
      std::vector<Rational> lhs = J.cross(one, y);
      const Rational py = J.pair(one, y);
      for (int i = 0; i < n; ++i)
        if (!(lhs[i] == py * one[i] - y[i])) { record(0, x, &y); break; }
    }
    // (2) (x^#)^# = N(x) x
    {
      std::vector<Rational> ss = J.sharp(J.sharp(x));
      const Rational nx = J.norm(x);
      for (int i = 0; i < n; ++i)
        if (!(ss[i] == nx * x[i])) { record(1, x, nullptr); break; }
    }
    // (3) (x,y) = Tr(x)Tr(y) - (1,x,y)
    {
      const Rational lhs = J.pair(x, y);
      const Rational rhs = J.trace_of(x) * J.trace_of(y) - J.tri(one, x, y);
      if (!(lhs == rhs)) record(2, x, &y);
    }
    // (4) N(x+y) = N(x) + (x^#,y) + (x,y^#) + N(y)
    {
      std::vector<Rational> sum(n);
      for (int i = 0; i < n; ++i) sum[i] = x[i] + y[i];
      const Rational lhs = J.norm(sum);
      const Rational rhs = J.norm(x) + J.pair(J.sharp(x), y) + J.pair(x, J.sharp(y)) + J.norm(y);
      if (!(lhs == rhs)) record(3, x, &y);
    }
    if (!rep.pass[0] && !rep.pass[1] && !rep.pass[2] && !rep.pass[3]) break;
  }
  return rep;
}

}  // namespace attractor
