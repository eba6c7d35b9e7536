// Acceptance gate: one line per criterion, each exercising the library the
// way the shipped surface does. Exit code is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "attractor/bps_attractor.hpp"
#include "attractor/cubic_model.hpp"
#include "attractor/distribution.hpp"
#include "attractor/five_d.hpp"
#include "attractor/fts.hpp"
#include "attractor/jordan.hpp"
#include "attractor/nonbps_locus.hpp"
#include "attractor/special_geometry.hpp"

using namespace attractor;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int n, const std::string& label, bool ok, double secs) {
  std::printf("criterion %2d (%s): %s (%.2f s)\n", n, label.c_str(), ok ? "PASS" : "FAIL", secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

Rational rnd_rat(std::mt19937_64& rng, int lo = -9, int hi = 9) {
  std::uniform_int_distribution<int> num(lo, hi);
  return Rational(num(rng));
}

std::vector<Rational> rnd_vec(const CubicNormStructure& J, std::mt19937_64& rng, int lo = -3,
                              int hi = 3) {
  std::vector<Rational> v(J.n);
  for (auto& x : v) x = rnd_rat(rng, lo, hi);
  return v;
}

bool criterion_1_axioms() {
  const std::vector<std::pair<std::string, CubicNormStructure>> families = {
      {"rank1", build_rank1()},
      {"herm3 rational", build_herm3(AlgebraKind::rational)},
      {"herm3 imaginary quadratic", build_herm3(AlgebraKind::imaginary_quadratic)},
      {"herm3 quaternion", build_herm3(AlgebraKind::quaternion)},
      {"herm3 octonion", build_herm3(AlgebraKind::octonion)},
      {"generic hyperbolic", build_generic_hyperbolic()},
  };
  bool ok = true;
  for (const auto& [name, J] : families) {
    const AxiomReport r = axiom_check(J, 1000, 2024);
    if (!r.all() || r.samples != 1000) {
      std::printf("  axiom failure in %s: %s\n", name.c_str(), r.witness.c_str());
      ok = false;
    }
  }
  return ok;
}

bool criterion_2_specializations() {
  const std::vector<CubicNormStructure> models = {
      build_rank1(),
      build_stu(),
      build_generic_hyperbolic(),
      build_herm3(AlgebraKind::rational),
      build_herm3(AlgebraKind::imaginary_quadratic),
      build_herm3(AlgebraKind::quaternion),
      build_herm3(AlgebraKind::octonion),
  };
  std::mt19937_64 rng(7);
  for (const CubicNormStructure& J : models)
    for (int trial = 0; trial < 100; ++trial) {
      ChargeVector a = ChargeVector::zero(J);
      a.p0 = rnd_rat(rng);
      a.q0 = rnd_rat(rng);
      if (quartic_invariant(a) != -(a.p0 * a.q0) * (a.p0 * a.q0)) return false;

      ChargeVector b = ChargeVector::zero(J);
      b.p0 = rnd_rat(rng);
      b.q = rnd_vec(J, rng);
      if (quartic_invariant(b) != Rational(-4) * b.p0 * J.norm(b.q)) return false;
    }
  return true;
}

bool criterion_3_calibration() {
  const CubicNormStructure r1 = build_rank1();
  const Rational c = dictionary_constant();
  if (!(c.sign() > 0)) return false;
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 100) {
    const BinaryCubic f{rnd_rat(rng), rnd_rat(rng), rnd_rat(rng), rnd_rat(rng)};
    if (cubic_discriminant(f).is_zero()) continue;
    if (quartic_invariant(charge_of_cubic(r1, f)) != c * cubic_discriminant(f)) return false;
    ++checked;
  }
  return true;
}

bool criterion_4_bps_closed_form() {
  const BinaryCubic f{1, 0, -1, 0};  // X^3 - X Y^2
  const CubicNormStructure r1 = build_rank1();
  const BpsSolver solver(r1);
  const BpsSolution sol = solver.solve(charge_of_cubic(r1, f));
  // i/sqrt(3) = (1/3) sqrt(-3)
  const QuadFieldElem expected(Rational(0), Rational(1, 3), Int(-3));
  if (sol.homogeneous_only || sol.t.at(0) != expected) return false;
  const BpsPointResult numeric = bps_point(f);
  return std::abs(numeric.tau.x) < 1e-9 &&
         std::abs(numeric.tau.y - 1.0 / std::sqrt(3.0)) < 1e-9;
}

bool criterion_5_cm_certificates() {
  std::mt19937_64 rng(13);
  for (const CubicNormStructure& J : {build_rank1(), build_herm3(AlgebraKind::rational)}) {
    const BpsSolver solver(J);
    int done = 0;
    while (done < 50) {
      ChargeVector g = ChargeVector::zero(J);
      g.p0 = rnd_rat(rng, -3, 3);
      g.q0 = rnd_rat(rng, -3, 3);
      g.p = rnd_vec(J, rng);
      g.q = rnd_vec(J, rng);
      if (!(quartic_invariant(g).sign() > 0)) continue;
      const BpsSolution sol = solver.solve(g);
      if (!verify_attractor(g, sol)) return false;
      if (!cm_certificate(g, sol).ok()) return false;
      ++done;
    }
  }
  return true;
}

bool criterion_6_nonbps_closed_form() {
  const BinaryCubic f{1, 0, 0, 1};  // X^3 + Y^3
  const HPoint tau = nonbps_point(f);
  if (!(tau.x == 0.0 && tau.y == 1.0)) return false;
  const H3Point jl = julia_covariant(f);
  if (h3_distance(jl, H3Point{Cplx(0.0, 0.0), 1.0}) > 1e-8) return false;

  const CubicNormStructure r1 = build_rank1();
  const SpecialGeometry geom(r1);
  const ChargeNum g = ChargeNum::from(charge_of_cubic(r1, f));
  auto veff = [&](double x, double y) {
    Eigen::VectorXcd t(1);
    t[0] = Cplx(x, y);
    return geom.v_eff(g, t);
  };
  const double h = 1e-4;
  const double gx = (veff(h, 1.0) - veff(-h, 1.0)) / (2 * h);
  const double gy = (veff(0.0, 1.0 + h) - veff(0.0, 1.0 - h)) / (2 * h);
  return std::hypot(gx, gy) < 1e-6;
}

bool criterion_7_superpotential_square() {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pq(1, 9);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.2, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const long long p = pq(rng), q = pq(rng);
    const BinaryCubic f{Rational(static_cast<long>(p)), 0, 0, Rational(static_cast<long>(q))};
    double mean = 0, m2 = 0;
    int count = 0;
    for (int s = 0; s < 100; ++s) {
      const double x = ux(rng), y = uy(rng);
      const double f1 = julia_F1(f, H3Point{Cplx(x, 0.0), y});
      const double f2 = fake_superpotential_F2(p, q, Cplx(x, y));
      const double ratio = f1 / (f2 * f2);
      ++count;
      const double delta = ratio - mean;
      mean += delta / count;
      m2 += delta * (ratio - mean);
    }
    const double rel_std = std::sqrt(m2 / (count - 1)) / std::abs(mean);
    if (!(rel_std < 1e-9)) return false;
  }
  return true;
}

bool criterion_8_julia_agreement() {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> coef(-6, 6), shift(-2, 2), len(1, 5);
  std::vector<BinaryCubic> forms;
  while (forms.size() < 200) {
    const BinaryCubic f{rnd_rat(rng, -6, 6), rnd_rat(rng, -6, 6), rnd_rat(rng, -6, 6),
                        rnd_rat(rng, -6, 6)};
    const Rational d = cubic_discriminant(f);
    if (!(d.sign() < 0)) continue;
    if (-d > Rational(10000)) continue;
    forms.push_back(f);
  }
  for (const BinaryCubic& f : forms) {
    const HPoint tau = nonbps_point(f);
    const H3Point jl = julia_covariant(f);
    if (h3_distance(jl, H3Point{Cplx(tau.x, 0.0), tau.y}) > 1e-8) return false;
  }
  for (int trial = 0; trial < 100; ++trial) {
    const BinaryCubic& f = forms[trial % forms.size()];
    SL2 g{1, 0, 0, 1};
    for (int k = 0, n = len(rng); k < n; ++k) {
      const SL2 t = k % 2 == 0 ? SL2{1, shift(rng), 0, 1} : SL2{0, -1, 1, 0};
      g = SL2{t.a * g.a + t.b * g.c, t.a * g.b + t.b * g.d, t.c * g.a + t.d * g.c,
              t.c * g.b + t.d * g.d};
    }
    const H3Point direct = julia_covariant(sl2_apply(g, f));
    const H3Point moved = mobius_h3(g, julia_covariant(f));
    if (h3_distance(direct, moved) > 1e-9) return false;
  }
  return true;
}

bool criterion_9_critical_locus() {
  const CubicNormStructure J = build_herm3(AlgebraKind::rational);
  const CriticalLocusReport r = critical_locus_check(J, 1.0, 2.0, 20, 2024);
  const bool signature = r.positive_count == J.n + 1 && r.near_zero_count == J.n - 1 &&
                         r.negative_count == 0 && r.max_near_zero_ratio < 1e-6;
  if (!(r.max_gradient < 1e-7) || !signature)
    std::printf("  locus: grad %.3e signature (%d,%d,%d) ratio %.3e\n", r.max_gradient,
                r.positive_count, r.near_zero_count, r.negative_count, r.max_near_zero_ratio);
  return r.max_gradient < 1e-7 && signature;
}

bool criterion_10_five_d() {
  const CubicNormStructure stu = build_stu();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uq(0.2, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    FiveDCharge q;
    q.q = Eigen::VectorXd::NullaryExpr(3, [&](Eigen::Index) { return uq(rng); });
    const HypersurfacePoint h = solve_bps_5d(stu, q);
    const double prod = std::cbrt(q.q[0] * q.q[1] * q.q[2]);
    for (int i = 0; i < 3; ++i) {
      const double closed = prod / q.q[i];
      if (std::abs(h.h[i] - closed) > 1e-9 * std::abs(closed)) return false;
    }
    if (!(h.tangent_residual < 1e-9)) return false;
  }
  return true;
}

bool criterion_11_sign_flip() {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ul(0.3, 2.0);
  const std::vector<CubicNormStructure> models = {build_rank1(), build_stu(),
                                                  build_herm3(AlgebraKind::rational)};
  for (int trial = 0; trial < 20; ++trial) {
    const CubicNormStructure& J = models[trial % models.size()];
    ChargeVector plus = ChargeVector::zero(J);
    plus.p0 = rnd_rat(rng, 1, 5);
    plus.q = rnd_vec(J, rng, 1, 4);  // positive entries keep N(q) > 0
    if (!(J.norm(plus.q).sign() > 0)) continue;
    ChargeVector minus = plus;
    minus.p0 = -plus.p0;

    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    Eigen::VectorXd base(J.n);
    do {
      for (int i = 0; i < J.n; ++i)
        base[i] = J.unit[i].to_double() * ul(rng) + jitter(rng);
    } while (J.norm_at(base.data()) < 0.1);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(J.n);

    const double vp = potential_4d_explicit(J, ChargeNum::from(plus), x0, base);
    const double vm = potential_4d_explicit(J, ChargeNum::from(minus), x0, base);
    if (std::abs(vp - vm) > 1e-10 * std::max(1.0, std::abs(vp))) return false;
  }
  return true;
}

bool criterion_12_distribution() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sample = attractor_sample(10000);
  const double enum_secs = seconds_since(t0);
  if (enum_secs >= 600.0 || sample.empty()) return false;

  for (const auto& [f, p] : sample) {
    if (std::abs(p.x) > 0.5 + 1e-9) return false;
    if (p.x * p.x + p.y * p.y < 1.0 - 1e-9) return false;
  }

  const EmpiricalMeasure m = measure_from_sample(sample, 24, 16, 100.0);
  double mass = 0;
  for (double v : m.normalized()) mass += v;
  if (std::abs(mass - 1.0) > 1e-12) return false;

  const DensityRho rho = make_density();
  const auto trend = distance_trend({2500, 5000, 10000}, rho, 24, 16);
  if (trend.size() != 3) return false;
  std::printf("  enumeration: %zu classes in %.1f s; density trend:", sample.size(), enum_secs);
  for (const auto& [b, s] : trend) std::printf("  |disc|<=%lld tv=%.6f", b, s.tv);
  std::printf("\n");
  return true;
}

template <typename F>
void run(int n, const std::string& label, F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    std::printf("  exception: %s\n", e.what());
  }
  report(n, label, ok, seconds_since(t0));
}

}  // namespace

int main() {
  run(1, "cubic norm axioms, 6 families x 1000 exact samples", criterion_1_axioms);
  run(2, "quartic invariant specializations, exact", criterion_2_specializations);
  run(3, "single calibration constant against the form discriminant", criterion_3_calibration);
  run(4, "BPS closed form at X^3 - X Y^2, exact and numeric", criterion_4_bps_closed_form);
  run(5, "CM certificates on 50 random BPS charges per model", criterion_5_cm_certificates);
  run(6, "non-BPS closed form at X^3 + Y^3 with covariant and gradient checks",
      criterion_6_nonbps_closed_form);
  run(7, "height function equals the squared fake superpotential up to a constant",
      criterion_7_superpotential_square);
  run(8, "covariant minimizer matches the closed form and is equivariant",
      criterion_8_julia_agreement);
  run(9, "critical locus gradient and Hessian signature", criterion_9_critical_locus);
  run(10, "tangent-plane solver against the product-norm closed form", criterion_10_five_d);
  run(11, "symmetric-slice potential ignores the sign of p0", criterion_11_sign_flip);
  run(12, "class enumeration, histogram mass, density trend", criterion_12_distribution);
  std::printf("%d of 12 criteria passed\n", 12 - failures);
  return failures;
}
