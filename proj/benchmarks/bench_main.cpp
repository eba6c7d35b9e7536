#include <benchmark/benchmark.h>

#include <complex>

#include "attractor/bps_attractor.hpp"
#include "attractor/cubic_model.hpp"
#include "attractor/fts.hpp"
#include "attractor/jordan.hpp"
#include "attractor/special_geometry.hpp"

namespace {

using attractor::AlgebraKind;
using attractor::BinaryCubic;
using attractor::ChargeVector;
using attractor::CubicNormStructure;
using attractor::Rational;

void bm_axiom_check_herm3q(benchmark::State& state) {
  const CubicNormStructure J = attractor::build_herm3(AlgebraKind::rational);
  for (auto _ : state) {
    auto rep = attractor::axiom_check(J, 10, 42);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(bm_axiom_check_herm3q);

void bm_quartic_invariant_octonion(benchmark::State& state) {
  const CubicNormStructure J = attractor::build_herm3(AlgebraKind::octonion);
  ChargeVector g = ChargeVector::zero(J);
  g.p0 = Rational(2);
  g.q0 = Rational(-3, 7);
  for (int i = 0; i < J.n; ++i) {
    g.p[i] = Rational(i + 1, 3);
    g.q[i] = Rational(2 * i - 5, 4);
  }
  for (auto _ : state) {
    Rational i4 = attractor::quartic_invariant(g);
    benchmark::DoNotOptimize(i4);
  }
}
BENCHMARK(bm_quartic_invariant_octonion);

void bm_bps_solve_herm3q(benchmark::State& state) {
  const CubicNormStructure J = attractor::build_herm3(AlgebraKind::rational);
  ChargeVector g = ChargeVector::zero(J);
  g.q0 = Rational(1);
  for (int i = 0; i < 3; ++i) g.p[i] = Rational(1);
  attractor::BpsSolver solver(J);
  for (auto _ : state) {
    auto sol = solver.solve(g);
    benchmark::DoNotOptimize(sol);
  }
}
BENCHMARK(bm_bps_solve_herm3q);

void bm_veff_eval_herm3q(benchmark::State& state) {
  const CubicNormStructure J = attractor::build_herm3(AlgebraKind::rational);
  attractor::SpecialGeometry sg(J);
  attractor::ChargeNum g{};
  g.p0 = 1.0;
  g.q0 = 2.0;
  g.p = Eigen::VectorXd::Zero(J.n);
  g.q = Eigen::VectorXd::Zero(J.n);
  Eigen::VectorXcd t(J.n);
  for (int i = 0; i < J.n; ++i)
    t[i] = std::complex<double>(0.1 * i, 1.0 + 0.05 * i);
  for (auto _ : state) {
    double v = sg.v_eff(g, t);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(bm_veff_eval_herm3q);

void bm_julia_covariant(benchmark::State& state) {
  const BinaryCubic f{Rational(3), Rational(1), Rational(-4), Rational(2)};
  for (auto _ : state) {
    auto p = attractor::julia_covariant(f);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(bm_julia_covariant);

void bm_class_representative(benchmark::State& state) {
  // Non-reduced form far from the fundamental domain.
  const BinaryCubic f{Rational(23), Rational(-61), Rational(54), Rational(-16)};
  for (auto _ : state) {
    auto rep = attractor::class_representative(f);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(bm_class_representative);

void bm_enumerate_forms(benchmark::State& state) {
  const long long bound = state.range(0);
  for (auto _ : state) {
    auto classes = attractor::enumerate_forms(bound, -1);
    benchmark::DoNotOptimize(classes);
  }
  state.SetLabel("negative discriminant classes");
}
BENCHMARK(bm_enumerate_forms)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
