#include "attractor/nonbps_locus.hpp"

#include <cmath>
#include <random>

#include "attractor/five_d.hpp"

namespace attractor {

namespace {

Eigen::VectorXd grad_vec(const CubicNormStructure& J, const Eigen::VectorXd& y) {
  const std::vector<double> g = J.grad_at<double>(y.data());
  return Eigen::Map<const Eigen::VectorXd>(g.data(), J.n);
}

Eigen::MatrixXd hess_mat(const CubicNormStructure& J, const Eigen::VectorXd& y) {
  const std::vector<double> m = J.hess_at<double>(y.data());
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(m.data(), J.n, J.n);
}

}  // namespace

AuxTensors aux_tensors(const CubicNormStructure& J, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& lambda) {
  if (x.size() != J.n || lambda.size() != J.n)
    throw wrong_class_error("aux_tensors: dimension mismatch");
  const double V = J.norm_at<double>(lambda.data());
  if (!(V > 0.0)) throw wrong_class_error("aux_tensors: N(lambda) <= 0");

  AuxTensors a;
  a.kappa = 6.0 * V;
  a.kappa_i = 2.0 * grad_vec(J, lambda);
  a.kappa_ij = hess_mat(J, lambda);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a.kappa_ij);
  if (!lu.isInvertible()) throw numeric_error("aux_tensors: singular kappa_ij");
  a.kappa_up = lu.inverse();

  const Eigen::VectorXd lhat = lambda * std::pow(V, -1.0 / 3.0);
  a.kappa_hat = 6.0 * J.norm_at<double>(lhat.data());
  a.kappa_hat_i = 2.0 * grad_vec(J, lhat);
  a.kappa_hat_ij = hess_mat(J, lhat);

  a.g_ij = 0.25 * (0.25 * a.kappa_hat_i * a.kappa_hat_i.transpose() - a.kappa_hat_ij) *
           std::pow(V, -2.0 / 3.0);
  a.g_i = -4.0 * a.g_ij * x;
  a.g = x.dot(a.g_ij * x);
  a.g_up = 2.0 * (lambda * lambda.transpose() - (a.kappa / 3.0) * a.kappa_up);

  a.h = 6.0 * J.norm_at<double>(x.data());
  a.h_i = 2.0 * grad_vec(J, x);
  a.h_ij = hess_mat(J, x);
  return a;
}

double potential_4d_explicit(const CubicNormStructure& J, const ChargeNum& gamma,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& lambda) {
  const AuxTensors a = aux_tensors(J, x, lambda);
  const int n = J.n;
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
      G(J.gram_d.data(), n, n);
  const double p0 = gamma.p0, q0 = gamma.q0, k = a.kappa;
  const Eigen::VectorXd p = gamma.p;
  const Eigen::VectorXd q = G * gamma.q;  // the display's q_i is the lowered charge

  const double L1 =
      (k / 6.0 * (1.0 + 4.0 * a.g) + a.h * a.h / (6.0 * k) +
       3.0 / (8.0 * k) * a.h_i.dot(a.g_up * a.h_i)) *
      p0 * p0;
  const double L2 =
      p.dot(((2.0 / 3.0) * k * a.g_ij +
             1.5 / k * (a.h_i * a.h_i.transpose() + a.h_ij * a.g_up * a.h_ij)) *
            p);
  const double L3 = 6.0 / k *
                    (q0 * q0 + 2.0 * q0 * x.dot(q) +
                     q.dot((x * x.transpose() + 0.25 * a.g_up) * q));
  // the bracket carries a free index; its charge bilinear is p^0 p^i
  const double L4 =
      2.0 * p0 *
      p.dot(k / 6.0 * a.g_i - a.h / (2.0 * k) * a.h_i -
            0.75 / k * (a.h_ij * (a.g_up * a.h_i)));
  const double L5 =
      -2.0 / k *
      (-a.h * p0 * q0 + 3.0 * q0 * p.dot(a.h_i) -
       p0 * q.dot(a.h * x + 0.75 * a.g_up * a.h_i) +
       3.0 * (q.dot(x) * p.dot(a.h_i) + 0.5 * q.dot(a.g_up * a.h_ij * p)));
  return 0.5 * (L1 + L2 + L3 + L4 + L5);
}

std::array<bool, 3> linear_term_conditions(const ChargeVector& gamma) {
  std::array<bool, 3> ok{true, true, true};
  for (const Rational& pi : gamma.p)
    if (!(gamma.p0 * pi).is_zero()) ok[0] = false;
  for (const Rational& qi : gamma.q)
    for (const Rational& pj : gamma.p)
      if (!(qi * pj).is_zero()) ok[1] = false;
  for (const Rational& qi : gamma.q)
    if (!(gamma.q0 * qi).is_zero()) ok[2] = false;
  return ok;
}

namespace {

// two-step Richardson central difference helpers on a callable of R^m
template <class F>
double deriv1(const F& f, Eigen::VectorXd z, int i, double h) {
  auto central = [&](double step) {
    Eigen::VectorXd zp = z, zm = z;
    zp[i] += step;
    zm[i] -= step;
    return (f(zp) - f(zm)) / (2.0 * step);
  };
  const double d1 = central(h), d2 = central(h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

template <class F>
double deriv2(const F& f, Eigen::VectorXd z, int i, int j, double h) {
  auto mixed = [&](double step) {
    Eigen::VectorXd zpp = z, zpm = z, zmp = z, zmm = z;
    zpp[i] += step;
    zpp[j] += step;
    zpm[i] += step;
    zpm[j] -= step;
    zmp[i] -= step;
    zmp[j] += step;
    zmm[i] -= step;
    zmm[j] -= step;
    return (f(zpp) - f(zpm) - f(zmp) + f(zmm)) / (4.0 * step * step);
  };
  const double d1 = mixed(h), d2 = mixed(h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

CriticalLocusReport critical_locus_check(const CubicNormStructure& J, double p0,
                                         double q0, int samples, std::uint64_t seed) {
  if (p0 == 0.0 || q0 == 0.0)
    throw wrong_class_error("critical_locus_check: p0 and q0 must be nonzero");
  const double level = q0 / p0;
  if (!(level > 0.0))
    throw wrong_class_error(
        "critical_locus_check: q0/p0 < 0 puts kappa = 6 q0/p0 outside the cone");
  const int n = J.n;
  ChargeNum gamma;
  gamma.p0 = p0;
  gamma.q0 = q0;
  gamma.p = Eigen::VectorXd::Zero(n);
  gamma.q = Eigen::VectorXd::Zero(n);

  const auto eval = [&](const Eigen::VectorXd& z) {
    return potential_4d_explicit(J, gamma, z.head(n), z.tail(n));
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-0.3, 0.3);
  CriticalLocusReport rep;
  rep.samples = samples;
  rep.kappa = 6.0 * level;
  const double scale = std::cbrt(level);

  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd dir(n);
    do {
      for (int i = 0; i < n; ++i) dir[i] = J.unit[i].to_double() + U(rng);
    } while (!(J.norm_at<double>(dir.data()) > 0.1));
    const Eigen::VectorXd lambda = rescale_to_norm(J, dir, level);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * n);
    z.tail(n) = lambda;
    const double V0 = eval(z);

    const double hstep = 1e-4 * std::max(1.0, scale);
    for (int i = 0; i < 2 * n; ++i)
      rep.max_gradient =
          std::max(rep.max_gradient, std::abs(deriv1(eval, z, i, hstep)) /
                                         std::max(1.0, std::abs(V0)));

    // restriction to the locus depends on lambda only through kappa
    const auto vstar = [&](double kappa) {
      return 2.0 * potential_4d_explicit(J, gamma, Eigen::VectorXd::Zero(n),
                                         (lambda * std::cbrt(kappa / rep.kappa)).eval());
    };
    const double hk = 2e-3 * rep.kappa;
    auto second = [&](double step) {
      return (vstar(rep.kappa + step) - 2.0 * vstar(rep.kappa) + vstar(rep.kappa - step)) /
             (step * step);
    };
    const double dkk = (4.0 * second(hk / 2.0) - second(hk)) / 3.0;
    const double want_kk = 12.0 * q0 * q0 / (rep.kappa * rep.kappa * rep.kappa);
    rep.kappa_entry_rel =
        std::max(rep.kappa_entry_rel, std::abs(dkk - want_kk) / std::abs(want_kk));

    // x-block of the displayed Hessian at fixed lambda
    const auto vstar_x = [&](const Eigen::VectorXd& xv) {
      return 2.0 * potential_4d_explicit(J, gamma, xv, lambda);
    };
    const double hx = 2e-3 * std::max(1.0, scale);
    Eigen::MatrixXd Hx(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Hx(i, j) = deriv2(vstar_x, Eigen::VectorXd::Zero(n), i, j, hx);
        Hx(j, i) = Hx(i, j);
      }
    const Eigen::MatrixXd want_x =
        (4.0 / 3.0) * rep.kappa * p0 * p0 * aux_tensors(J, Eigen::VectorXd::Zero(n), lambda).g_ij;
    rep.x_block_rel =
        std::max(rep.x_block_rel, (Hx - want_x).norm() / want_x.norm());
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Hx).eigenvalues().minCoeff();
    rep.min_x_block_eig = (s == 0) ? min_eig : std::min(rep.min_x_block_eig, min_eig);

    // full spectrum over (x, lambda) on the last sample
    if (s == samples - 1) {
      Eigen::MatrixXd H(2 * n, 2 * n);
      for (int i = 0; i < 2 * n; ++i)
        for (int j = i; j < 2 * n; ++j) {
          H(i, j) = deriv2(eval, z, i, j, hx);
          H(j, i) = H(i, j);
        }
      const Eigen::VectorXd eig =
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues();
      const double emax = eig.cwiseAbs().maxCoeff();
      for (int i = 0; i < 2 * n; ++i) {
        if (std::abs(eig[i]) < 1e-6 * emax) {
          ++rep.near_zero_count;
          rep.max_near_zero_ratio =
              std::max(rep.max_near_zero_ratio, std::abs(eig[i]) / emax);
        } else if (eig[i] > 0) {
          ++rep.positive_count;
        } else {
          ++rep.negative_count;
        }
      }
    }
  }
  return rep;
}

}  // namespace attractor
