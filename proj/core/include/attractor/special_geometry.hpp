// Numeric very special geometry of the moduli domain J + i C(J): Kahler
// potential K = -log(8 N(Im t)), its metric, homogeneous periods of the
// prepotential F(X) = N(X_J)/X^0, central charges, and the effective
// potential e^K (|W|^2 + g^{jk} D_j W conj(D_k W)).
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "attractor/fts.hpp"

namespace attractor {

using Cplx = std::complex<double>;

struct ChargeNum {
  double p0 = 0;
  Eigen::VectorXd p, q;
  double q0 = 0;
  static ChargeNum from(const ChargeVector& g);
};

class SpecialGeometry {
 public:
  explicit SpecialGeometry(const CubicNormStructure& J);

  const CubicNormStructure& structure() const { return *J_; }
  int n() const { return n_; }
  const Eigen::MatrixXd& gram() const { return G_; }
  const Eigen::MatrixXd& gram_inv() const { return Ginv_; }

  double norm(const Eigen::VectorXd& y) const;
  Eigen::VectorXd grad(const Eigen::VectorXd& y) const;
  Eigen::MatrixXd hess(const Eigen::VectorXd& y) const;
  Cplx norm_c(const Eigen::VectorXcd& t) const;
  Eigen::VectorXcd grad_c(const Eigen::VectorXcd& t) const;
  Eigen::MatrixXcd hess_c(const Eigen::VectorXcd& t) const;
  double trace(const Eigen::VectorXd& y) const;
  Eigen::VectorXd sharp(const Eigen::VectorXd& y) const;

  // interior of the symmetric cone: all char-poly coefficients positive
  bool in_positive_cone(const Eigen::VectorXd& y) const;

  double kahler_exp(const Eigen::VectorXcd& t) const;  // e^{-K}
  double kahler(const Eigen::VectorXcd& t) const;
  // dK/dt_j = i N_j(Im t) / (2 N(Im t))
  Eigen::VectorXcd kahler_grad(const Eigen::VectorXcd& t) const;
  Eigen::MatrixXd metric(const Eigen::VectorXcd& t) const;
  // closed-form inverse 2(y y^T - 2 N(y) (d2N(y))^{-1}), y = Im t
  Eigen::MatrixXd metric_inv(const Eigen::VectorXcd& t) const;

  // homogeneous layout (X^0, X^i, F_0, F_i)
  Cplx prepotential(Cplx x0, const Eigen::VectorXcd& xj) const;
  Eigen::VectorXcd period_from_x(Cplx x0, const Eigen::VectorXcd& xj) const;
  Eigen::VectorXcd period_vector(const Eigen::VectorXcd& t) const;  // X^0 = 1
  static Cplx symplectic_pairing(const Eigen::VectorXcd& v, const Eigen::VectorXcd& w);
  // charge embedded in period layout: (p^0, p^i, q_0, (G q)_i)
  Eigen::VectorXcd charge_period_layout(const ChargeNum& g) const;

  // W(t) = q_0 + (Gq).t + p^0 N(t) - p.dN(t)
  Cplx superpotential(const ChargeNum& g, const Eigen::VectorXcd& t) const;
  Eigen::VectorXcd superpotential_grad(const ChargeNum& g, const Eigen::VectorXcd& t) const;
  Cplx central_charge(const ChargeNum& g, const Eigen::VectorXcd& t) const;  // e^{K/2} W
  Eigen::VectorXcd covariant_grad(const ChargeNum& g, const Eigen::VectorXcd& t) const;
  double v_eff(const ChargeNum& g, const Eigen::VectorXcd& t) const;

 private:
  const CubicNormStructure* J_;
  int n_;
  Eigen::MatrixXd G_, Ginv_;
  Eigen::VectorXd traces_;
};

}  // namespace attractor
