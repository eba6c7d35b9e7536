#include "attractor/special_geometry.hpp"

#include <cmath>

namespace attractor {

ChargeNum ChargeNum::from(const ChargeVector& g) {
  ChargeNum out;
  const int n = g.J->n;
  out.p0 = g.p0.to_double();
  out.q0 = g.q0.to_double();
  out.p.resize(n);
  out.q.resize(n);
  for (int i = 0; i < n; ++i) {
    out.p[i] = g.p[i].to_double();
    out.q[i] = g.q[i].to_double();
  }
  return out;
}

SpecialGeometry::SpecialGeometry(const CubicNormStructure& J) : J_(&J), n_(J.n) {
  G_.resize(n_, n_);
  Ginv_.resize(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      G_(i, j) = J.gram_d[static_cast<size_t>(i) * n_ + j];
      Ginv_(i, j) = J.gram_inv_d[static_cast<size_t>(i) * n_ + j];
    }
  traces_.resize(n_);
  for (int i = 0; i < n_; ++i) traces_[i] = J.basis_traces[i].to_double();
}

double SpecialGeometry::norm(const Eigen::VectorXd& y) const {
  return J_->norm_at<double>(y.data());
}

Eigen::VectorXd SpecialGeometry::grad(const Eigen::VectorXd& y) const {
  std::vector<double> g = J_->grad_at<double>(y.data());
  return Eigen::Map<Eigen::VectorXd>(g.data(), n_);
}

Eigen::MatrixXd SpecialGeometry::hess(const Eigen::VectorXd& y) const {
  std::vector<double> h = J_->hess_at<double>(y.data());
  return Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      h.data(), n_, n_);
}

Cplx SpecialGeometry::norm_c(const Eigen::VectorXcd& t) const {
  return J_->norm_at<Cplx>(t.data());
}

Eigen::VectorXcd SpecialGeometry::grad_c(const Eigen::VectorXcd& t) const {
  std::vector<Cplx> g = J_->grad_at<Cplx>(t.data());
  return Eigen::Map<Eigen::VectorXcd>(g.data(), n_);
}

Eigen::MatrixXcd SpecialGeometry::hess_c(const Eigen::VectorXcd& t) const {
  std::vector<Cplx> h = J_->hess_at<Cplx>(t.data());
  return Eigen::Map<Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      h.data(), n_, n_);
}

double SpecialGeometry::trace(const Eigen::VectorXd& y) const { return traces_.dot(y); }

Eigen::VectorXd SpecialGeometry::sharp(const Eigen::VectorXd& y) const {
  return Ginv_ * grad(y);
}

bool SpecialGeometry::in_positive_cone(const Eigen::VectorXd& y) const {
  // char poly of y is s^3 - Tr(y) s^2 + Tr(y#) s - N(y)
  return norm(y) > 0.0 && trace(y) > 0.0 && trace(sharp(y)) > 0.0;
}

double SpecialGeometry::kahler_exp(const Eigen::VectorXcd& t) const {
  return 8.0 * norm(t.imag());
}

double SpecialGeometry::kahler(const Eigen::VectorXcd& t) const {
  const double e = kahler_exp(t);
  if (!(e > 0.0)) throw exact_error("moduli point is outside the domain: N(Im t) <= 0");
  return -std::log(e);
}

Eigen::VectorXcd SpecialGeometry::kahler_grad(const Eigen::VectorXcd& t) const {
  const Eigen::VectorXd y = t.imag();
  const double ny = norm(y);
  return Cplx(0.0, 1.0) * (grad(y) / (2.0 * ny)).cast<Cplx>();
}

Eigen::MatrixXd SpecialGeometry::metric(const Eigen::VectorXcd& t) const {
  const Eigen::VectorXd y = t.imag();
  const double ny = norm(y);
  const Eigen::VectorXd dy = grad(y);
  return 0.25 * (dy * dy.transpose() / (ny * ny) - hess(y) / ny);
}

Eigen::MatrixXd SpecialGeometry::metric_inv(const Eigen::VectorXcd& t) const {
  const Eigen::VectorXd y = t.imag();
  const double ny = norm(y);
  const Eigen::MatrixXd hinv = hess(y).inverse();
  return 2.0 * (y * y.transpose() - 2.0 * ny * hinv);
}

Cplx SpecialGeometry::prepotential(Cplx x0, const Eigen::VectorXcd& xj) const {
  return norm_c(xj) / x0;
}

Eigen::VectorXcd SpecialGeometry::period_from_x(Cplx x0, const Eigen::VectorXcd& xj) const {
  Eigen::VectorXcd v(2 * n_ + 2);
  v[0] = x0;
  v.segment(1, n_) = xj;
  v[n_ + 1] = -norm_c(xj) / (x0 * x0);
  v.segment(n_ + 2, n_) = grad_c(xj) / x0;
  return v;
}

Eigen::VectorXcd SpecialGeometry::period_vector(const Eigen::VectorXcd& t) const {
  return period_from_x(Cplx(1.0, 0.0), t);
}

Cplx SpecialGeometry::symplectic_pairing(const Eigen::VectorXcd& v, const Eigen::VectorXcd& w) {
  const int m = static_cast<int>(v.size()) / 2;
  Cplx acc(0.0, 0.0);
  for (int i = 0; i < m; ++i) acc += v[m + i] * w[i] - v[i] * w[m + i];
  return acc;
}

Eigen::VectorXcd SpecialGeometry::charge_period_layout(const ChargeNum& g) const {
  Eigen::VectorXcd v(2 * n_ + 2);
  v[0] = g.p0;
  v.segment(1, n_) = g.p.cast<Cplx>();
  v[n_ + 1] = g.q0;
  v.segment(n_ + 2, n_) = (G_ * g.q).cast<Cplx>();
  return v;
}

Cplx SpecialGeometry::superpotential(const ChargeNum& g, const Eigen::VectorXcd& t) const {
  const Eigen::VectorXd qd = G_ * g.q;
  Cplx w = Cplx(g.q0, 0.0) + qd.cast<Cplx>().dot(t) + g.p0 * norm_c(t);
  w -= g.p.cast<Cplx>().dot(grad_c(t));
  return w;
}

Eigen::VectorXcd SpecialGeometry::superpotential_grad(const ChargeNum& g,
                                                      const Eigen::VectorXcd& t) const {
  const Eigen::VectorXd qd = G_ * g.q;
  return qd.cast<Cplx>() + g.p0 * grad_c(t) - hess_c(t) * g.p.cast<Cplx>();
}

Cplx SpecialGeometry::central_charge(const ChargeNum& g, const Eigen::VectorXcd& t) const {
  return std::exp(0.5 * kahler(t)) * superpotential(g, t);
}

Eigen::VectorXcd SpecialGeometry::covariant_grad(const ChargeNum& g,
                                                 const Eigen::VectorXcd& t) const {
  return superpotential_grad(g, t) + kahler_grad(t) * superpotential(g, t);
}

double SpecialGeometry::v_eff(const ChargeNum& g, const Eigen::VectorXcd& t) const {
  const Cplx w = superpotential(g, t);
  const Eigen::VectorXcd dw = covariant_grad(g, t);
  const Eigen::MatrixXd ginv = metric(t).inverse();
  double fiber = 0.0;
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k) fiber += ginv(j, k) * std::real(dw[j] * std::conj(dw[k]));
  return std::exp(kahler(t)) * (std::norm(w) + fiber);
}

}  // namespace attractor
