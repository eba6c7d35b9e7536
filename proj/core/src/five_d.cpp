#include "attractor/five_d.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "attractor/special_geometry.hpp"

namespace attractor {

namespace {

Eigen::VectorXd norm_grad(const CubicNormStructure& J, const Eigen::VectorXd& h) {
  const std::vector<double> g = J.grad_at<double>(h.data());
  return Eigen::Map<const Eigen::VectorXd>(g.data(), J.n);
}

Eigen::MatrixXd norm_hess(const CubicNormStructure& J, const Eigen::VectorXd& h) {
  const std::vector<double> m = J.hess_at<double>(h.data());
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(m.data(), J.n, J.n);
}

// orthonormal basis of the hyperplane grad^T v = 0
Eigen::MatrixXd tangent_frame_of(const Eigen::VectorXd& grad) {
  const int n = static_cast<int>(grad.size());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(grad);
  Eigen::MatrixXd Q = qr.householderQ();
  return Q.rightCols(n - 1);
}

}  // namespace

FiveDMetric metric_aIJ(const CubicNormStructure& J, const Eigen::VectorXd& h) {
  if (h.size() != J.n) throw wrong_class_error("metric_aIJ: dimension mismatch");
  const double N = J.norm_at<double>(h.data());
  if (!(N > 0.0)) throw wrong_class_error("metric_aIJ: N(h) <= 0");
  const Eigen::VectorXd g = norm_grad(J, h);
  const Eigen::MatrixXd H = norm_hess(J, h);

  FiveDMetric out;
  out.ambient = (g * g.transpose() / (N * N) - H / N) / 3.0;
  Eigen::LLT<Eigen::MatrixXd> llt(out.ambient);
  if (llt.info() != Eigen::Success)
    throw numeric_error("metric_aIJ: ambient metric not positive definite (wrong cone component)");
  out.ambient_inv = llt.solve(Eigen::MatrixXd::Identity(J.n, J.n));
  out.tangent_frame = tangent_frame_of(g);
  out.scalar_metric =
      1.5 * out.tangent_frame.transpose() * out.ambient * out.tangent_frame;
  return out;
}

double central_charge_5d(const FiveDCharge& q, const HypersurfacePoint& h) {
  return q.q.dot(h.h);
}

double potential_5d(const CubicNormStructure& J, const FiveDCharge& q,
                    const HypersurfacePoint& h) {
  if (q.q.size() != J.n || q.q.isZero(0.0))
    throw wrong_class_error("potential_5d: charge must be nonzero of matching dimension");
  const double N = J.norm_at<double>(h.h.data());
  if (std::abs(N - 1.0) > 1e-8)
    throw wrong_class_error("potential_5d: point is off the hypersurface N = 1");
  const FiveDMetric m = metric_aIJ(J, h.h);

  const double direct = q.q.dot(m.ambient_inv * q.q);
  // decomposition against the a-orthogonal split span(h) + tangent space:
  // a(h,h) = 1 and hess N . h = 2 grad N make h a unit a-normal of the frame
  const double Z = central_charge_5d(q, h);
  double decomposed = Z * Z;
  if (J.n > 1) {
    const Eigen::VectorXd Zx = m.tangent_frame.transpose() * q.q;
    decomposed += 1.5 * Zx.dot(m.scalar_metric.llt().solve(Zx));
  }
  if (std::abs(direct - decomposed) > 1e-8 * std::max(1.0, std::abs(direct)))
    throw numeric_error("potential_5d: inverse-metric and decomposed values disagree");
  return direct;
}

Eigen::VectorXd rescale_to_norm(const CubicNormStructure& J, const Eigen::VectorXd& y,
                                double level) {
  if (y.size() != J.n) throw wrong_class_error("rescale_to_norm: dimension mismatch");
  if (!(level > 0.0)) throw wrong_class_error("rescale_to_norm: level must be positive");
  const double N = J.norm_at<double>(y.data());
  if (!(N > 0.0)) throw wrong_class_error("rescale_to_norm: N(y) <= 0");
  return y * std::cbrt(level / N);
}

HypersurfacePoint solve_bps_5d(const CubicNormStructure& J, const FiveDCharge& q,
                               double tol) {
  const int n = J.n;
  if (q.q.size() != n || q.q.isZero(0.0))
    throw wrong_class_error("solve_bps_5d: charge must be nonzero of matching dimension");
  const SpecialGeometry geom(J);

  std::vector<Eigen::VectorXd> starts;
  Eigen::VectorXd unit(n);
  for (int i = 0; i < n; ++i) unit[i] = J.unit[i].to_double();
  starts.push_back(unit);
  // (G^{-1} q)^# solves grad N(h) = N(G^{-1} q) q exactly; rescaling keeps the
  // critical direction, so Newton from here only has to confirm
  {
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                         Eigen::RowMajor>>
        Ginv(J.gram_inv_d.data(), n, n);
    const Eigen::VectorXd u = Ginv * q.q;
    const Eigen::VectorXd sharp_u = Ginv * norm_grad(J, u);
    const double Ns = J.norm_at<double>(sharp_u.data());
    if (Ns > 0.0) starts.push_back(sharp_u * std::cbrt(1.0 / Ns));
  }

  std::ostringstream diag;
  for (size_t si = 0; si < starts.size(); ++si) {
    Eigen::VectorXd h = starts[si];
    double mu = norm_grad(J, h).dot(q.q) / q.q.squaredNorm();
    double res = 0.0;
    bool converged = false;
    for (int it = 0; it < 80; ++it) {
      const Eigen::VectorXd g = norm_grad(J, h);
      const double N = J.norm_at<double>(h.data());
      Eigen::VectorXd F(n + 1);
      F.head(n) = g - mu * q.q;
      F[n] = N - 1.0;
      res = F.norm();
      if (res < tol) {
        converged = true;
        break;
      }
      Eigen::MatrixXd Jac(n + 1, n + 1);
      Jac.topLeftCorner(n, n) = norm_hess(J, h);
      Jac.topRightCorner(n, 1) = -q.q;
      Jac.bottomLeftCorner(1, n) = g.transpose();
      Jac(n, n) = 0.0;
      const Eigen::VectorXd step = Jac.fullPivLu().solve(-F);
      if (!step.allFinite()) break;
      h += step.head(n);
      mu += step[n];
    }
    if (!converged) {
      diag << " start " << si << ": residual " << res << ";";
      continue;
    }
    if (!geom.in_positive_cone(h)) {
      diag << " start " << si << ": solution outside the positive cone;";
      continue;
    }
    HypersurfacePoint out;
    out.h = h;
    out.mu = mu;
    const Eigen::VectorXd g = norm_grad(J, h);
    if (n > 1) {
      const Eigen::MatrixXd E = tangent_frame_of(g);
      out.tangent_residual = (E.transpose() * q.q).norm() / q.q.norm();
      // constrained Hessian of Z on {N = 1}: -(1/mu) E^T hess N E
      const Eigen::MatrixXd Hc = -(E.transpose() * norm_hess(J, h) * E) / mu;
      const double lmin =
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Hc).eigenvalues().minCoeff();
      if (!(lmin > 0.0))
        throw numeric_error(
            "solve_bps_5d: restricted Hessian not positive definite (charge outside "
            "the compact-stabilizer orbit)");
    }
    if (out.tangent_residual > 1e-9)
      throw numeric_error("solve_bps_5d: tangent-plane property violated at the solution");
    return out;
  }
  throw numeric_error("solve_bps_5d: Newton did not converge to a cone point:" + diag.str());
}

std::string five_d_json(const CubicNormStructure& J, const FiveDCharge& q,
                        const HypersurfacePoint& h) {
  nlohmann::json j;
  j["q"] = std::vector<double>(q.q.data(), q.q.data() + q.q.size());
  j["h"] = std::vector<double>(h.h.data(), h.h.data() + h.h.size());
  j["Z"] = central_charge_5d(q, h);
  j["V"] = potential_5d(J, q, h);
  j["tangent_residual"] = h.tangent_residual;
  return j.dump();
}

}  // namespace attractor
