// 5d attractor data on the cubic hypersurface N(h) = 1: the ambient metric
// a_IJ = -(1/3) d^2 log N, its restriction to the tangent space of the
// hypersurface, the charge potential V(q) = q a^{-1} q, and a Newton solver
// for the critical condition grad N(h) proportional to q.
#pragma once

#include <Eigen/Dense>
#include <string>

#include "attractor/cubic_model.hpp"
#include "attractor/jordan.hpp"

namespace attractor {

struct HypersurfacePoint {
  Eigen::VectorXd h;            // N(h) = 1 within 1e-10, positive cone
  double mu = 0;                // grad N(h) = mu q at a solver output
  double tangent_residual = 0;  // |E^T q| / |q| at a solver output
};

struct FiveDCharge {
  Eigen::VectorXd q;  // covector q_I, not all zero
};

struct FiveDMetric {
  Eigen::MatrixXd ambient;        // a_IJ = (1/3)(dN dN^T / N^2 - d^2N / N)
  Eigen::MatrixXd ambient_inv;    // a^{IJ}
  Eigen::MatrixXd tangent_frame;  // n x (n-1) orthonormal columns, ker dN^T
  Eigen::MatrixXd scalar_metric;  // g_xy = (3/2) E^T a E
};

// Second derivatives of -(1/3) log N at h plus the tangent restriction.
// Requires N(h) > 0; a non positive definite ambient block signals the wrong
// cone component and raises numeric_error.
FiveDMetric metric_aIJ(const CubicNormStructure& J, const Eigen::VectorXd& h);

// Z = q . h
double central_charge_5d(const FiveDCharge& q, const HypersurfacePoint& h);

// V(q) = q^T a^{-1} q at a hypersurface point. Evaluated twice, directly and
// through the decomposition Z^2 + (3/2) g^{xy} Z_x Z_y; disagreement beyond
// 1e-8 relative raises numeric_error.
double potential_5d(const CubicNormStructure& J, const FiveDCharge& q,
                    const HypersurfacePoint& h);

// y scaled onto {N = level}: y * (level/N(y))^{1/3}. Requires N(y), level > 0.
Eigen::VectorXd rescale_to_norm(const CubicNormStructure& J, const Eigen::VectorXd& y,
                                double level);

// Newton on [grad N(h) - mu q; N(h) - 1] from cone start points. The output
// satisfies the tangent-plane property (q annihilates the tangent space) and
// a positive definite restricted Hessian of Z; failure of either means q is
// outside the orbit with compact stabilizer and raises numeric_error.
HypersurfacePoint solve_bps_5d(const CubicNormStructure& J, const FiveDCharge& q,
                               double tol = 1e-12);

// {"q": [...], "h": [...], "Z": ..., "V": ..., "tangent_residual": ...}
std::string five_d_json(const CubicNormStructure& J, const FiveDCharge& q,
                        const HypersurfacePoint& h);

}  // namespace attractor
