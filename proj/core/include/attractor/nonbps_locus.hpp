// The explicit 4d black-hole potential over the tube domain in the variables
// (x, lambda), all auxiliary contraction tensors of the cubic structure that
// enter it, the critical-locus verification for charges (p^0, 0, q_0, 0),
// and the vanishing conditions controlling the linear x-terms.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "attractor/cubic_model.hpp"
#include "attractor/fts.hpp"
#include "attractor/special_geometry.hpp"

namespace attractor {

struct AuxTensors {
  double kappa = 0;  // d_ijk l^i l^j l^k = 6 N(lambda)
  Eigen::VectorXd kappa_i;
  Eigen::MatrixXd kappa_ij;
  Eigen::MatrixXd kappa_up;  // kappa^{ij}, inverse of kappa_ij
  double kappa_hat = 0;      // always 6
  Eigen::VectorXd kappa_hat_i;
  Eigen::MatrixXd kappa_hat_ij;
  double g = 0;  // g_ij x^i x^j
  Eigen::VectorXd g_i;
  Eigen::MatrixXd g_ij;
  Eigen::MatrixXd g_up;  // g^{ij} = 2(l^i l^j - (kappa/3) kappa^{ij})
  double h = 0;          // 6 N(x)
  Eigen::VectorXd h_i;
  Eigen::MatrixXd h_ij;
};

// all contractions of d_ijk with x and lambda entering the potential;
// requires N(lambda) > 0
AuxTensors aux_tensors(const CubicNormStructure& J, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& lambda);

// The five-line potential assembled from aux_tensors. Charges are in the
// layout of ChargeNum; the value equals SpecialGeometry::v_eff at
// t = x + i lambda.
double potential_4d_explicit(const CubicNormStructure& J, const ChargeNum& gamma,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& lambda);

// which of the three product families vanish identically (exact arithmetic):
// { p^0 p^i } , { q_i p^j } , { q_0 q_i }
std::array<bool, 3> linear_term_conditions(const ChargeVector& gamma);

struct CriticalLocusReport {
  int samples = 0;
  double kappa = 0;             // 6 q0 / p0
  double max_gradient = 0;      // full (x, lambda) gradient over all samples
  double kappa_entry_rel = 0;   // displayed kappa-kappa Hessian entry, relative
  double x_block_rel = 0;       // x-block against (4/3) kappa (p0)^2 g_ij
  double min_x_block_eig = 0;   // of the x-block Hessian
  int positive_count = 0;       // full Hessian spectrum at the last sample
  int near_zero_count = 0;      // |eig| < 1e-6 * largest
  int negative_count = 0;
  double max_near_zero_ratio = 0;
};

// Samples the locus {x = 0, kappa = 6 q0/p0}, checks that the potential is
// critical there, and compares the Hessian against its displayed block form:
// d^2/dkappa^2 of the restriction is 12 q0^2/kappa^3 and the x-block is the
// positive multiple (4/3) kappa (p0)^2 of g_ij. Requires q0/p0 > 0.
CriticalLocusReport critical_locus_check(const CubicNormStructure& J, double p0,
                                         double q0, int samples = 20,
                                         std::uint64_t seed = 1);

}  // namespace attractor
