// Equidistribution experiments for the one-modulus model: enumeration of
// negative-discriminant attractor points by class, histograms over the
// fundamental domain, the conjectural density evaluated under a configurable
// reading of its fiber variable, and distance statistics between the two.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "attractor/cubic_model.hpp"

namespace attractor {

// 2d histogram over the fundamental domain: x uniform in [-1/2, 1/2], y
// log-spaced in [sqrt(3)/2, ymax] plus one overflow row above ymax
struct EmpiricalMeasure {
  int nx = 0, ny = 0;
  double ymin = 0, ymax = 0;
  std::vector<std::int64_t> counts;  // nx * (ny + 1), last row is overflow
  std::int64_t total = 0;

  EmpiricalMeasure(int nx_bins, int ny_bins, double y_max);
  void add(double x, double y);  // throws wrong_class_error off the domain
  std::int64_t count(int ix, int iy) const { return counts[static_cast<size_t>(iy) * nx + ix]; }
  double x_edge(int k) const { return -0.5 + k * (1.0 / nx); }
  double y_edge(int k) const;  // k = 0..ny, geometric spacing
  std::vector<double> normalized() const;  // sums to 1 over all rows
};

// The density's fiber integral factors into a radial constant times an
// angular kernel, so the configurable reading only moves a prefactor; the
// shape over the fundamental domain comes from the kernel alone.
struct RhoOptions {
  enum class Frame {
    literal,   // F = tau^3/3, DF = tau^2 + (3i/2y) F exactly as displayed
    rescaled,  // F, DF multiplied by exp(K/2) sqrt(8) = y^{-3/2} first
  };
  enum class Fiber {
    w_lebesgue,      // |dY^2| = Lebesgue area of W = Y^2, weight exp(-|W|)
    y_pushforward,   // |dY^2| = 4|Y|^2 d^2Y, doubling the radial constant
  };
  Frame frame = Frame::literal;
  Fiber fiber = Fiber::w_lebesgue;
};

// closed form of the angular factor: integral over a period of
// (A + C cos u) restricted by the Heaviside cutoff; C >= 0
double rho_angular_kernel(double A, double C);

double density_rho(Cplx tau, const RhoOptions& opt = {});

struct DensityRho {
  RhoOptions options;
  std::string note;  // records the reading; no single one is canonical
  double operator()(Cplx tau) const { return density_rho(tau, options); }
};
DensityRho make_density(const RhoOptions& opt = {});

// one reduced attractor point per class with -bound <= disc < 0
std::vector<std::pair<BinaryCubic, HPoint>> attractor_sample(long long delta_bound);
// the grouping at a single discriminant value disc = -abs_disc
std::vector<std::pair<BinaryCubic, HPoint>> attractor_sample_at(long long abs_disc);

EmpiricalMeasure measure_from_sample(
    const std::vector<std::pair<BinaryCubic, HPoint>>& points, int nx, int ny,
    double ymax);

struct CompareStats {
  double tv = 0;        // total variation over the non-overflow bins
  double coverage = 0;  // fraction of points below the overflow row
  std::int64_t total = 0;
};

// both sides renormalized over the non-overflow window before the distance
CompareStats compare(const EmpiricalMeasure& m, const DensityRho& rho);
double tv_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

// distances for increasing bounds; exploratory output, no asserted limit
std::vector<std::pair<long long, CompareStats>> distance_trend(
    const std::vector<long long>& bounds, const DensityRho& rho, int nx, int ny);

// header bin_x,bin_y,count,rho_value; atomic write
void write_histogram_csv(const std::string& path, const EmpiricalMeasure& m,
                         const DensityRho& rho);
std::string plot_json(const EmpiricalMeasure& m, const DensityRho& rho);

}  // namespace attractor
