#include "attractor/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <json.hpp>

namespace attractor {

namespace {

constexpr double kDomainFloor = 0.8660254037844386467637231707529362;  // sqrt(3)/2
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A(tau), B(tau) of the fiber quadratic form det = A + 2 Re(B e^{i phi}),
// phi the phase of Y^2; independent of the fiber radius.
void fiber_coefficients(Cplx tau, RhoOptions::Frame frame, double* A, Cplx* B) {
  const double y = tau.imag();
  if (!(y > 0)) throw wrong_class_error("density_rho: point below the real axis");
  Cplx F = tau * tau * tau / 3.0;
  Cplx DF = tau * tau + Cplx(0.0, 1.5 / y) * F;
  if (frame == RhoOptions::Frame::rescaled) {
    const double s = std::pow(y, -1.5);  // exp(K/2) sqrt(8) for exp(-K) = 8 y^3
    F *= s;
    DF *= s;
  }
  const double f2 = std::norm(F);
  *A = 4.0 + 10.0 * f2 + 2.25 * f2 * f2 - std::norm(DF);
  *B = 2.0 * DF * std::conj(F) * std::conj(F);
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(int nx_bins, int ny_bins, double y_max)
    : nx(nx_bins), ny(ny_bins), ymin(kDomainFloor), ymax(y_max) {
  if (nx < 1 || ny < 1) throw wrong_class_error("EmpiricalMeasure: need positive bin counts");
  if (!(ymax > ymin)) throw wrong_class_error("EmpiricalMeasure: ymax must exceed sqrt(3)/2");
  counts.assign(static_cast<size_t>(nx) * (ny + 1), 0);
}

double EmpiricalMeasure::y_edge(int k) const {
  return ymin * std::pow(ymax / ymin, static_cast<double>(k) / ny);
}

void EmpiricalMeasure::add(double x, double y) {
  if (std::abs(x) > 0.5 + 1e-9 || y < ymin * (1.0 - 1e-9) ||
      x * x + y * y < 1.0 - 1e-9)
    throw wrong_class_error("EmpiricalMeasure::add: point outside the fundamental domain");
  int ix = static_cast<int>(std::floor((x + 0.5) * nx));
  ix = std::clamp(ix, 0, nx - 1);
  int iy;
  if (y > ymax) {
    iy = ny;
  } else {
    iy = static_cast<int>(std::floor(std::log(y / ymin) / std::log(ymax / ymin) * ny));
    iy = std::clamp(iy, 0, ny - 1);
  }
  ++counts[static_cast<size_t>(iy) * nx + ix];
  ++total;
}

std::vector<double> EmpiricalMeasure::normalized() const {
  if (total == 0) throw wrong_class_error("EmpiricalMeasure::normalized: empty measure");
  std::vector<double> out(counts.size());
  for (size_t i = 0; i < counts.size(); ++i)
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return out;
}

double rho_angular_kernel(double A, double C) {
  if (C < 0) throw wrong_class_error("rho_angular_kernel: amplitude must be nonnegative");
  if (A >= C) return kTwoPi * A;
  if (A <= -C) return 0.0;
  const double u0 = std::acos(-A / C);
  return 2.0 * (A * u0 + C * std::sin(u0));
}

double density_rho(Cplx tau, const RhoOptions& opt) {
  double A;
  Cplx B;
  fiber_coefficients(tau, opt.frame, &A, &B);
  double rho = rho_angular_kernel(A, 2.0 * std::abs(B)) / (8.0 * std::numbers::pi * std::numbers::pi);
  if (opt.fiber == RhoOptions::Fiber::y_pushforward) rho *= 2.0;
  return rho;
}

DensityRho make_density(const RhoOptions& opt) {
  std::string note =
      opt.frame == RhoOptions::Frame::literal
          ? "F = tau^3/3, DF = tau^2 + (3i/2y)F as displayed"
          : "F, DF rescaled by y^{-3/2} (unit Kaehler frame) before A, B";
  note += opt.fiber == RhoOptions::Fiber::w_lebesgue
              ? "; fiber W = Y^2 with Lebesgue area and weight exp(-|W|)"
              : "; fiber Y with |dY^2| = 4|Y|^2 d^2Y (doubles the constant)";
  return DensityRho{opt, note};
}

std::vector<std::pair<BinaryCubic, HPoint>> attractor_sample(long long delta_bound) {
  std::vector<std::pair<BinaryCubic, HPoint>> out;
  for (const FormClass& c : enumerate_forms(delta_bound, -1))
    out.emplace_back(c.form, HPoint{c.x, c.y});
  return out;
}

std::vector<std::pair<BinaryCubic, HPoint>> attractor_sample_at(long long abs_disc) {
  const Rational target(Int(static_cast<long>(-abs_disc)));
  std::vector<std::pair<BinaryCubic, HPoint>> out;
  for (const FormClass& c : enumerate_forms(abs_disc, -1))
    if (c.disc == target) out.emplace_back(c.form, HPoint{c.x, c.y});
  return out;
}

EmpiricalMeasure measure_from_sample(
    const std::vector<std::pair<BinaryCubic, HPoint>>& points, int nx, int ny,
    double ymax) {
  EmpiricalMeasure m(nx, ny, ymax);
  for (const auto& [form, p] : points) m.add(p.x, p.y);
  return m;
}

CompareStats compare(const EmpiricalMeasure& m, const DensityRho& rho) {
  if (m.total == 0) throw wrong_class_error("compare: empty measure");
  // density mass per bin by a 3x3 midpoint rule; the overflow row is left out
  // of the distance and reported through the coverage fraction instead
  std::vector<double> q(static_cast<size_t>(m.nx) * m.ny, 0.0);
  double qsum = 0;
  for (int iy = 0; iy < m.ny; ++iy) {
    const double y0 = m.y_edge(iy), y1 = m.y_edge(iy + 1);
    for (int ix = 0; ix < m.nx; ++ix) {
      const double x0 = m.x_edge(ix), x1 = m.x_edge(ix + 1);
      double mass = 0;
      for (int sy = 0; sy < 3; ++sy)
        for (int sx = 0; sx < 3; ++sx) {
          const double x = x0 + (x1 - x0) * (sx + 0.5) / 3.0;
          const double y = y0 + (y1 - y0) * (sy + 0.5) / 3.0;
          mass += rho(Cplx(x, y));
        }
      mass *= (x1 - x0) * (y1 - y0) / 9.0;
      q[static_cast<size_t>(iy) * m.nx + ix] = mass;
      qsum += mass;
    }
  }
  if (!(qsum > 0)) throw numeric_error("compare: density vanishes on the whole window");
  std::int64_t inside = 0;
  for (int iy = 0; iy < m.ny; ++iy)
    for (int ix = 0; ix < m.nx; ++ix) inside += m.count(ix, iy);
  if (inside == 0) throw numeric_error("compare: every sample point overflows the window");
  double tv = 0;
  for (int iy = 0; iy < m.ny; ++iy)
    for (int ix = 0; ix < m.nx; ++ix) {
      const double p = static_cast<double>(m.count(ix, iy)) / static_cast<double>(inside);
      tv += std::abs(p - q[static_cast<size_t>(iy) * m.nx + ix] / qsum);
    }
  CompareStats s;
  s.tv = 0.5 * tv;
  s.coverage = static_cast<double>(inside) / static_cast<double>(m.total);
  s.total = m.total;
  return s;
}

double tv_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.nx != b.nx || a.ny != b.ny || a.ymax != b.ymax)
    throw wrong_class_error("tv_distance: incompatible binnings");
  const std::vector<double> pa = a.normalized(), pb = b.normalized();
  double tv = 0;
  for (size_t i = 0; i < pa.size(); ++i) tv += std::abs(pa[i] - pb[i]);
  return 0.5 * tv;
}

std::vector<std::pair<long long, CompareStats>> distance_trend(
    const std::vector<long long>& bounds, const DensityRho& rho, int nx, int ny) {
  std::vector<std::pair<long long, CompareStats>> out;
  for (long long b : bounds) {
    const auto sample = attractor_sample(b);
    const EmpiricalMeasure m =
        measure_from_sample(sample, nx, ny, std::sqrt(static_cast<double>(b)));
    out.emplace_back(b, compare(m, rho));
  }
  return out;
}

void write_histogram_csv(const std::string& path, const EmpiricalMeasure& m,
                         const DensityRho& rho) {
  const std::string tmp = path + ".tmp";
  FILE* fp = std::fopen(tmp.c_str(), "w");
  if (!fp) throw numeric_error("write_histogram_csv: cannot open " + tmp);
  std::fprintf(fp, "bin_x,bin_y,count,rho_value\n");
  for (int iy = 0; iy <= m.ny; ++iy)
    for (int ix = 0; ix < m.nx; ++ix) {
      const double xc = 0.5 * (m.x_edge(ix) + m.x_edge(ix + 1));
      // overflow row: tagged by the upper edge itself; no density value there
      const double yc = iy < m.ny ? 0.5 * (m.y_edge(iy) + m.y_edge(iy + 1)) : m.ymax;
      const double rv = iy < m.ny ? rho(Cplx(xc, yc)) : 0.0;
      std::fprintf(fp, "%.17g,%.17g,%lld,%.17g\n", xc, yc,
                   static_cast<long long>(m.count(ix, iy)), rv);
    }
  std::fclose(fp);
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw numeric_error("write_histogram_csv: atomic rename failed for " + path);
}

std::string plot_json(const EmpiricalMeasure& m, const DensityRho& rho) {
  nlohmann::json j;
  j["nx"] = m.nx;
  j["ny"] = m.ny;
  j["ymin"] = m.ymin;
  j["ymax"] = m.ymax;
  j["total"] = m.total;
  j["note"] = rho.note;
  auto xe = nlohmann::json::array(), ye = nlohmann::json::array();
  for (int k = 0; k <= m.nx; ++k) xe.push_back(m.x_edge(k));
  for (int k = 0; k <= m.ny; ++k) ye.push_back(m.y_edge(k));
  j["x_edges"] = xe;
  j["y_edges"] = ye;
  auto counts = nlohmann::json::array(), rv = nlohmann::json::array();
  for (int iy = 0; iy <= m.ny; ++iy)
    for (int ix = 0; ix < m.nx; ++ix) counts.push_back(m.count(ix, iy));
  for (int iy = 0; iy < m.ny; ++iy)
    for (int ix = 0; ix < m.nx; ++ix) {
      const double xc = 0.5 * (m.x_edge(ix) + m.x_edge(ix + 1));
      const double yc = 0.5 * (m.y_edge(iy) + m.y_edge(iy + 1));
      rv.push_back(rho(Cplx(xc, yc)));
    }
  j["counts"] = counts;
  j["rho"] = rv;
  return j.dump();
}

}  // namespace attractor
