// Command-line surface: solve attractor points, enumerate form classes,
// run the distribution experiment, and check axioms / the critical locus /
// 5d charges. All outputs are deterministic under a fixed seed and file
// writes are atomic. Exit codes: 0 success, 2 usage, 3 numeric failure,
// 4 certificate or check failure.
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <unistd.h>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "attractor/bps_attractor.hpp"
#include "attractor/cubic_model.hpp"
#include "attractor/distribution.hpp"
#include "attractor/five_d.hpp"
#include "attractor/fts.hpp"
#include "attractor/jordan.hpp"
#include "attractor/nonbps_locus.hpp"
#include "attractor/special_geometry.hpp"

namespace {

using attractor::AlgebraKind;
using attractor::BinaryCubic;
using attractor::ChargeVector;
using attractor::Cplx;
using attractor::CubicNormStructure;
using attractor::Rational;
using Json = nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCertificate = 4;

double clean(double v) { return v == 0.0 ? 0.0 : v; }  // drops the sign of -0

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    if (text.empty() || text.back() != '\n') std::fputc('\n', stdout);
    return;
  }
  const std::string tmp = path + ".tmp";
  FILE* fp = std::fopen(tmp.c_str(), "w");
  if (!fp) throw attractor::numeric_error("cannot open " + tmp);
  std::fwrite(text.data(), 1, text.size(), fp);
  if (text.empty() || text.back() != '\n') std::fputc('\n', fp);
  std::fclose(fp);
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw attractor::numeric_error("atomic rename failed for " + path);
}

Rational parse_rational(const std::string& s) {
  try {
    return Rational(mpq_class(s));
  } catch (const std::invalid_argument&) {
    throw attractor::wrong_class_error("not a rational number: " + s);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

BinaryCubic parse_form(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 4)
    throw attractor::wrong_class_error("--form needs four comma-separated coefficients a,b,c,d");
  return BinaryCubic{parse_rational(parts[0]), parse_rational(parts[1]),
                     parse_rational(parts[2]), parse_rational(parts[3])};
}

std::map<std::string, Rational> parse_kv(const std::string& s) {
  std::map<std::string, Rational> kv;
  for (const std::string& item : split(s, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw attractor::wrong_class_error("--charge entries must look like key=value: " + item);
    kv[item.substr(0, eq)] = parse_rational(item.substr(eq + 1));
  }
  return kv;
}

CubicNormStructure make_model(const std::string& name) {
  if (name == "t3" || name == "rank1") return attractor::build_rank1();
  if (name == "stu") return attractor::build_stu();
  if (name == "hyperbolic") return attractor::build_generic_hyperbolic();
  if (name == "herm3q") return attractor::build_herm3(AlgebraKind::rational);
  if (name == "herm3c") return attractor::build_herm3(AlgebraKind::imaginary_quadratic);
  if (name == "herm3h") return attractor::build_herm3(AlgebraKind::quaternion);
  if (name == "herm3o") return attractor::build_herm3(AlgebraKind::octonion);
  throw attractor::wrong_class_error(
      "unknown model " + name + " (t3, stu, hyperbolic, herm3q, herm3c, herm3h, herm3o)");
}

ChargeVector parse_charge_vector(const CubicNormStructure& J, const std::string& s) {
  ChargeVector g = ChargeVector::zero(J);
  for (const auto& [key, val] : parse_kv(s)) {
    if (key == "p0") {
      g.p0 = val;
    } else if (key == "q0") {
      g.q0 = val;
    } else if (key.size() > 1 && (key[0] == 'p' || key[0] == 'q')) {
      int idx = 0;
      try {
        idx = std::stoi(key.substr(1));
      } catch (const std::exception&) {
        throw attractor::wrong_class_error("bad charge key " + key);
      }
      if (idx < 1 || idx > J.n)
        throw attractor::wrong_class_error("charge index out of range in " + key);
      (key[0] == 'p' ? g.p : g.q)[idx - 1] = val;
    } else {
      throw attractor::wrong_class_error("bad charge key " + key);
    }
  }
  return g;
}

std::string int_str(const attractor::Int& v) { return v.get_str(); }

Json minpoly_json(const attractor::CmCertificate& cert) {
  Json arr = Json::array();
  for (const auto& m : cert.minpoly)
    arr.push_back(Json::array({int_str(m.A), int_str(m.B), int_str(m.C)}));
  return arr;
}

// exact BPS attractor for a charge with I4 > 0; exits through the returned
// code when the certificate fails
int solve_bps_json(const CubicNormStructure& J, const ChargeVector& g, Json* out) {
  const attractor::BpsSolver solver(J);
  const attractor::BpsSolution sol = solver.solve(g);
  const bool verified = attractor::verify_attractor(g, sol);
  const attractor::CmCertificate cert = attractor::cm_certificate(g, sol);
  (*out)["class"] = "BPS";
  (*out)["quartic"] = sol.quartic.str();
  (*out)["field_disc"] = int_str(sol.disc_core);
  Json periods;
  periods["X0"] = sol.x0.str();
  Json xj = Json::array(), fj = Json::array();
  for (const auto& v : sol.xj) xj.push_back(v.str());
  for (const auto& v : sol.fj) fj.push_back(v.str());
  periods["XJ"] = xj;
  periods["F0"] = sol.f0.str();
  periods["FJ"] = fj;
  (*out)["periods"] = periods;
  if (!sol.homogeneous_only) {
    Json texact = Json::array(), tnum = Json::array();
    for (const auto& v : sol.t) {
      texact.push_back(v.str());
      const auto [re, im] = v.to_complex();
      tnum.push_back(Json{{"x", clean(re)}, {"y", clean(im)}});
    }
    (*out)["t_exact"] = texact;
    (*out)["t"] = tnum;
    if (J.n == 1) (*out)["tau"] = tnum[0];
  } else {
    (*out)["note"] = "X^0 = 0: no affine moduli chart";
  }
  (*out)["cm"] = Json{{"field_disc", int_str(cert.disc_core)},
                      {"affine_chart", cert.affine_chart},
                      {"minpoly", minpoly_json(cert)},
                      {"attractor_equations_exact", cert.attractor_equations_exact},
                      {"field_is_imaginary_quadratic", cert.field_is_imaginary_quadratic}};
  (*out)["verified"] = verified;
  (*out)["interior_cone"] = sol.interior_cone;
  return verified && cert.ok() ? 0 : kExitCertificate;
}

int cmd_solve(const std::string& model, const std::string& form_s,
              const std::string& charge_s, const std::string& out_path) {
  if (form_s.empty() == charge_s.empty())
    throw attractor::wrong_class_error("solve needs exactly one of --form or --charge");
  Json out;
  int rc = 0;
  if (!form_s.empty()) {
    if (model != "t3" && model != "rank1")
      throw attractor::wrong_class_error("--form applies to the one-modulus model only");
    const BinaryCubic f = parse_form(form_s);
    const Rational disc = attractor::cubic_discriminant(f);
    if (disc.sign() == 0)
      throw attractor::numeric_error("degenerate form: discriminant is zero");
    out["disc"] = disc.str();
    if (disc.sign() > 0) {
      const CubicNormStructure J = attractor::build_rank1();
      rc = solve_bps_json(J, attractor::charge_of_cubic(J, f), &out);
    } else {
      const attractor::HPoint tau = attractor::nonbps_point(f);
      out["class"] = "nonBPS";
      out["tau"] = Json{{"x", clean(tau.x)}, {"y", clean(tau.y)}};
      const attractor::H3Point jl = attractor::julia_covariant(f);
      out["julia_agreement"] =
          attractor::h3_distance(jl, attractor::H3Point{Cplx(tau.x, 0.0), tau.y});
    }
  } else {
    const CubicNormStructure J = make_model(model);
    const ChargeVector g = parse_charge_vector(J, charge_s);
    const Rational i4 = attractor::quartic_invariant(g);
    out["quartic"] = i4.str();
    if (i4.sign() > 0) {
      rc = solve_bps_json(J, g, &out);
    } else if (i4.sign() < 0) {
      out["class"] = "nonBPS";
      bool vector_free = true;
      for (const Rational& v : g.p) vector_free = vector_free && v.is_zero();
      for (const Rational& v : g.q) vector_free = vector_free && v.is_zero();
      if (vector_free && g.p0.sign() != 0 && (g.q0 / g.p0).sign() > 0) {
        const double p0 = g.p0.to_double(), q0 = g.q0.to_double();
        out["locus"] = Json{{"type", "x = 0, volume pinned by the charge ratio"},
                            {"kappa", clean(6.0 * q0 / p0)},
                            {"dimension", J.n - 1}};
      } else if (J.n == 1) {
        const attractor::HPoint tau = attractor::nonbps_point(attractor::cubic_of_charge(g));
        out["tau"] = Json{{"x", clean(tau.x)}, {"y", clean(tau.y)}};
      } else {
        out["note"] = "no closed-form point for this charge family; classification only";
      }
    } else {
      throw attractor::numeric_error("quartic invariant vanishes: no regular attractor");
    }
  }
  emit(out.dump(2), out_path);
  return rc;
}

int cmd_enumerate(long long bound, const std::string& sign_s, const std::string& out_path) {
  const int sign = sign_s == "pos" ? 1 : -1;
  if (sign_s != "pos" && sign_s != "neg")
    throw attractor::wrong_class_error("--sign must be pos or neg");
  const auto classes = attractor::enumerate_forms(bound, sign);
  if (!out_path.empty()) {
    attractor::write_classes_csv(out_path, classes);
    Json summary{{"classes", classes.size()}, {"bound", bound},
                 {"sign", sign}, {"out", out_path}};
    emit(summary.dump(2), "");
  } else {
    std::string csv = "a,b,c,d,disc,x,y,class\n";
    char buf[160];
    for (const auto& c : classes) {
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%s\n", c.x, c.y, c.bps ? "BPS" : "nonBPS");
      csv += c.form.a.str() + "," + c.form.b.str() + "," + c.form.c.str() + "," +
             c.form.d.str() + "," + c.disc.str() + buf;
    }
    emit(csv, "");
  }
  return 0;
}

int cmd_distribution(long long bound, int nx, int ny, const std::string& frame,
                     const std::string& out_path, const std::string& plot_path) {
  attractor::RhoOptions opt;
  if (frame == "rescaled")
    opt.frame = attractor::RhoOptions::Frame::rescaled;
  else if (frame != "literal")
    throw attractor::wrong_class_error("--frame must be literal or rescaled");
  const attractor::DensityRho rho = attractor::make_density(opt);

  const auto sample = attractor::attractor_sample(bound);
  const attractor::EmpiricalMeasure m = attractor::measure_from_sample(
      sample, nx, ny, std::sqrt(static_cast<double>(bound)));
  double mass = 0;
  for (double v : m.normalized()) mass += v;
  const attractor::CompareStats stats = attractor::compare(m, rho);

  std::vector<long long> bounds;
  for (long long b : {bound / 4, bound / 2, bound})
    if (b >= 27 && (bounds.empty() || b > bounds.back())) bounds.push_back(b);
  const auto trend = attractor::distance_trend(bounds, rho, nx, ny);

  Json summary;
  summary["bound"] = bound;
  summary["classes"] = sample.size();
  summary["mass"] = mass;
  summary["tv"] = stats.tv;
  summary["coverage"] = stats.coverage;
  summary["interpretation"] = rho.note;
  Json tr = Json::array();
  for (const auto& [b, s] : trend)
    tr.push_back(Json{{"bound", b}, {"classes", s.total}, {"tv", s.tv}, {"coverage", s.coverage}});
  summary["trend"] = tr;

  if (!plot_path.empty()) emit(attractor::plot_json(m, rho), plot_path);
  if (!out_path.empty()) {
    attractor::write_histogram_csv(out_path, m, rho);
    summary["out"] = out_path;
    emit(summary.dump(2), "");
  } else {
    // stdout carries the histogram itself; route it through a scratch file
    // so the format has a single source of truth
    const std::string tmp = "/tmp/attractor_hist_" + std::to_string(::getpid()) + ".csv";
    attractor::write_histogram_csv(tmp, m, rho);
    FILE* fp = std::fopen(tmp.c_str(), "r");
    if (!fp) throw attractor::numeric_error("cannot reopen " + tmp);
    std::string csv;
    char chunk[4096];
    size_t got;
    while ((got = std::fread(chunk, 1, sizeof chunk, fp)) > 0) csv.append(chunk, got);
    std::fclose(fp);
    std::remove(tmp.c_str());
    emit(csv, "");
  }
  return 0;
}

int cmd_check_axioms(const std::string& algebra, int count, std::uint64_t seed,
                     const std::string& out_path) {
  std::vector<std::pair<std::string, CubicNormStructure>> targets;
  auto add = [&](const std::string& n) { targets.emplace_back(n, make_model(n)); };
  if (algebra == "all") {
    for (const char* n : {"rank1", "stu", "hyperbolic", "herm3q", "herm3c", "herm3h", "herm3o"})
      add(n);
  } else if (algebra == "rational") {
    add("herm3q");
  } else if (algebra == "imagquad") {
    add("herm3c");
  } else if (algebra == "quaternion") {
    add("herm3h");
  } else if (algebra == "octonion") {
    add("herm3o");
  } else {
    add(algebra);  // direct model names accepted too
  }
  Json out;
  out["count"] = count;
  out["seed"] = seed;
  Json reports = Json::array();
  bool all_pass = true;
  for (const auto& [name, J] : targets) {
    const attractor::AxiomReport r = attractor::axiom_check(J, count, seed);
    all_pass = all_pass && r.all();
    Json jr{{"model", name},
            {"samples", r.samples},
            {"unit", r.pass[0]},
            {"adjoint", r.pass[1]},
            {"trace_pairing", r.pass[2]},
            {"norm_expansion", r.pass[3]}};
    if (!r.all()) jr["witness"] = r.witness;
    reports.push_back(jr);
  }
  out["reports"] = reports;
  out["all_pass"] = all_pass;
  emit(out.dump(2), out_path);
  return all_pass ? 0 : kExitCertificate;
}

int cmd_check_locus(const std::string& model, const std::string& charge_s, int samples,
                    std::uint64_t seed, double tol, const std::string& out_path) {
  const CubicNormStructure J = make_model(model);
  const ChargeVector g = parse_charge_vector(J, charge_s);
  for (const Rational& v : g.p)
    if (!v.is_zero())
      throw attractor::wrong_class_error("the locus family is (p0, 0, 0, q0): drop p components");
  for (const Rational& v : g.q)
    if (!v.is_zero())
      throw attractor::wrong_class_error("the locus family is (p0, 0, 0, q0): drop q components");
  const attractor::CriticalLocusReport r = attractor::critical_locus_check(
      J, g.p0.to_double(), g.q0.to_double(), samples, seed);
  const bool counts_ok = r.positive_count == J.n + 1 && r.near_zero_count == J.n - 1 &&
                         r.negative_count == 0;
  const bool pass = r.max_gradient < tol && counts_ok && r.max_near_zero_ratio < 1e-6;
  Json out{{"model", model},
           {"samples", r.samples},
           {"kappa", clean(r.kappa)},
           {"max_gradient", r.max_gradient},
           {"kappa_entry_rel", r.kappa_entry_rel},
           {"x_block_rel", r.x_block_rel},
           {"min_x_block_eig", r.min_x_block_eig},
           {"hessian_signature",
            Json{{"positive", r.positive_count},
                 {"near_zero", r.near_zero_count},
                 {"negative", r.negative_count},
                 {"max_near_zero_ratio", r.max_near_zero_ratio}}},
           {"tolerance", tol},
           {"pass", pass}};
  emit(out.dump(2), out_path);
  return pass ? 0 : kExitCertificate;
}

int cmd_check_5d(const std::string& model, const std::string& charge_s, double tol,
                 const std::string& out_path) {
  const CubicNormStructure J = make_model(model);
  attractor::FiveDCharge q;
  q.q = Eigen::VectorXd::Zero(J.n);
  for (const auto& [key, val] : parse_kv(charge_s)) {
    if (key.size() < 2 || key[0] != 'q')
      throw attractor::wrong_class_error("5d charges use keys q1..qn");
    int idx = 0;
    try {
      idx = std::stoi(key.substr(1));
    } catch (const std::exception&) {
      throw attractor::wrong_class_error("bad charge key " + key);
    }
    if (idx < 1 || idx > J.n)
      throw attractor::wrong_class_error("charge index out of range in " + key);
    q.q[idx - 1] = val.to_double();
  }
  const attractor::HypersurfacePoint h = attractor::solve_bps_5d(J, q, tol);
  Json out = Json::parse(attractor::five_d_json(J, q, h));
  bool pass = true;
  if (model == "stu" && q.q.minCoeff() > 0) {
    const double prod = std::cbrt(q.q[0] * q.q[1] * q.q[2]);
    double rel = 0;
    for (int i = 0; i < 3; ++i)
      rel = std::max(rel, std::abs(h.h[i] - prod / q.q[i]) / std::abs(prod / q.q[i]));
    out["closed_form_rel_error"] = rel;
    pass = rel < 1e-9;
  }
  out["pass"] = pass;
  emit(out.dump(2), out_path);
  return pass ? 0 : kExitCertificate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attractor: exact and numeric attractor points over cubic norm structures"};
  app.require_subcommand(1);

  std::string model = "t3", model_locus = "herm3q", model_5d = "stu";
  std::string form_s, charge_s, out_path, plot_path;
  std::string algebra = "all", sign_s = "neg", frame = "literal";
  long long bound = 1000;
  int nx = 24, ny = 16, count = 200, samples = 20, threads = 1;
  double tol = 0;
  std::uint64_t seed = 1;

  CLI::App* solve = app.add_subcommand("solve", "attractor point of a charge or cubic form");
  solve->add_option("--model", model, "t3|stu|hyperbolic|herm3q|herm3c|herm3h|herm3o");
  solve->add_option("--form", form_s, "binary cubic a,b,c,d (one-modulus model)");
  solve->add_option("--charge", charge_s, "p0=..,p1=..,q1=..,q0=.. (rationals allowed)");
  solve->add_option("--out", out_path, "write JSON here (atomic); default stdout");

  CLI::App* enumerate = app.add_subcommand("enumerate", "attractor-reduced form classes");
  enumerate->add_option("--bound", bound, "|disc| bound")->required();
  enumerate->add_option("--sign", sign_s, "neg (default) or pos discriminants");
  enumerate->add_option("--out", out_path, "CSV path; default prints CSV to stdout");

  CLI::App* distribution =
      app.add_subcommand("distribution", "histogram of negative-discriminant points vs the density");
  distribution->add_option("--bound", bound, "|disc| bound")->required();
  distribution->add_option("--nx", nx, "x bins (default 24)");
  distribution->add_option("--ny", ny, "log-spaced y bins (default 16)");
  distribution->add_option("--frame", frame, "density frame: literal (default) or rescaled");
  distribution->add_option("--out", out_path, "histogram CSV path; summary JSON then on stdout");
  distribution->add_option("--plot", plot_path, "optional plot-data JSON path");

  CLI::App* check = app.add_subcommand("check", "verification suites");
  check->require_subcommand(1);
  CLI::App* check_axioms = check->add_subcommand("axioms", "exact cubic norm axioms");
  check_axioms->add_option("--algebra", algebra,
                           "all|rational|imagquad|quaternion|octonion or a model name");
  check_axioms->add_option("--count", count, "samples per model (default 200)");
  check_axioms->add_option("--seed", seed, "RNG seed");
  check_axioms->add_option("--out", out_path, "write JSON here; default stdout");

  CLI::App* check_locus = check->add_subcommand("locus", "critical locus of the two-charge family");
  check_locus->add_option("--model", model_locus, "model (default herm3q)");
  check_locus->add_option("--charge", charge_s, "p0=..,q0=.. with q0/p0 > 0")->required();
  check_locus->add_option("--samples", samples, "locus sample count (default 20)");
  check_locus->add_option("--seed", seed, "RNG seed");
  check_locus->add_option("--tol", tol, "gradient tolerance (default 1e-7)");
  check_locus->add_option("--out", out_path, "write JSON here; default stdout");

  CLI::App* check_5d = check->add_subcommand("5d", "tangent-plane attractor solve");
  check_5d->add_option("--model", model_5d, "model (default stu)");
  check_5d->add_option("--charge", charge_s, "q1=..,q2=..,...")->required();
  check_5d->add_option("--tol", tol, "Newton residual tolerance (default 1e-12)");
  check_5d->add_option("--out", out_path, "write JSON here; default stdout");

  for (CLI::App* sub : {solve, enumerate, distribution, check_axioms, check_locus, check_5d})
    sub->add_option("--threads", threads, "accepted for config parity; kernels are single-threaded");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(model, form_s, charge_s, out_path);
    if (enumerate->parsed()) return cmd_enumerate(bound, sign_s, out_path);
    if (distribution->parsed())
      return cmd_distribution(bound, nx, ny, frame, out_path, plot_path);
    if (check_axioms->parsed()) return cmd_check_axioms(algebra, count, seed, out_path);
    if (check_locus->parsed())
      return cmd_check_locus(model_locus, charge_s, samples, seed, tol > 0 ? tol : 1e-7, out_path);
    if (check_5d->parsed())
      return cmd_check_5d(model_5d, charge_s, tol > 0 ? tol : 1e-12, out_path);
  } catch (const attractor::wrong_class_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const attractor::numeric_error& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}
