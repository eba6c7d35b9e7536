#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
  int rc = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(ATTRACTOR_BIN) + " " + args + " 2>/dev/null";
  FILE* fp = popen(cmd.c_str(), "r");
  REQUIRE(fp != nullptr);
  RunResult r;
  char chunk[4096];
  size_t got;
  while ((got = fread(chunk, 1, sizeof chunk, fp)) > 0) r.out.append(chunk, got);
  const int status = pclose(fp);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("solve on the one-modulus examples") {
  const RunResult neg = run("solve --model t3 --form 1,0,0,1");
  REQUIRE(neg.rc == 0);
  const auto jn = nlohmann::json::parse(neg.out);
  CHECK(jn["class"] == "nonBPS");
  CHECK(jn["tau"]["x"] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(jn["tau"]["y"] == doctest::Approx(1.0).epsilon(1e-12));

  const RunResult pos = run("solve --model t3 --form 0,1,0,-1");
  REQUIRE(pos.rc == 0);
  const auto jp = nlohmann::json::parse(pos.out);
  CHECK(jp["class"] == "BPS");
  CHECK(jp["cm"]["field_disc"] == "-3");
  CHECK(jp["cm"]["attractor_equations_exact"] == true);
  CHECK(jp["cm"]["field_is_imaginary_quadratic"] == true);
  CHECK(jp["verified"] == true);

  // same class as x^3 - x written in the other coefficient order
  const RunResult alt = run("solve --model t3 --form 1,0,-1,0");
  REQUIRE(alt.rc == 0);
  CHECK(nlohmann::json::parse(alt.out)["cm"]["field_disc"] == "-3");
}

TEST_CASE("solve on a higher-rank charge") {
  const RunResult bps = run("solve --model herm3q --charge p1=1,p2=1,p3=1,q0=1");
  REQUIRE(bps.rc == 0);
  const auto j = nlohmann::json::parse(bps.out);
  CHECK(j["class"] == "BPS");
  CHECK(j["quartic"] == "4");
  CHECK(j["verified"] == true);
  CHECK(j["cm"]["attractor_equations_exact"] == true);

  // vector-free charge with negative quartic: the critical locus description
  const RunResult locus = run("solve --model herm3q --charge p0=1,q0=2");
  REQUIRE(locus.rc == 0);
  const auto jl = nlohmann::json::parse(locus.out);
  CHECK(jl["class"] == "nonBPS");
  CHECK(jl["quartic"] == "-4");
  CHECK(jl["locus"]["kappa"] == doctest::Approx(12.0).epsilon(1e-14));
  CHECK(jl["locus"]["dimension"] == 5);
}

TEST_CASE("check subcommands pass on their reference inputs") {
  const RunResult ax = run("check axioms --algebra octonion --count 30");
  REQUIRE(ax.rc == 0);
  const auto ja = nlohmann::json::parse(ax.out);
  CHECK(ja["all_pass"] == true);
  CHECK(ja["reports"][0]["model"] == "herm3o");

  const RunResult locus = run("check locus --model herm3q --charge p0=1,q0=2 --samples 5");
  REQUIRE(locus.rc == 0);
  const auto jl = nlohmann::json::parse(locus.out);
  CHECK(jl["pass"] == true);
  CHECK(jl["max_gradient"].get<double>() < 1e-7);
  CHECK(jl["hessian_signature"]["positive"] == 7);
  CHECK(jl["hessian_signature"]["near_zero"] == 5);
  CHECK(jl["hessian_signature"]["negative"] == 0);

  const RunResult fd = run("check 5d --charge q1=1,q2=8,q3=27");
  REQUIRE(fd.rc == 0);
  const auto jf = nlohmann::json::parse(fd.out);
  CHECK(jf["pass"] == true);
  CHECK(jf["closed_form_rel_error"].get<double>() < 1e-9);
  CHECK(jf["tangent_residual"].get<double>() < 1e-9);
}

TEST_CASE("exit codes") {
  CHECK(run("solve --form 1,1").rc == 2);                    // malformed form
  CHECK(run("solve --form 1,0,0,1 --charge p0=1").rc == 2);  // both selectors
  CHECK(run("solve").rc == 2);                               // neither selector
  CHECK(run("solve --model bogus --charge p0=1").rc == 2);   // unknown model
  CHECK(run("solve --form 0,0,1,0").rc == 3);                // discriminant zero
  CHECK(run("bogus").rc == 2);                               // unknown command
  CHECK(run("enumerate").rc == 2);                           // missing --bound
  CHECK(run("check locus --charge p0=1,q0=-1").rc == 2);     // wrong cone side
  CHECK(run("check locus --charge p0=1,q0=2 --samples 3 --tol 1e-30").rc == 4);
  CHECK(run("check 5d --charge q1=1,q2=-1,q3=1").rc == 3);   // no cone solution
  CHECK(run("--help").rc == 0);
}

TEST_CASE("enumerate writes the class table") {
  const std::string csv = "/tmp/attractor_cli_classes.csv";
  const RunResult r = run("enumerate --bound 27 --out " + csv);
  REQUIRE(r.rc == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["classes"].get<int>() >= 2);
  const std::string body = slurp(csv);
  CHECK(body.rfind("a,b,c,d,disc,x,y,class", 0) == 0);
  std::remove(csv.c_str());

  // stdout mode carries the same header
  const RunResult direct = run("enumerate --bound 27");
  REQUIRE(direct.rc == 0);
  CHECK(direct.out.rfind("a,b,c,d,disc,x,y,class", 0) == 0);
}

TEST_CASE("distribution run is deterministic byte for byte") {
  const std::string c1 = "/tmp/attractor_cli_h1.csv", p1 = "/tmp/attractor_cli_h1.json";
  const std::string cmd =
      "distribution --bound 120 --nx 8 --ny 6 --out " + c1 + " --plot " + p1;
  const RunResult r1 = run(cmd);
  const std::string csv_first = slurp(c1), plot_first = slurp(p1);
  const RunResult r2 = run(cmd);
  REQUIRE(r1.rc == 0);
  REQUIRE(r2.rc == 0);
  CHECK(r1.out == r2.out);
  CHECK(csv_first == slurp(c1));
  CHECK(plot_first == slurp(p1));

  const auto j = nlohmann::json::parse(r1.out);
  CHECK(std::abs(j["mass"].get<double>() - 1.0) <= 1e-12);
  CHECK(j["trend"].size() >= 2);
  CHECK(j["interpretation"].is_string());

  // the CSV counts add up to the class count
  std::istringstream in(slurp(c1));
  std::string line;
  std::getline(in, line);
  long long total = 0;
  while (std::getline(in, line)) {
    const auto a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
    total += std::stoll(line.substr(b + 1, c - b - 1));
  }
  CHECK(total == j["classes"].get<long long>());
  for (const std::string& f : {c1, p1}) std::remove(f.c_str());
}
