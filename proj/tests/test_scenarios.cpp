#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "halfspace/config.hpp"
#include "halfspace/quadrature.hpp"
#include "halfspace/report.hpp"
#include "halfspace/scenarios.hpp"

using namespace halfspace;

namespace {

// Independent oracle for the double mean of |log_+|x| - log_+|y||: for
// independent uniforms, E|X - Y| = 2 int F(s)(1 - F(s)) ds with F the CDF of
// log_+|U|; the inner measure has a closed form.
double H_cdf_oracle(double a, double b) {
  const double len = b - a;
  auto cdf = [&](double s) {
    // measure of {u in (a,b): |u| <= e^s} / len, s >= 0
    const double r = std::exp(s);
    const double lo = std::max(a, -r), hi = std::min(b, r);
    return std::max(0.0, hi - lo) / len;
  };
  const double smax = std::log(std::max({std::abs(a), std::abs(b), 1.0})) + 1e-12;
  if (smax <= 0.0) return 0.0;
  std::vector<double> cuts = {0.0, smax};
  for (double c : {std::abs(a), std::abs(b)}) {
    if (c > 1.0 && std::log(c) < smax) cuts.push_back(std::log(c));
  }
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    acc += integrate_panels([&](double s) { return cdf(s) * (1.0 - cdf(s)); }, cuts[i],
                            cuts[i + 1], 8, 32);
  }
  return 2.0 * acc;
}

const char* kConfigText = R"(
# sample configuration
seed = 7
out_dir = "OUTDIR"
n = 2
svg = true
scenarios = ["example6", "jn-bmo"]

[system]
kind = "laplacian"

[growth]
name = "example6"
alpha = 0.5
beta = 0.5

[datum]
name = "cos"

[sweep]
level_max = 5

[knobs]
example6_budget = 60
jn_levels = 12
jn_depth = 8
)";

}  // namespace

TEST_CASE("toml subset parsing") {
  auto t = parse_toml("a = 1.5\nname = \"x\" # comment\n[sec]\nflag = true\narr = [1, 2, 4]\nstrs = [\"p\", \"q\"]\n");
  CHECK(t.at("a").num() == 1.5);
  CHECK(t.at("name").str() == "x");
  CHECK(t.at("sec.flag").flag());
  CHECK(std::get<std::vector<double>>(t.at("sec.arr").v) == std::vector<double>{1, 2, 4});
  CHECK(std::get<std::vector<std::string>>(t.at("sec.strs").v) ==
        std::vector<std::string>{"p", "q"});
  CHECK_THROWS_AS(parse_toml("oops\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_toml("x = \n"), std::invalid_argument);

  auto cfg = config_from_toml(kConfigText);
  CHECK(cfg.seed == 7);
  CHECK(cfg.growth.name == "example6");
  CHECK(cfg.growth.params.at("alpha") == 0.5);
  CHECK(cfg.scenarios.size() == 2);
  CHECK(cfg.knobs.at("example6_budget") == 60);
  CHECK_FALSE(cfg.fingerprint.empty());
}

TEST_CASE("double-mean brute force against closed forms and the CDF identity") {
  // paper value at (1,2): 3 - 4 log 2, also equal to G(1)
  const double H12 = example6_H_bruteforce(1.0, 2.0);
  CHECK(H12 == doctest::Approx(3.0 - 4.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(H12 == doctest::Approx(0.227411).epsilon(1e-5));
  CHECK(example6_G(1.0) == doctest::Approx(H12).epsilon(1e-12));

  // zero on the flat region
  CHECK(example6_H_bruteforce(-0.5, 0.5) == 0.0);
  CHECK(example6_H_bruteforce(-1.0, 1.0) == 0.0);

  // the logarithmic-branch identity H(a,b) = G(a/(b-a)) for 1 <= a < b
  for (auto [a, b] : {std::pair{1.0, 2.0}, {2.0, 5.0}, {1.0, 1.5}, {3.0, 17.0}}) {
    CHECK(example6_H_bruteforce(a, b) ==
          doctest::Approx(example6_G(a / (b - a))).epsilon(1e-10));
  }

  // independent probabilistic oracle on mixed-sign intervals
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double len = std::pow(10.0, 3.0 * uni(rng) - 1.5);
    const double c = (2.0 * uni(rng) - 1.0) * std::pow(10.0, uni(rng));
    const double a = c - 0.5 * len, b = c + 0.5 * len;
    CHECK(example6_H_bruteforce(a, b) == doctest::Approx(H_cdf_oracle(a, b)).epsilon(1e-8));
  }
}

TEST_CASE("auxiliary profiles of the counterexample modulus") {
  CHECK(example6_G(0.0) == 1.0);
  // G decays at infinity, lambda^alpha G stays bounded
  CHECK(example6_G(1e6) < 1e-3);
  double sup = 0.0;
  for (int i = 0; i <= 300; ++i) {
    const double lam = std::pow(10.0, -3.0 + 6.0 * i / 300.0);
    sup = std::max(sup, std::pow(lam, 0.5) * example6_G(lam));
  }
  CHECK(std::isfinite(sup));
  CHECK(sup < 2.0);
  // Gtilde vanishes at 1+ and stays bounded on (1,2]
  CHECK(example6_Gtilde(1.0 + 1e-9, 0.5) < 1e-4);
  CHECK(example6_Gtilde(2.0, 0.5) < 1.0);

  CHECK(example6_W_closed(0.5, 0.5, std::exp(1.0)) ==
        doctest::Approx(11.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("counterexample scenario passes end to end") {
  auto res = scenario_example6(0.5, 0.5, 80, 7);
  CHECK(res.verdict == "PASS");
  REQUIRE(res.tables.size() >= 3);
  CHECK(res.tables[0].name == "H");
  CHECK(res.tables[1].name == "ratios");
}

TEST_CASE("john-nirenberg scenario (bmo) passes") {
  LabConfig cfg = config_from_toml(kConfigText);
  auto res = scenario_jn(cfg, "bmo");
  CHECK(res.verdict == "PASS");
}

TEST_CASE("john-nirenberg scenario (conical) passes") {
  LabConfig cfg = config_from_toml(kConfigText);
  cfg.growth.name = "power";
  cfg.growth.params = {{"alpha", 0.5}};
  cfg.datum.name = "sqrt-abs";
  cfg.knobs["jn_levels_conical"] = 6;
  cfg.knobs["jn_depth_conical"] = 3;
  auto res = scenario_jn(cfg, "conical");
  CHECK(res.verdict == "PASS");
}

TEST_CASE("fatou scenario on the half-plane laplacian") {
  LabConfig cfg = config_from_toml(kConfigText);
  cfg.datum.name = "cos";
  cfg.knobs["fatou_samples"] = 96;
  auto res = scenario_fatou(cfg);
  CHECK(res.verdict == "PASS");
  double resid = -1.0;
  for (const auto& [k, v] : res.notes) {
    if (k == "slice_residual") resid = std::stod(v);
  }
  CHECK(resid >= 0.0);
  CHECK(resid <= 1e-5);
}

TEST_CASE("holder dirichlet scenario") {
  LabConfig cfg = config_from_toml(kConfigText);
  cfg.growth.name = "power";
  cfg.growth.params = {{"alpha", 0.5}};
  cfg.datum.name = "sqrt-abs";
  cfg.knobs["dirichlet_pairs"] = 200;
  auto res = scenario_dirichlet(cfg, "holder");
  CHECK(res.verdict == "PASS");

  // degenerate constant datum
  cfg.datum.name = "constant";
  cfg.datum.param = 2.0;
  auto resc = scenario_dirichlet(cfg, "holder");
  CHECK(resc.verdict == "PASS-degenerate");

  // the piecewise power-log modulus satisfies (a) and (b): the run proceeds
  LabConfig e6 = cfg;
  e6.datum.name = "sqrt-abs";
  e6.growth.name = "example6";
  e6.growth.params = {{"alpha", 0.5}, {"beta", 0.5}};
  auto resf = scenario_dirichlet(e6, "holder");
  CHECK((resf.verdict == "PASS" || resf.verdict == "PASS-degenerate"));
}

TEST_CASE("equivalence scenario with the square-root modulus") {
  LabConfig cfg = config_from_toml(kConfigText);
  cfg.growth.name = "power";
  cfg.growth.params = {{"alpha", 0.5}};
  cfg.knobs["pairs"] = 2500;
  auto res = scenario_equivalence(cfg);
  CHECK(res.verdict == "PASS");
  REQUIRE(!res.tables.empty());
  CHECK(res.tables[0].rows.size() == 5);  // five catalog solutions
}

TEST_CASE("reports are deterministic and land in the expected files") {
  namespace fs = std::filesystem;
  const std::string dir1 = "/tmp/halfspace_report_a";
  const std::string dir2 = "/tmp/halfspace_report_b";
  fs::remove_all(dir1);
  fs::remove_all(dir2);

  LabConfig cfg = config_from_toml(kConfigText);
  cfg.knobs["example6_budget"] = 40;
  cfg.knobs["jn_levels"] = 10;
  cfg.knobs["jn_depth"] = 6;
  cfg.scenarios = {"example6", "jn-bmo"};

  auto run_into = [&](const std::string& dir) {
    auto results = run_scenarios(cfg);
    auto manifest = make_manifest(cfg);
    emit_report(manifest, results, dir, true);
  };
  run_into(dir1);
  run_into(dir2);

  for (const char* f : {"example6_H.csv", "example6_ratios.csv", "example6_W.csv",
                        "jn-bmo_xi.csv", "manifest.json", "jn-bmo_xi_decay.svg"}) {
    CAPTURE(f);
    CHECK(fs::exists(fs::path(dir1) / f));
  }
  for (const char* f : {"example6_H.csv", "example6_ratios.csv", "jn-bmo_xi.csv",
                        "jn-bmo_xi_decay.svg"}) {
    std::ifstream a(fs::path(dir1) / f), b(fs::path(dir2) / f);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CAPTURE(f);
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());
  }
}
