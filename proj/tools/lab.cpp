// lab: configuration-driven scenario runner for the half-space Dirichlet
// laboratory. See README.md for the configuration schema.

#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "halfspace/config.hpp"
#include "halfspace/growth.hpp"
#include "halfspace/quadrature.hpp"
#include "halfspace/report.hpp"
#include "halfspace/scenarios.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override) {
  halfspace::LabConfig cfg = halfspace::load_config(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (cfg.scenarios.empty()) {
    std::fprintf(stderr, "warning: no scenarios listed; writing the manifest only\n");
  }
  auto results = halfspace::run_scenarios(cfg);
  auto manifest = halfspace::make_manifest(cfg);
  halfspace::emit_report(manifest, results, cfg.out_dir, cfg.svg);
  bool all_ok = true;
  for (const auto& r : results) {
    std::printf("[%s] %s (%.2fs)\n", r.verdict.c_str(), r.name.c_str(), r.wall_seconds);
    if (r.verdict == "FAIL") all_ok = false;
  }
  std::printf("report written to %s\n", cfg.out_dir.c_str());
  return all_ok ? 0 : 1;
}

int cmd_list_catalog() {
  std::printf("growth functions:\n");
  for (const char* n : {"power(alpha)", "power-logplus(alpha,theta)",
                        "power-loginv(alpha,theta)", "min-powers(alpha,beta)",
                        "max-powers(alpha,beta)", "example6(alpha,beta)"}) {
    std::printf("  %s\n", n);
  }
  std::printf("boundary data:\n");
  for (const char* n : {"constant(c)", "linear", "cos", "cos2", "sqrt-abs", "bump",
                        "arctan", "logplus-abs", "cos-vector"}) {
    std::printf("  %s\n", n);
  }
  std::printf("systems:\n");
  for (const char* n : {"laplacian", "lame(mu,lambda)", "scalar-divA(tensor)",
                        "tensor(coefficients)"}) {
    std::printf("  %s\n", n);
  }
  std::printf("scenarios:\n");
  for (const char* n : {"dirichlet-holder", "dirichlet-morrey", "equivalence", "fatou",
                        "example6", "jn-bmo", "jn-conical"}) {
    std::printf("  %s\n", n);
  }
  return 0;
}

int cmd_check_growth(const std::string& name, const std::map<std::string, double>& params) {
  using namespace halfspace;
  GrowthFunction w = catalog_growth(name, params);
  std::printf("label,condition,satisfied,constant,witness_t\n");

  bool cond_a = true;
  try {
    (void)w_transform(w, 1.0);
  } catch (const divergence_error&) {
    cond_a = false;
  }
  std::printf("%s,a,%s,,\n", w.label.c_str(), cond_a ? "true" : "false");

  const auto repb = check_condition_b(w);
  std::printf("%s,b,%s,%s,%s\n", w.label.c_str(), repb.satisfied ? "true" : "false",
              format_double(repb.constant).c_str(), format_double(repb.witness_t).c_str());

  const auto repm = check_condition_main(w);
  std::printf("%s,main,%s,%s,%s\n", w.label.c_str(),
              repm.report.satisfied ? "true" : "false",
              format_double(repm.report.constant).c_str(),
              format_double(repm.report.witness_t).c_str());
  std::printf("%s,second,%s,%s,\n", w.label.c_str(),
              repm.w_side_bounded ? "true" : "false",
              format_double(repm.c_prime).c_str());

  const auto idx = dilation_indices(w);
  std::printf("# dilation indices: lower=%s upper=%s\n",
              format_double(idx.lower).c_str(), format_double(idx.upper).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"half-space Dirichlet laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* run = app.add_subcommand("run", "run the scenarios from a TOML config");
  run->add_option("config", config_path, "path to config.toml")->required();
  run->add_option("--out", out_dir, "override the output directory");

  auto* list = app.add_subcommand("list-catalog", "print builtin catalogs");

  std::string gname;
  double alpha = 0.5, beta = 0.5, theta = 0.0;
  bool has_beta = false, has_theta = false;
  auto* chk = app.add_subcommand("check-growth", "estimate growth-function conditions");
  chk->add_option("name", gname, "catalog name")->required();
  chk->add_option("--alpha", alpha, "power exponent");
  chk->add_option("--beta", beta, "second exponent")->trigger_on_parse();
  chk->add_option("--theta", theta, "log exponent")->trigger_on_parse();

  CLI11_PARSE(app, argc, argv);
  has_beta = chk->count("--beta") > 0;
  has_theta = chk->count("--theta") > 0;

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (list->parsed()) return cmd_list_catalog();
    if (chk->parsed()) {
      std::map<std::string, double> params{{"alpha", alpha}};
      if (has_beta) params["beta"] = beta;
      if (has_theta) params["theta"] = theta;
      return cmd_check_growth(gname, params);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
