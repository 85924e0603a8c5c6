#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "halfspace/config.hpp"
#include "halfspace/report.hpp"

namespace halfspace {

// Double-mean |log_+|x| - log_+|y|| over [a,b]^2 by tensor Gauss panels split
// at the breakpoints of log_+|.| (the overlap diagonal is handled by an
// iterated rule with a closed-form inner antiderivative).
double example6_H_bruteforce(double a, double b);

// closed forms attached to the counterexample modulus
double example6_G(double lambda);
double example6_Gtilde(double lambda, double alpha);
double example6_W_closed(double alpha, double beta, double t);
// |f(x1 e1) - f(e1)| / w(x1 - 1) for f = log_+ |x1|
double example6_holder_ratio(double alpha, double beta, double x1);

ScenarioResult scenario_dirichlet(const LabConfig& cfg, const std::string& kind);
ScenarioResult scenario_equivalence(const LabConfig& cfg);
ScenarioResult scenario_fatou(const LabConfig& cfg);
ScenarioResult scenario_example6(double alpha, double beta, int sample_budget,
                                 std::uint64_t seed);
ScenarioResult scenario_jn(const LabConfig& cfg, const std::string& variant);

// Dispatch by scenario name: dirichlet-holder, dirichlet-morrey, equivalence,
// fatou, example6, jn-bmo, jn-conical.
std::vector<ScenarioResult> run_scenarios(const LabConfig& cfg);

RunManifest make_manifest(const LabConfig& cfg);
std::string lab_version();

}  // namespace halfspace
