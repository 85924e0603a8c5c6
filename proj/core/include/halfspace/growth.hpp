#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>
#include <utility>

namespace halfspace {

// A modulus of growth: positive, non-decreasing on (0,inf), vanishing at 0.
// Always supplied as an analytic callback, never as sampled data.
struct GrowthFunction {
  std::function<double(double)> eval;
  std::string label;
  std::map<std::string, double> params;
  // interior scales where the callback loses smoothness (quadrature panels
  // are split there); all builtin log/min/max moduli break at t = 1
  std::vector<double> breakpoints;

  double operator()(double t) const { return eval(t); }
};

// Builtin moduli. Names: power, power-logplus, power-loginv, min-powers,
// max-powers, example6. Exponent parameters must lie in (0,1); theta is any
// real and the additive log offset A is derived from it.
GrowthFunction catalog_growth(const std::string& name,
                              const std::map<std::string, double>& params);

// W(t) = integral_0^t w(s) ds/s, by octave quadrature in log s with geometric
// tail extrapolation at the lower end. Throws divergence_error when the
// increments fail to contract (integrability condition "a" violated).
double w_transform(const GrowthFunction& w, double t, double rtol = 1e-10);

// W as a growth function in its own right, backed by a cumulative octave
// table over [2^-61, 2^61] with monotone log-log interpolation. Cheap enough
// to feed back into the condition estimators.
GrowthFunction w_transform_function(const GrowthFunction& w, double rtol = 1e-10);

struct ConditionReport {
  std::string label;
  std::string condition;  // "a", "b" or "main"
  bool satisfied = false;
  // Estimated best constant over the scan grid (a lower bound of the true
  // sup); +inf sentinel when the defining integral diverges.
  double constant = std::numeric_limits<double>::infinity();
  double witness_t = std::numeric_limits<double>::quiet_NaN();
  std::string grid;
};

struct GridSpec {
  double lo = std::ldexp(1.0, -20);
  double hi = std::ldexp(1.0, 20);
  int fixed_points = 4096;
  int random_points = 4096;
  std::uint64_t seed = 0x5eed5eedULL;
};

// Tail condition: t * integral_t^inf w(s)/s^2 ds <= C * w(t).
ConditionReport check_condition_b(const GrowthFunction& w, const GridSpec& grid = GridSpec());

struct MainConditionReport {
  ConditionReport report;      // condition "main", constant = estimated C0
  double c_prime = std::numeric_limits<double>::infinity();  // sup W/w
  bool w_side_bounded = false;     // W(t) <= C w(t) side
  bool tail_side_bounded = false;  // t*tail integral side (condition b)
};

// Balanced condition: W(t) + t * integral_t^inf w(s)/s^2 ds <= C0 * w(t).
// Also reports the sub-constant sup W/w.
MainConditionReport check_condition_main(const GrowthFunction& w, const GridSpec& grid = GridSpec());

struct DilationIndices {
  double lower = 0.0;
  double upper = 0.0;
};

DilationIndices dilation_indices(const GrowthFunction& w);

struct QuasiPropertiesReport {
  bool ratio_monotone_ok = false;  // w(t2)/t2 <= C_b w(t1)/t1
  bool doubling_ok = false;        // w(2t) <= 2 C_b w(t)
  bool limit_ok = false;           // w(t)/t decreasing to 0 along t = 2^k
  double max_violation_ratio = 0.0;  // worst LHS/RHS over the two bound checks
  bool consistent = false;           // all checks within 1 + tol
};

QuasiPropertiesReport quasi_properties_report(const GrowthFunction& w, double c_b,
                                              int pairs = 10000,
                                              std::uint64_t seed = 0x9e3779b9ULL,
                                              double tol = 1e-9);

}  // namespace halfspace
