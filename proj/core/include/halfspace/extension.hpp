#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "halfspace/growth.hpp"
#include "halfspace/poisson.hpp"
#include "halfspace/report.hpp"

namespace halfspace {

// Boundary datum given by an analytic callback together with a declared
// modulus-of-continuity bound |f(x)-f(y)| <= A * modulus(|x-y|). The optional
// second-difference bound |f(x+h)+f(x-h)-2f(x)| <= A2 * second_modulus(|h|)
// sharpens truncation estimates for data with symmetric cancellation
// (linear data has A2 = 0).
struct BoundaryDatum {
  int dim = 1;  // n-1
  int M = 1;
  std::function<VecC(std::span<const double>)> eval;
  GrowthFunction modulus;
  double modulus_constant = 1.0;
  std::optional<GrowthFunction> second_modulus;
  double second_modulus_constant = -1.0;  // <0: default 2*modulus_constant
  std::string label;

  VecC operator()(std::span<const double> x) const { return eval(x); }
};

// Spot-check of the declared modulus bound on random pairs; returns the worst
// ratio |f(x)-f(y)| / (A * modulus(|x-y|)), which must stay below the slack.
double modulus_spot_check(const BoundaryDatum& f, int pairs = 10000,
                          std::uint64_t seed = 0xda7a, double box = 64.0);

struct ConeSpec {
  std::vector<double> vertex;
  double aperture = 1.0;
};

struct inadmissible_datum_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExtendResult {
  VecC value;
  double budget = 0.0;  // truncation + normalization error bound
  double radius = 0.0;  // truncation radius in the unit-height variable
  int shells = 0;
};

ExtendResult extend_point(const PoissonKernel& K, const BoundaryDatum& f,
                          std::span<const double> x, double t, double tol = 1e-6);

struct HalfSpacePoint {
  std::vector<double> x;
  double t = 1.0;
};

std::vector<ExtendResult> extend(const PoissonKernel& K, const BoundaryDatum& f,
                                 std::span<const HalfSpacePoint> points,
                                 double tol = 1e-6);

struct GradientResult {
  // rows: the n-1 tangential derivatives then the vertical one; columns: the
  // M components
  MatC grad;
  double budget = 0.0;
  double fd_discrepancy = -1.0;  // set when the finite-difference check ran
};

GradientResult gradient_point(const PoissonKernel& K, const BoundaryDatum& f,
                              std::span<const double> x, double t, double tol = 1e-5,
                              bool fd_check = false);

std::vector<GradientResult> gradient(const PoissonKernel& K, const BoundaryDatum& f,
                                     std::span<const HalfSpacePoint> points,
                                     double tol = 1e-5, int fd_check_points = 2);

// Gradient field callback: (x', t) -> n x M matrix of partial derivatives.
using GradField = std::function<MatC(std::span<const double>, double)>;

// V(x; l) = ( int_0^l |grad u(x,t)|^2 t dt )^{1/2}, log-spaced panels on
// (1e-6 l, l).
double vertical_square(const GradField& grad, std::span<const double> x, double ell,
                       int dim, int M);

// A(x; l, kappa) = ( int_0^l int_{|x-y|<kappa s} |grad u(y,s) s|^2 dy ds/s^n )^{1/2}
double conical_square(const GradField& grad, const ConeSpec& cone, double ell, int M);

struct TraceReport {
  std::vector<double> heights;
  std::vector<double> errors;  // |u(cone point) - f(x)|
  bool converged = false;      // eventually decreasing and below tol
};

TraceReport trace_probe(const PoissonKernel& K, const BoundaryDatum& f,
                        std::span<const double> x, double aperture,
                        std::span<const double> heights, double tol = 1e-3,
                        double quad_tol = 1e-7);

// batch results as CSV rows: coordinates, height, Re/Im components, budget
CsvTable extension_table(std::span<const HalfSpacePoint> points,
                         std::span<const ExtendResult> results);

// grad-of-extension convenience wrapper with per-field quadrature tolerance.
GradField extension_grad_field(const PoissonKernel& K, const BoundaryDatum& f,
                               double tol = 1e-5);

}  // namespace halfspace
