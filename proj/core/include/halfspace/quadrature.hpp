#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace halfspace {

// Gauss-Legendre rule on [-1,1]. Nodes/weights computed once per order by
// Newton iteration on the Legendre recurrence and cached.
struct GaussRule {
  std::vector<double> node;
  std::vector<double> weight;
};

const GaussRule& gauss_rule(int order);

// Sum with a fixed pairwise (balanced binary) tree. The summation order does
// not depend on how the values were produced, which keeps composite
// quadratures bitwise reproducible under reordering of panel evaluation.
double pairwise_sum(std::span<const double> v);

// Composite Gauss-Legendre over [a,b] split into `panels` equal panels.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int order = 32);

// Adaptive bisection on [a,b]: split panels until the two-level estimate
// agrees to abstol. Intended for mildly oscillatory smooth integrands.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abstol, int order = 16, int max_depth = 24);

// tanh-sinh rule: spectrally accurate even when f has an integrable endpoint
// singularity or a fractional-power kink at a or b. f must be finite on the
// closed interval.
double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double rtol = 1e-13, int max_level = 10);

// Integrate [a,b] split at the listed breakpoints; pieces whose endpoint sits
// on a breakpoint use the tanh-sinh rule, smooth pieces a single Gauss panel.
double integrate_with_breakpoints(const std::function<double(double)>& f, double a,
                                  double b, std::span<const double> breakpoints,
                                  int order = 32);

// Thrown when an improper integral fails the dyadic Cauchy test.
struct divergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Improper integrals by octave doubling with geometric tail extrapolation.
//
// octave_integral_down:  sum_k  I_k,  I_k = integral of f over [c 2^{-k-1}, c 2^{-k})
// octave_integral_up:    sum_k  J_k,  J_k = integral of f over [c 2^{k}, c 2^{k+1})
//
// Both stop once the octave increments decay geometrically and the
// extrapolated remainder c*r/(1-r) drops below rtol * |total|; they throw
// divergence_error after max_octaves octaves without convergence.
struct OctaveResult {
  double value = 0.0;
  double tail_estimate = 0.0;  // extrapolated remainder added into value
  int octaves = 0;
};

// `breakpoints` lists interior points where the integrand loses smoothness;
// any octave straddling one is split there before applying the panel rule.
OctaveResult octave_integral_down(const std::function<double(double)>& f, double c,
                                  double rtol = 1e-12, int max_octaves = 60,
                                  int order = 32,
                                  std::span<const double> breakpoints = {});
OctaveResult octave_integral_up(const std::function<double(double)>& f, double c,
                                double rtol = 1e-12, int max_octaves = 60,
                                int order = 32,
                                std::span<const double> breakpoints = {});

}  // namespace halfspace
