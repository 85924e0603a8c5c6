#pragma once

#include <array>
#include <string>
#include <vector>

#include "halfspace/extension.hpp"

namespace halfspace {

// Boundary data used across tests and scenarios. Names:
//   constant(c)      f = c
//   linear           f = x1
//   cos              f = cos x1
//   cos2             f = cos 2x1
//   sqrt-abs         f = |x1|^{1/2}
//   bump             f = (1/pi) (1+x1^2)^{-1}
//   arctan           f = atan2(1, x1)
//   logplus-abs      f = log_+ |x1|   (dim 1 or 2)
//   cos-vector       f = (cos x1, 0)  (M = 2)
// All declare a verified modulus bound, and a second-difference bound where
// it sharpens truncation (linear data cancels exactly).
BoundaryDatum catalog_datum(const std::string& name, double param = 0.0, int dim = 1);

// Closed-form harmonic functions in the upper half-plane (n = 2) with their
// gradients and boundary traces; the workhorse catalog for seminorm and
// equivalence runs where quadrature-backed extensions would be wasteful.
struct HarmonicExtension {
  std::string label;
  std::function<double(double, double)> u;                  // u(x, t)
  std::function<std::array<double, 2>(double, double)> du;  // (u_x, u_t)
  std::string datum_name;  // catalog_datum name of the trace
};

std::vector<HarmonicExtension> harmonic_catalog();

GradField harmonic_grad_field(const HarmonicExtension& h);

// u as a half-space callback (x, t) -> VecC, for Holder sweeps
std::function<VecC(std::span<const double>, double)> harmonic_field(
    const HarmonicExtension& h);

}  // namespace halfspace
