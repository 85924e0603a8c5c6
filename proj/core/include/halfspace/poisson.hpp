#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "halfspace/elliptic.hpp"
#include "halfspace/report.hpp"

namespace halfspace {

// Spectral construction failures (degenerate pencil, singular boundary map,
// insufficient lattice extent). The message carries the offending frequency.
struct spectral_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed-form unit-height Laplacian kernel profile on R^{n-1}, n in {2,3}:
// Gamma(n/2) / pi^{n/2} * (1+|x|^2)^{-n/2}.
double laplacian_kernel(int n, std::span<const double> x);

// Fourier symbol of the kernel at tangential frequency xi' and height t,
// built from the stable invariant subspace of the companion linearization of
// the symbol pencil (ordered Schur form). By normalization the value at
// xi' = 0 is defined to be the identity; so is the value at t = 0.
MatC spectral_symbol(const EllipticSystem& L, std::span<const double> xi, double t);

// Number of pencil eigenvalues with positive/negative imaginary part.
std::pair<int, int> stable_unstable_count(const EllipticSystem& L,
                                          std::span<const double> xi);

// max over the supplied frequencies of || P(.,s) P(.,t) - P(.,s+t) ||.
double semigroup_residual(const EllipticSystem& L,
                          std::span<const std::vector<double>> xis, double s, double t);

class PoissonKernel {
 public:
  enum class Mode { closed_form, spectral };

  static PoissonKernel closed_form_laplacian(int n);
  static PoissonKernel spectral(const EllipticSystem& L);

  int n() const;
  int M() const;
  Mode mode() const;
  const EllipticSystem& system() const;

  // Unit-height profile P(z) and its spatial gradient. Spectral pointwise
  // profiles are available for n = 2 (frequency quadrature with a fitted
  // inverse-power far-field model); n = 3 pointwise evaluation is closed-form
  // only.
  MatC profile(std::span<const double> z) const;
  std::vector<MatC> profile_grad(std::span<const double> z) const;
  bool has_pointwise_profile() const;

  MatC symbol(std::span<const double> xi, double t) const;

  // Entry-wise bound constant of the fitted far field C (1+|z|^2)^{-n/2}.
  double decay_constant() const;
  // Measured max-norm defect of (integral of P) - I; cached after the first
  // normalization run.
  double normalization_defect() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// Spatial kernel samples obtained by an inverse DFT of the symbol on a
// padded uniform frequency lattice.
struct FrequencyLattice {
  int size = 4096;      // frequency samples per axis (even)
  double extent = 48.0; // lattice covers [-extent, extent)
};

struct KernelGrid {
  int n = 2;
  double t = 1.0;
  int count = 0;     // spatial samples per axis
  double dx = 0.0;
  double x0 = 0.0;   // coordinate of sample 0 (spatial lattice is x0 + i*dx)
  std::vector<MatC> values;  // row-major; index = ix (+ iy*count for n=3)
  double rim_max = 0.0;            // max |symbol| on the frequency rim
  double periodization_scale = 0.0;  // spatial period of the DFT images

  const MatC& at(int ix) const { return values[ix]; }
  const MatC& at(int ix, int iy) const { return values[ix + static_cast<std::size_t>(count) * iy]; }
  double coord(int i) const { return x0 + i * dx; }
};

// padding zero-extends the frequency lattice by the given factor, refining
// the spatial sampling without changing the spatial period. Throws
// spectral_error when the symbol has not decayed below 1e-8 on the rim.
KernelGrid kernel_grid(const PoissonKernel& K, double t, const FrequencyLattice& grid,
                       int padding = 1);

struct KernelDiagnostics {
  std::vector<double> heights;
  std::vector<double> normalization_defect;  // per height
  double decay_exponent = 0.0;  // fitted slope of log|K| vs log(1+|x|^2) at t=1
  double decay_constant = 0.0;
  double pde_residual_sup = 0.0;      // |L K| on the probe box, 4th order stencils
  double pde_residual_scaling = 0.0;  // residual(h) / residual(h/2)
  bool pointwise_checked = false;
};

KernelDiagnostics kernel_diagnostics(const PoissonKernel& K,
                                     std::span<const double> t_list,
                                     double stencil_h = 1.0 / 256.0);

// external interfaces: spatial samples as CSV rows (coordinates, height,
// Re/Im entries) and diagnostics as a JSON object keyed by the system label
CsvTable kernel_grid_table(const KernelGrid& grid, int stride = 1);
std::string kernel_diagnostics_json(const std::string& label, const KernelDiagnostics& d);

}  // namespace halfspace
