#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace halfspace {

using Cplx = std::complex<double>;

// Fixed-capacity dynamic matrices: system blocks are at most 4x4 and the
// companion linearization at most 8x8, so everything lives on the stack.
using MatC = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;
using VecC = Eigen::Matrix<Cplx, Eigen::Dynamic, 1, 0, 8, 1>;

// Homogeneous constant-coefficient second-order MxM system, stored as the
// full coefficient tensor a[j][k][alpha][beta] with no symmetrization.
struct EllipticSystem {
  int n = 0;
  int M = 0;
  std::vector<Cplx> coeff;
  std::string label;

  Cplx a(int j, int k, int al, int be) const {
    return coeff[((static_cast<std::size_t>(j) * n + k) * M + al) * M + be];
  }
  Cplx& a(int j, int k, int al, int be) {
    return coeff[((static_cast<std::size_t>(j) * n + k) * M + al) * M + be];
  }
};

EllipticSystem make_system(int n, int M, std::span<const Cplx> coeff,
                           std::string label = "tensor");
EllipticSystem make_laplacian(int n);
// scalar operator div A grad with an n x n complex matrix A
EllipticSystem make_scalar_diva(int n, const MatC& A);

struct LameResult {
  EllipticSystem system;
  bool admissible = false;  // Re mu > 0 and Re(2 mu + lambda) > 0
};

LameResult make_lame(int n, Cplx mu, Cplx lambda);

// Minimum of Re[a_{jk}^{ab} xi_j xi_k conj(zeta_a) zeta_b] over the real unit
// sphere in xi and the complex unit sphere in zeta: low-discrepancy sampling
// plus coordinate-descent refinement. The returned value is a lower bound of
// kappa_0; a non-positive value signals failure of strong ellipticity.
double ellipticity_constant(const EllipticSystem& L, int samples = 200000,
                            bool refine = true, std::uint64_t seed = 1);

// Quadratic pencil in the normal frequency: full symbol at tangential
// frequency xi' is A2 tau^2 + A1 tau + A0.
struct SymbolPencil {
  MatC A0, A1, A2;
};

SymbolPencil symbol_pencil(const EllipticSystem& L, std::span<const double> xi);

// Roots tau of det(A2 tau^2 + A1 tau + A0) via the companion eigenproblem.
std::vector<Cplx> pencil_roots(const EllipticSystem& L, std::span<const double> xi);

}  // namespace halfspace
