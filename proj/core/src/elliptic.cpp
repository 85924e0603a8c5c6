#include "halfspace/elliptic.hpp"

#include <cmath>
#include <stdexcept>

namespace halfspace {

namespace {

void validate_dims(int n, int M) {
  if (n < 2 || n > 4) throw std::invalid_argument("elliptic: ambient dimension must be 2..4");
  if (M < 1 || M > 4) throw std::invalid_argument("elliptic: system size must be 1..4");
}

// Halton low-discrepancy sequence, one prime base per coordinate.
double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

constexpr int kPrimes[12] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double form_value(const EllipticSystem& L, std::span<const double> xi,
                  std::span<const Cplx> zeta) {
  Cplx acc = 0.0;
  for (int j = 0; j < L.n; ++j) {
    for (int k = 0; k < L.n; ++k) {
      const double xx = xi[j] * xi[k];
      if (xx == 0.0) continue;
      for (int al = 0; al < L.M; ++al) {
        for (int be = 0; be < L.M; ++be) {
          acc += L.a(j, k, al, be) * xx * std::conj(zeta[al]) * zeta[be];
        }
      }
    }
  }
  return acc.real();
}

// Normalized form on ambient parameters (xi in R^n, zeta in C^M as 2M reals).
double ambient_value(const EllipticSystem& L, std::span<const double> p) {
  const int n = L.n, M = L.M;
  double nx = 0.0;
  for (int i = 0; i < n; ++i) nx += p[i] * p[i];
  double nz = 0.0;
  for (int i = 0; i < 2 * M; ++i) nz += p[n + i] * p[n + i];
  if (nx < 1e-12 || nz < 1e-12) return std::numeric_limits<double>::infinity();
  std::vector<double> xi(n);
  for (int i = 0; i < n; ++i) xi[i] = p[i] / std::sqrt(nx);
  std::vector<Cplx> zeta(M);
  for (int i = 0; i < M; ++i) {
    zeta[i] = Cplx(p[n + 2 * i], p[n + 2 * i + 1]) / std::sqrt(nz);
  }
  return form_value(L, xi, zeta);
}

}  // namespace

EllipticSystem make_system(int n, int M, std::span<const Cplx> coeff, std::string label) {
  validate_dims(n, M);
  const std::size_t want = static_cast<std::size_t>(n) * n * M * M;
  if (coeff.size() != want)
    throw std::invalid_argument("make_system: coefficient tensor has wrong shape");
  for (const Cplx& c : coeff) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument("make_system: non-finite coefficient entry");
  }
  EllipticSystem L;
  L.n = n;
  L.M = M;
  L.coeff.assign(coeff.begin(), coeff.end());
  L.label = std::move(label);
  return L;
}

EllipticSystem make_laplacian(int n) {
  validate_dims(n, 1);
  EllipticSystem L;
  L.n = n;
  L.M = 1;
  L.coeff.assign(static_cast<std::size_t>(n) * n, Cplx(0.0));
  for (int j = 0; j < n; ++j) L.a(j, j, 0, 0) = 1.0;
  L.label = "laplacian";
  return L;
}

EllipticSystem make_scalar_diva(int n, const MatC& A) {
  validate_dims(n, 1);
  if (A.rows() != n || A.cols() != n)
    throw std::invalid_argument("make_scalar_diva: matrix must be n x n");
  EllipticSystem L;
  L.n = n;
  L.M = 1;
  L.coeff.assign(static_cast<std::size_t>(n) * n, Cplx(0.0));
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      const Cplx v = A(r, s);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::invalid_argument("make_scalar_diva: non-finite entry");
      L.a(r, s, 0, 0) = v;
    }
  }
  L.label = "scalar-divA";
  return L;
}

LameResult make_lame(int n, Cplx mu, Cplx lambda) {
  validate_dims(n, n);
  EllipticSystem L;
  L.n = n;
  L.M = n;
  L.coeff.assign(static_cast<std::size_t>(n) * n * n * n, Cplx(0.0));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      for (int al = 0; al < n; ++al) {
        for (int be = 0; be < n; ++be) {
          Cplx v = 0.0;
          if (j == k && al == be) v += mu;
          if (j == al && k == be) v += lambda + mu;
          L.a(j, k, al, be) = v;
        }
      }
    }
  }
  L.label = "lame";
  LameResult res;
  res.system = std::move(L);
  res.admissible = mu.real() > 0.0 && (2.0 * mu + lambda).real() > 0.0;
  return res;
}

double ellipticity_constant(const EllipticSystem& L, int samples, bool refine,
                            std::uint64_t seed) {
  const int dim = L.n + 2 * L.M;
  std::vector<double> p(dim), best_p(dim);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    for (int d = 0; d < dim; ++d) {
      p[d] = 2.0 * halton(seed + s, kPrimes[d]) - 1.0;
    }
    const double v = ambient_value(L, p);
    if (v < best) {
      best = v;
      best_p = p;
    }
  }
  if (refine && std::isfinite(best)) {
    double step = 0.1;
    for (int round = 0; round < 50; ++round) {
      for (int d = 0; d < dim; ++d) {
        for (double sgn : {+1.0, -1.0}) {
          std::vector<double> q = best_p;
          q[d] += sgn * step;
          const double v = ambient_value(L, q);
          if (v < best) {
            best = v;
            best_p = q;
          }
        }
      }
      step *= 0.75;
    }
  }
  return best;
}

SymbolPencil symbol_pencil(const EllipticSystem& L, std::span<const double> xi) {
  if (static_cast<int>(xi.size()) != L.n - 1)
    throw std::invalid_argument("symbol_pencil: tangential frequency must have n-1 entries");
  const int M = L.M, nn = L.n - 1;
  SymbolPencil P;
  P.A0 = MatC::Zero(M, M);
  P.A1 = MatC::Zero(M, M);
  P.A2 = MatC::Zero(M, M);
  for (int al = 0; al < M; ++al) {
    for (int be = 0; be < M; ++be) {
      P.A2(al, be) = L.a(nn, nn, al, be);
      Cplx a1 = 0.0, a0 = 0.0;
      for (int j = 0; j < nn; ++j) {
        a1 += (L.a(j, nn, al, be) + L.a(nn, j, al, be)) * xi[j];
        for (int k = 0; k < nn; ++k) a0 += L.a(j, k, al, be) * xi[j] * xi[k];
      }
      P.A1(al, be) = a1;
      P.A0(al, be) = a0;
    }
  }
  return P;
}

std::vector<Cplx> pencil_roots(const EllipticSystem& L, std::span<const double> xi) {
  const SymbolPencil P = symbol_pencil(L, xi);
  const int M = L.M;
  Eigen::PartialPivLU<MatC> lu(P.A2);
  MatC C = MatC::Zero(2 * M, 2 * M);
  C.topRightCorner(M, M) = MatC::Identity(M, M);
  C.bottomLeftCorner(M, M) = -lu.solve(P.A0);
  C.bottomRightCorner(M, M) = -lu.solve(P.A1);
  Eigen::ComplexEigenSolver<MatC> es(C, /*computeEigenvectors=*/false);
  std::vector<Cplx> roots(es.eigenvalues().data(),
                          es.eigenvalues().data() + 2 * M);
  return roots;
}

}  // namespace halfspace
