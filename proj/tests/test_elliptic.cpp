#include <cmath>
#include <random>

#include "doctest.h"
#include "halfspace/elliptic.hpp"

using namespace halfspace;

namespace {

// Brute-force sphere minimization at fixed resolution, independent of the
// Halton + descent path.
double brute_form_min_scalar(const EllipticSystem& L, int grid = 720) {
  REQUIRE(L.M == 1);
  REQUIRE(L.n == 2);
  double best = std::numeric_limits<double>::infinity();
  const Cplx one(1.0, 0.0);
  for (int i = 0; i < grid; ++i) {
    const double th = 2.0 * M_PI * i / grid;
    const double xi[2] = {std::cos(th), std::sin(th)};
    Cplx acc = 0.0;
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) acc += L.a(j, k, 0, 0) * xi[j] * xi[k] * one;
    best = std::min(best, acc.real());
  }
  return best;
}

double lame_form_min_closed(Cplx mu, Cplx lambda) {
  // form = Re(mu) |xi|^2 |zeta|^2 + Re(lambda+mu) |xi.zeta|^2 with
  // |xi.zeta|^2 ranging over [0,1] on the product of spheres
  return std::min(mu.real(), (2.0 * mu + lambda).real());
}

}  // namespace

TEST_CASE("make_system basic validation") {
  auto lap = make_laplacian(2);
  CHECK(lap.n == 2);
  CHECK(lap.M == 1);
  CHECK(lap.a(0, 0, 0, 0) == Cplx(1.0));
  CHECK(lap.a(0, 1, 0, 0) == Cplx(0.0));

  MatC A(2, 2);
  A << Cplx(1, 0), Cplx(0, 0.5), Cplx(0, -0.5), Cplx(1, 0);
  auto diva = make_scalar_diva(2, A);
  CHECK(brute_form_min_scalar(diva) == doctest::Approx(1.0).epsilon(1e-6));

  std::vector<Cplx> bad(4, Cplx(1.0));
  bad[2] = Cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(make_system(2, 1, bad), std::invalid_argument);
  std::vector<Cplx> wrong(5, Cplx(1.0));
  CHECK_THROWS_AS(make_system(2, 1, wrong), std::invalid_argument);
}

TEST_CASE("lame admissibility flag") {
  CHECK(make_lame(2, Cplx(1, 0), Cplx(1, 0)).admissible);
  CHECK_FALSE(make_lame(2, Cplx(1, 0), Cplx(-2.5, 0)).admissible);
  CHECK(make_lame(2, Cplx(1, 1), Cplx(-1, 0)).admissible);
}

TEST_CASE("ellipticity constant: laplacian and lame") {
  auto lap = make_laplacian(2);
  CHECK(ellipticity_constant(lap, 20000) == doctest::Approx(1.0).epsilon(1e-3));

  auto lame3 = make_lame(3, Cplx(1, 0), Cplx(1, 0));
  CHECK(ellipticity_constant(lame3.system, 50000) ==
        doctest::Approx(lame_form_min_closed(Cplx(1, 0), Cplx(1, 0))).epsilon(1e-2));

  auto lame2 = make_lame(2, Cplx(1, 0), Cplx(-1.5, 0));
  CHECK(ellipticity_constant(lame2.system, 50000) ==
        doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("ellipticity sign agrees with the closed-form criterion") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  int checked = 0;
  while (checked < 20) {
    const Cplx mu(1.0 + 0.5 * uni(rng), 0.3 * uni(rng));
    const Cplx lam(-2.0 * mu.real() + 0.8 * uni(rng), 0.3 * uni(rng));
    const double margin = (2.0 * mu + lam).real();
    if (std::abs(margin) <= 0.05) continue;  // skip the indeterminate band
    auto lame = make_lame(2, mu, lam);
    const double kappa = ellipticity_constant(lame.system, 40000);
    CAPTURE(mu.real());
    CAPTURE(lam.real());
    CHECK((kappa > 0) == lame.admissible);
    CHECK(kappa == doctest::Approx(lame_form_min_closed(mu, lam)).epsilon(2e-2));
    ++checked;
  }
}

TEST_CASE("symbol pencil values") {
  auto lap2 = make_laplacian(2);
  const double xi1[1] = {3.0};
  auto P = symbol_pencil(lap2, xi1);
  CHECK(P.A0(0, 0) == Cplx(9.0));
  CHECK(P.A1(0, 0) == Cplx(0.0));
  CHECK(P.A2(0, 0) == Cplx(1.0));

  auto lap3 = make_laplacian(3);
  const double xi2[2] = {3.0, 4.0};
  auto P3 = symbol_pencil(lap3, xi2);
  CHECK(P3.A0(0, 0) == Cplx(25.0));
  CHECK(P3.A1(0, 0) == Cplx(0.0));
  CHECK(P3.A2(0, 0) == Cplx(1.0));

  // hand-expanded pencil for the elasticity operator at xi'=1, mu=lambda=1
  auto lame = make_lame(2, Cplx(1, 0), Cplx(1, 0));
  auto PL = symbol_pencil(lame.system, xi1);
  const double one[1] = {1.0};
  auto PL1 = symbol_pencil(lame.system, one);
  CHECK(PL1.A2(0, 0) == Cplx(1.0));
  CHECK(PL1.A2(1, 1) == Cplx(3.0));
  CHECK(PL1.A2(0, 1) == Cplx(0.0));
  CHECK(PL1.A1(0, 1) == Cplx(2.0));
  CHECK(PL1.A1(1, 0) == Cplx(2.0));
  CHECK(PL1.A1(0, 0) == Cplx(0.0));
  CHECK(PL1.A0(0, 0) == Cplx(3.0));
  CHECK(PL1.A0(1, 1) == Cplx(1.0));
  // homogeneity in the tangential frequency
  CHECK(PL.A0(0, 0) == Cplx(9.0) * PL1.A0(0, 0));
  CHECK(PL.A1(0, 1) == Cplx(3.0) * PL1.A1(0, 1));
  CHECK(PL.A2(1, 1) == PL1.A2(1, 1));
}

TEST_CASE("pencil scaling is exact") {
  auto lame = make_lame(3, Cplx(2, 0.5), Cplx(0.5, -0.25));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int it = 0; it < 20; ++it) {
    double xi[2] = {uni(rng), uni(rng)};
    double cxi[2] = {3.0 * xi[0], 3.0 * xi[1]};
    auto P = symbol_pencil(lame.system, xi);
    auto Pc = symbol_pencil(lame.system, cxi);
    CHECK((Pc.A0 - 9.0 * P.A0).norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((Pc.A1 - 3.0 * P.A1).norm() == doctest::Approx(0.0));
    CHECK((Pc.A2 - P.A2).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("pencil roots stay away from the real axis for elliptic systems") {
  std::vector<EllipticSystem> cat;
  cat.push_back(make_laplacian(2));
  cat.push_back(make_laplacian(3));
  cat.push_back(make_lame(2, Cplx(1, 0), Cplx(1, 0)).system);
  cat.push_back(make_lame(3, Cplx(1, 0.2), Cplx(0.5, 0)).system);
  MatC A(2, 2);
  A << Cplx(1, 0), Cplx(0, 0.5), Cplx(0, -0.5), Cplx(1, 0);
  cat.push_back(make_scalar_diva(2, A));

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  for (const auto& L : cat) {
    CAPTURE(L.label);
    for (int it = 0; it < 100; ++it) {
      std::vector<double> xi(L.n - 1);
      double norm = 0.0;
      for (auto& x : xi) {
        x = uni(rng);
        norm += x * x;
      }
      norm = std::sqrt(norm);
      if (norm < 1e-3) continue;
      auto roots = pencil_roots(L, xi);
      CHECK(roots.size() == static_cast<std::size_t>(2 * L.M));
      for (const Cplx& r : roots) {
        CHECK(std::abs(r.imag()) > 1e-8 * norm);
      }
    }
  }
}
