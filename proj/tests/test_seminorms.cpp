#include <cmath>

#include "doctest.h"
#include "halfspace/catalog.hpp"
#include "halfspace/growth.hpp"
#include "halfspace/seminorms.hpp"

using namespace halfspace;

namespace {

BoundaryField scalar_field(std::function<double(double)> f) {
  return [f = std::move(f)](std::span<const double> x) {
    VecC v(1);
    v(0) = f(x[0]);
    return v;
  };
}

GrowthFunction power_modulus(double a) {
  return catalog_growth("power", {{"alpha", a}});
}

GrowthFunction identity_modulus() {
  GrowthFunction g;
  g.eval = [](double t) { return t; };
  g.label = "r";
  return g;
}

CubeSweep unit_sweep() {
  CubeSweep s;
  s.root_lo = {-8.0};
  s.root_side = 16.0;
  s.level_max = 6;
  return s;
}

}  // namespace

TEST_CASE("mean oscillation at a scale") {
  auto c = scalar_field([](double) { return 4.2; });
  CHECK(osc_p(c, 1, 1.0, 1.0, unit_sweep()) == doctest::Approx(0.0));

  // single unit cube: mean |x - mid| = side/4
  CubeSweep single;
  single.root_lo = {0.0};
  single.root_side = 1.0;
  single.level_min = 0;
  single.level_max = 0;
  single.lattice_per_level = 1;
  single.random_per_level = 0;
  auto lin = scalar_field([](double x) { return x; });
  // fixed-order Gauss sees the |x - mean| kink at ~2e-4 relative
  CHECK(osc_p(lin, 1, 1.0, 1.0, single) == doctest::Approx(0.25).epsilon(2e-3));

  // log_+ |x| on [1,2]: sandwiched by the two-point mean oscillation
  CubeSweep logs;
  logs.root_lo = {1.0};
  logs.root_side = 1.0;
  logs.level_min = 0;
  logs.level_max = 0;
  logs.lattice_per_level = 1;
  logs.random_per_level = 0;
  auto logp = catalog_datum("logplus-abs");
  const double osc = osc_p(logp.eval, 1, 1.0, 1.0, logs);
  const double H12 = 3.0 - 4.0 * std::log(2.0);  // mean_Q mean_Q |log x - log y|
  CHECK(osc <= H12 * (1 + 1e-9));
  CHECK(H12 <= 2.0 * osc * (1 + 1e-9));
}

TEST_CASE("holder seminorm estimates") {
  auto sq = catalog_datum("sqrt-abs");
  auto est = holder_seminorm(sq.eval, 1, power_modulus(0.5), 6000);
  CHECK(est.value <= 1.0 + 1e-9);   // exact seminorm is 1
  CHECK(est.value >= 0.999);        // attained in the limit y -> 0

  auto c = catalog_datum("constant", 7.0);
  CHECK(holder_seminorm(c.eval, 1, power_modulus(0.5)).value == 0.0);
}

TEST_CASE("ratio of the example divergence pair, evaluated exactly") {
  // |f(x1 e1) - f(e1)| / w(|x1 - 1|) for f = log_+ |x1| under the piecewise
  // power-log modulus: grows along x1 = e^{10k}
  auto w = catalog_growth("example6", {{"alpha", 0.5}, {"beta", 0.5}});
  auto ratio = [&](double x1) { return std::log(x1) / w(x1 - 1.0); };
  const double r1 = ratio(std::exp(10.0));
  const double r2 = ratio(std::exp(20.0));
  const double r4 = ratio(std::exp(40.0));
  CHECK(r1 == doctest::Approx(10.0 / (1.0 + std::sqrt(std::log(std::exp(10.0) - 1.0))))
                  .epsilon(1e-12));
  CHECK(r2 > r1);
  CHECK(r4 > r2);
  CHECK(r4 == doctest::Approx(5.4611).epsilon(1e-3));
}

TEST_CASE("generalized mean-oscillation seminorm") {
  auto lin = scalar_field([](double x) { return x; });
  auto est = morrey_campanato_seminorm(lin, 1, identity_modulus(), 1.0, unit_sweep());
  CHECK(est.value == doctest::Approx(0.25).epsilon(2e-3));

  auto c = scalar_field([](double) { return -3.0; });
  CHECK(morrey_campanato_seminorm(c, 1, identity_modulus(), 1.0, unit_sweep()).value ==
        doctest::Approx(0.0));

  // log_+ |x1| under the piecewise power-log modulus stays bounded
  auto w6 = catalog_growth("example6", {{"alpha", 0.5}, {"beta", 0.5}});
  auto logp = catalog_datum("logplus-abs");
  CubeSweep wide;
  wide.root_lo = {-64.0};
  wide.root_side = 128.0;
  wide.level_max = 9;
  const double a = morrey_campanato_seminorm(logp.eval, 1, w6, 1.0, wide).value;
  const double b = morrey_campanato_seminorm(logp.eval, 1, w6, 1.0, wide.doubled()).value;
  CHECK(a <= 10.0);
  CHECK(b <= 10.0);
  CHECK(std::abs(a - b) <= 0.15 * std::max(a, b));
}

TEST_CASE("carleson-type seminorm: constant-gradient closed form") {
  GradField lin = [](std::span<const double>, double) {
    MatC g(2, 1);
    g(0, 0) = 1.0;
    g(1, 0) = 0.0;
    return g;
  };
  CHECK(star2_q(lin, identity_modulus(), 2.0, unit_sweep(), 1) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));

  GradField zero = [](std::span<const double>, double) { return MatC::Zero(2, 1); };
  CHECK(star2_q(zero, identity_modulus(), 2.0, unit_sweep(), 1) == 0.0);
}

TEST_CASE("carleson-type seminorm agrees with nested brute-force quadrature") {
  const auto cat = harmonic_catalog();
  GradField g = harmonic_grad_field(cat[0]);
  auto w = power_modulus(0.5);

  // five fixed cubes; independent trapezoid-in-x, trapezoid-in-t oracle
  struct FixedCube {
    double lo, side;
  };
  const FixedCube cubes[5] = {{-1.0, 2.0}, {0.0, 1.0}, {-3.0, 0.5}, {2.0, 4.0}, {-0.25, 0.25}};
  for (const auto& c : cubes) {
    CAPTURE(c.lo);
    CAPTURE(c.side);
    // oracle: mean over x of V(x; side)^2, V^2 by trapezoid in log t
    const int nx = 400, nt = 3000;
    double mean = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double x = c.lo + c.side * (i + 0.5) / nx;
      double v2 = 0.0;
      const double t0 = 1e-7 * c.side;
      for (int j = 0; j < nt; ++j) {
        const double tа = t0 * std::pow(c.side / t0, double(j) / nt);
        const double tb = t0 * std::pow(c.side / t0, double(j + 1) / nt);
        const double tm = 0.5 * (tа + tb);
        const double xx[1] = {x};
        v2 += g(xx, tm).squaredNorm() * tm * (tb - tа);
      }
      mean += v2;
    }
    mean /= nx;
    const double oracle = std::sqrt(mean) / w(c.side);

    Cube Q;
    Q.dim = 1;
    Q.lo = {c.lo};
    Q.side = c.side;
    CubeSweep one;
    one.root_lo = {c.lo};
    one.root_side = c.side;
    one.level_min = 0;
    one.level_max = 0;
    one.lattice_per_level = 1;
    one.random_per_level = 0;
    const double got = star2_q(g, w, 2.0, one, 1);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-3));
  }
}

TEST_CASE("orlicz norm closed forms") {
  // constant c: solve e^{c/tau} - 1 = 1
  std::vector<double> v(64, 1.7);
  CHECK(luxemburg_norm(v) == doctest::Approx(1.7 / std::log(2.0)).epsilon(1e-8));

  // indicator of half the cube: (1/2)(e^{1/tau} - 1) = 1
  std::vector<double> ind(64, 0.0);
  for (int i = 0; i < 32; ++i) ind[i] = 1.0;
  CHECK(luxemburg_norm(ind) == doctest::Approx(1.0 / std::log(3.0)).epsilon(1e-8));
  CHECK(luxemburg_norm(ind) == doctest::Approx(0.91024).epsilon(1e-4));

  std::vector<double> z(16, 0.0);
  CHECK(luxemburg_norm(z) == 0.0);

  // unbounded samples report the +inf sentinel
  std::vector<double> bad = {1.0, std::numeric_limits<double>::infinity()};
  CHECK(std::isinf(luxemburg_norm(bad)));
}

TEST_CASE("orlicz norm is monotone and absolutely homogeneous") {
  std::vector<double> g1 = {0.1, 0.5, 1.0, 2.0, 0.7, 0.0};
  std::vector<double> g2 = {0.2, 0.6, 1.5, 2.0, 1.7, 0.1};
  CHECK(luxemburg_norm(g1) <= luxemburg_norm(g2));
  std::vector<double> g3 = g1;
  for (auto& x : g3) x *= 3.0;
  CHECK(luxemburg_norm(g3) == doctest::Approx(3.0 * luxemburg_norm(g1)).epsilon(1e-12));
}

TEST_CASE("orlicz endpoint of the carleson scale") {
  GradField lin = [](std::span<const double>, double) {
    MatC g(2, 1);
    g(0, 0) = 1.0;
    g(1, 0) = 0.0;
    return g;
  };
  // V is constant l/sqrt2 per cube, so the norm is (l/sqrt2)/(l log 2)
  CHECK(star2_exp(lin, identity_modulus(), unit_sweep(), 1) ==
        doctest::Approx(1.0 / (std::sqrt(2.0) * std::log(2.0))).epsilon(1e-6));

  GradField zero = [](std::span<const double>, double) { return MatC::Zero(2, 1); };
  CHECK(star2_exp(zero, identity_modulus(), unit_sweep(), 1) == 0.0);

  // q = 2 bound through t^2 <= 0.648 (e^t - 1)
  const auto cat = harmonic_catalog();
  GradField g = harmonic_grad_field(cat[0]);
  auto w = power_modulus(0.5);
  const auto data = sweep_vertical(g, unit_sweep(), 1);
  const double q2 = star2_q_from(data, w, 2.0);
  const double ex = star2_exp_from(data, w);
  CHECK(q2 <= std::sqrt(0.648) * ex * (1.0 + 1e-9));
}

TEST_CASE("sup-type endpoint seminorm") {
  const auto cat = harmonic_catalog();
  GradField cosg = harmonic_grad_field(cat[0]);
  // |grad u| = e^{-t}: sup over t of t e^{-t} / t -> 1 at the bottom of the grid
  CHECK(star2_inf(cosg, identity_modulus(), 1) == doctest::Approx(1.0).epsilon(1e-3));

  GradField lin = [](std::span<const double>, double) {
    MatC g(2, 1);
    g(0, 0) = 1.0;
    g(1, 0) = 0.0;
    return g;
  };
  CHECK(star2_inf(lin, identity_modulus(), 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oscillation exponents compare within the expected constant") {
  CubeSweep sweep = unit_sweep();
  for (const char* name : {"cos", "sqrt-abs", "bump", "arctan"}) {
    CAPTURE(name);
    auto f = catalog_datum(name);
    for (double r : {0.25, 1.0, 4.0}) {
      const double o1 = osc_p(f.eval, 1, 1.0, r, sweep);
      const double o2 = osc_p(f.eval, 1, 2.0, r, sweep);
      CHECK(o1 <= o2 * (1 + 1e-9));
      CHECK(o2 <= 5.0 * o1);
    }
  }
}

TEST_CASE("per-scale oscillation never exceeds the seminorm envelope") {
  auto w = power_modulus(0.5);
  CubeSweep sweep = unit_sweep();
  for (const char* name : {"cos", "sqrt-abs", "arctan"}) {
    CAPTURE(name);
    auto f = catalog_datum(name);
    const double mc = morrey_campanato_seminorm(f.eval, 1, w, 1.0, sweep).value;
    for (double r : {0.125, 0.5, 2.0, 8.0}) {
      CHECK(osc_p(f.eval, 1, 1.0, r, sweep) <= w(r) * mc * (1 + 1e-9));
    }
  }
}

TEST_CASE("mean-oscillation seminorm bounded by the pointwise one") {
  // n = 2: ||f|| <= sqrt(n-1) C_w [f] with C_w = 2 for the square-root modulus
  auto w = power_modulus(0.5);
  const double c_w = 2.0;
  CubeSweep sweep = unit_sweep();
  for (const char* name : {"cos", "cos2", "sqrt-abs", "bump", "arctan"}) {
    CAPTURE(name);
    auto f = catalog_datum(name);
    const double mc = morrey_campanato_seminorm(f.eval, 1, w, 1.0, sweep).value;
    const double ho = holder_seminorm(f.eval, 1, w, 4000).value;
    CHECK(mc <= std::sqrt(1.0) * c_w * ho * (1 + 1e-6));
  }
}

TEST_CASE("estimators are absolutely homogeneous") {
  auto f = catalog_datum("bump");
  BoundaryField scaled = [&f](std::span<const double> x) { return VecC(3.0 * f.eval(x)); };
  auto w = power_modulus(0.5);
  CubeSweep sweep = unit_sweep();
  CHECK(morrey_campanato_seminorm(scaled, 1, w, 1.0, sweep).value ==
        doctest::Approx(3.0 * morrey_campanato_seminorm(f.eval, 1, w, 1.0, sweep).value)
            .epsilon(1e-12));
  CHECK(holder_seminorm(scaled, 1, w).value ==
        doctest::Approx(3.0 * holder_seminorm(f.eval, 1, w).value).epsilon(1e-12));
  CHECK(osc_p(scaled, 1, 2.0, 1.0, sweep) ==
        doctest::Approx(3.0 * osc_p(f.eval, 1, 2.0, 1.0, sweep)).epsilon(1e-12));
}

TEST_CASE("planar sweep smoke (n = 3 boundary)") {
  CubeSweep sweep;
  sweep.dim = 2;
  sweep.root_lo = {-2.0, -2.0};
  sweep.root_side = 4.0;
  sweep.level_max = 3;
  sweep.lattice_per_level = 2;
  sweep.random_per_level = 1;

  BoundaryField lin = [](std::span<const double> x) {
    VecC v(1);
    v(0) = x[0];
    return v;
  };
  GrowthFunction idm;
  idm.eval = [](double t) { return t; };
  auto est = morrey_campanato_seminorm(lin, 1, idm, 1.0, sweep);
  CHECK(est.value == doctest::Approx(0.25).epsilon(2e-3));

  auto f2 = catalog_datum("cos", 0.0, 2);
  const double o = osc_p(f2.eval, 1, 2.0, 1.0, sweep);
  CHECK(o > 0.0);
  CHECK(o < 1.0);
}
