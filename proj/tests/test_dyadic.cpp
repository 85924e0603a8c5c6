#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "halfspace/catalog.hpp"
#include "halfspace/dyadic.hpp"
#include "halfspace/seminorms.hpp"

using namespace halfspace;

namespace {

DyadicLattice unit_lattice(int levels) {
  return make_lattice(1, {0.0}, 1.0, levels);
}

// exhaustive-tree oracle for the stopping decomposition
std::vector<DyadicCube> stopping_oracle(const DyadicLattice& mask, double beta) {
  auto density = [&](const DyadicCube& Q) {
    const std::int64_t m = mask.cells_per_axis(Q);
    double acc = 0.0;
    for (std::int64_t i = 0; i < m; ++i) acc += mask.at(Q.ix * m + i);
    return acc / double(m);
  };
  std::vector<DyadicCube> out;
  for (const DyadicCube& Q : all_cubes_to_depth(mask, mask.levels)) {
    if (!(density(Q) > beta)) continue;
    bool maximal = true;
    DyadicCube A = Q;
    while (A.level > 0) {
      A = A.parent();
      if (density(A) > beta) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(Q);
  }
  std::sort(out.begin(), out.end(), [](const DyadicCube& a, const DyadicCube& b) {
    return std::tie(a.level, a.iy, a.ix) < std::tie(b.level, b.iy, b.ix);
  });
  return out;
}

}  // namespace

TEST_CASE("tree integrity: children partition the parent") {
  auto lat = unit_lattice(6);
  for (const DyadicCube& Q : all_cubes_to_depth(lat, 3)) {
    const auto kids = dyadic_children(Q);
    CHECK(kids.size() == 2);
    std::size_t cells = 0;
    for (const auto& ch : kids) {
      CHECK(ch.parent() == Q);
      cells += lat.cube_cell_count(ch);
      CHECK(lat.cube_side(ch) == doctest::Approx(0.5 * lat.cube_side(Q)));
    }
    CHECK(cells == lat.cube_cell_count(Q));
  }
}

TEST_CASE("localized dyadic maximal function") {
  auto lat = unit_lattice(6);
  for (auto& v : lat.cell) v = 2.5;
  const double x[1] = {0.3};
  CHECK(dyadic_maximal(lat, x) == doctest::Approx(2.5));

  // indicator of [0, 1/4)
  auto ind = unit_lattice(6);
  for (std::int64_t i = 0; i < ind.per_axis(); ++i) {
    ind.at(i) = (i < ind.per_axis() / 4) ? 1.0 : 0.0;
  }
  const double a[1] = {0.1};
  CHECK(dyadic_maximal(ind, a) == doctest::Approx(1.0));
  // ancestors of 0.8: [0.75,1):0, [0.5,1):0, [0,1):1/4
  const double b[1] = {0.8};
  CHECK(dyadic_maximal(ind, b) == doctest::Approx(0.25));

  const double outside[1] = {1.5};
  CHECK_THROWS_AS((void)dyadic_maximal(ind, outside), std::invalid_argument);

  // bracketing invariant: cell value <= maximal <= max ancestor mean (oracle)
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto rnd = unit_lattice(8);
  for (auto& v : rnd.cell) v = uni(rng);
  for (int i = 0; i < 50; ++i) {
    const double x0[1] = {uni(rng)};
    const auto c = rnd.cell_containing(x0);
    double oracle = 0.0;
    DyadicCube Q = c;
    while (true) {
      const std::int64_t m = rnd.cells_per_axis(Q);
      double acc = 0.0;
      for (std::int64_t k = 0; k < m; ++k) acc += std::abs(rnd.at(Q.ix * m + k));
      oracle = std::max(oracle, acc / double(m));
      if (Q.level == 0) break;
      Q = Q.parent();
    }
    const double got = dyadic_maximal(rnd, x0);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(got >= std::abs(rnd.at(c.ix)) - 1e-14);
  }
}

TEST_CASE("stopping decomposition versus the exhaustive oracle") {
  // F = [0, 1/2), beta = 0.6: the maximal cube is [0,1/2) itself
  auto m1 = unit_lattice(6);
  for (std::int64_t i = 0; i < m1.per_axis() / 2; ++i) m1.at(i) = 1.0;
  auto dec = stopping_decomposition(m1, 0.6);
  REQUIRE(dec.size() == 1);
  CHECK(dec[0].level == 1);
  CHECK(dec[0].ix == 0);

  // empty mask
  auto m0 = unit_lattice(6);
  CHECK(stopping_decomposition(m0, 0.5).empty());

  // F = [0, 3/8), beta = 0.9 at resolution 2^-6
  auto m2 = unit_lattice(6);
  for (std::int64_t i = 0; i < (3 * m2.per_axis()) / 8; ++i) m2.at(i) = 1.0;
  auto dec2 = stopping_decomposition(m2, 0.9);
  auto orc2 = stopping_oracle(m2, 0.9);
  CHECK(dec2.size() == orc2.size());
  for (std::size_t i = 0; i < dec2.size(); ++i) CHECK(dec2[i] == orc2[i]);
  // the two maximal cubes are [0,1/4) and [1/4,3/8)
  CHECK(dec2.size() == 2);
  CHECK(dec2[0].level == 2);
  CHECK(dec2[0].ix == 0);
  CHECK(dec2[1].level == 3);
  CHECK(dec2[1].ix == 2);

  // precondition: the root density must stay below beta
  auto mfull = unit_lattice(4);
  for (auto& v : mfull.cell) v = 1.0;
  CHECK_THROWS_AS((void)stopping_decomposition(mfull, 0.5), std::invalid_argument);
}

TEST_CASE("stopping decomposition on random masks matches the oracle exactly") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int done = 0;
  while (done < 50) {
    auto mask = unit_lattice(6);
    const double fill = 0.1 + 0.6 * uni(rng);
    for (auto& v : mask.cell) v = uni(rng) < fill ? 1.0 : 0.0;
    const double beta = 0.3 + 0.65 * uni(rng);
    double density = 0.0;
    for (double v : mask.cell) density += v;
    density /= double(mask.cell.size());
    if (!(density < beta)) continue;
    auto got = stopping_decomposition(mask, beta);
    auto want = stopping_oracle(mask, beta);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);

    // union equals the superlevel set of the maximal function of the mask
    for (int c = 0; c < 64; ++c) {
      const double x[1] = {(c + 0.5) / 64.0};
      const bool in_union = [&] {
        for (const auto& Q : got) {
          if (mask.contains(Q, x)) return true;
        }
        return false;
      }();
      CHECK(in_union == (dyadic_maximal(mask, x) > beta));
    }
    ++done;
  }
}

TEST_CASE("level-set profile for constant and zero families") {
  auto lat = unit_lattice(8);
  PairFamily constant;
  constant.label = "constant";
  constant.values = [&lat](const DyadicCube& Q, std::vector<double>& G,
                           std::vector<double>& H) {
    G.assign(lat.cube_cell_count(Q), 0.7);
    H.assign(lat.cube_cell_count(Q), 0.7);
  };
  const double grid[4] = {0.2, 0.5, 0.9, 2.0};
  for (double alpha : {0.2, std::exp(-1.0), 0.7}) {
    auto prof = jn_profile(constant, lat, alpha, grid, 5);
    CHECK(prof.m_alpha == doctest::Approx(0.7));
  }

  PairFamily zero;
  zero.label = "zero";
  zero.values = [&lat](const DyadicCube& Q, std::vector<double>& G,
                       std::vector<double>& H) {
    G.assign(lat.cube_cell_count(Q), 0.0);
    H.assign(lat.cube_cell_count(Q), 0.0);
  };
  auto prof0 = jn_profile(zero, lat, 0.5, grid, 5);
  CHECK(prof0.bound_holds);
  for (double x : prof0.xi) CHECK(x == 0.0);
}

TEST_CASE("bmo family basics") {
  // f == c: both functions vanish
  auto flat = unit_lattice(8);
  for (auto& v : flat.cell) v = 3.3;
  auto bf = bmo_family(flat);
  std::vector<double> G, H;
  DyadicCube root;
  bf.family.values(root, G, H);
  for (double g : G) CHECK(g <= 1e-12);
  for (double h : H) CHECK(h <= 1e-12);
  CHECK(bf.dyadic_norm <= 1e-12);

  // f = indicator of [0,1/2): |f - 1/2| = 1/2 a.e., so the level set
  // {G_root > 0.4} fills the cube
  auto ind = unit_lattice(8);
  for (std::int64_t i = 0; i < ind.per_axis() / 2; ++i) ind.at(i) = 1.0;
  auto bi = bmo_family(ind);
  bi.family.values(root, G, H);
  std::size_t over = 0;
  for (double g : G) over += g > 0.4 ? 1 : 0;
  CHECK(over == G.size());
  const double x[1] = {0.7};
  auto [gx, hx] = family_at(bi.family, ind, root, x);
  CHECK(gx == doctest::Approx(0.5));
  CHECK(hx >= gx);
}

TEST_CASE("pair family invariants hold for the bmo construction") {
  // G_Q <= H_Q on cells, and the two-scale chain inequality on samples
  auto lat = unit_lattice(10);
  fill_from_cell_mean(lat, [](std::span<const double> a, std::span<const double> b) {
    // cell mean of log(1/x): integral x - x log x
    auto F = [](double x) { return x == 0.0 ? 0.0 : x - x * std::log(x); };
    return (F(b[0]) - F(a[0])) / (b[0] - a[0]);
  });
  auto bf = bmo_family(lat);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> G, H, Gp, Hp;
  for (const DyadicCube& Q : all_cubes_to_depth(lat, 4)) {
    bf.family.values(Q, G, H);
    for (std::size_t i = 0; i < G.size(); ++i) CHECK(G[i] <= H[i] + 1e-12);

    // chain: G_Q(x) <= G_Q'(x) + H_Q(y) for x in Q', y in parent(Q')
    for (const DyadicCube& Qc : dyadic_children(Q)) {
      for (const DyadicCube& Qp : dyadic_children(Qc)) {
        bf.family.values(Qp, Gp, Hp);
        const auto plo = lat.cube_lo(Qp);
        const double ps = lat.cube_side(Qp);
        for (int trial = 0; trial < 3; ++trial) {
          const double xq[1] = {plo[0] + ps * uni(rng)};
          // y ranges over the dyadic parent of Q'
          const auto clo = lat.cube_lo(Qc);
          const double yq[1] = {clo[0] + lat.cube_side(Qc) * uni(rng)};
          const auto [gq, hq] = family_at(bf.family, lat, Q, xq);
          const auto [gp, hp] = family_at(bf.family, lat, Qp, xq);
          const auto [gy, hy] = family_at(bf.family, lat, Q, yq);
          CHECK(gq <= gp + hy + 1e-12);
          (void)hq;
          (void)gy;
          (void)hp;
        }
      }
    }
  }
}

TEST_CASE("exponential level-set decay for a logarithmic datum") {
  auto lat = unit_lattice(14);
  fill_from_cell_mean(lat, [](std::span<const double> a, std::span<const double> b) {
    auto F = [](double x) { return x == 0.0 ? 0.0 : x - x * std::log(x); };
    return (F(b[0]) - F(a[0])) / (b[0] - a[0]);
  });
  const double alpha = std::exp(-1.0);
  auto bf = bmo_family(lat, alpha);
  CHECK(bf.dyadic_norm > 0.1);

  // grid t_j = j m/2, j = 1..20
  std::vector<double> G, H;
  DyadicCube root;
  bf.family.values(root, G, H);
  std::vector<double> probe = {0.0};
  auto prof0 = jn_profile(bf.family, lat, alpha, probe, 10);
  std::vector<double> grid;
  for (int j = 1; j <= 20; ++j) grid.push_back(j * prof0.m_alpha / 2.0);
  auto prof = jn_profile(bf.family, lat, alpha, grid, 10);
  CHECK(prof.bound_holds);
  CHECK(prof.m_alpha <= bf.m_alpha_bound * (1 + 1e-12));

  // decay rate of the classical inequality, with the measured dyadic norm
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double classical =
        std::exp(1.0) *
        std::exp(-grid[j] / (std::exp(1.0) * 2.0 * bf.dyadic_norm));
    CHECK(prof.xi[j] <= classical * (1 + 1e-9));
  }

  // Orlicz-endpoint bound with the explicit constant (1+e) e 2^{n-1}
  const double lux = luxemburg_norm(G);
  CHECK(lux <= (1.0 + std::exp(1.0)) * std::exp(1.0) * 2.0 * bf.dyadic_norm);

  auto orl = orlicz_conclusions(bf.family, lat, alpha, 2.0, prof.m_alpha, 8);
  CHECK(orl.lq_ok);
  CHECK(orl.exp_ok);
}

TEST_CASE("conical family closed forms") {
  auto geo = make_lattice(1, {-0.5}, 1.0, 4);
  GrowthFunction idm;
  idm.eval = [](double t) { return t; };
  idm.label = "r";

  GradField zero = [](std::span<const double>, double) { return MatC::Zero(2, 1); };
  auto famz = conical_family(zero, idm, geo, 1);
  std::vector<double> G, H;
  DyadicCube root;
  famz.values(root, G, H);
  for (double g : G) CHECK(g == 0.0);
  for (double h : H) CHECK(h == 0.0);

  // constant gradient: narrow aperture gives 1, widened aperture sqrt(3)
  GradField lin = [](std::span<const double>, double) {
    MatC g(2, 1);
    g(0, 0) = 1.0;
    g(1, 0) = 0.0;
    return g;
  };
  auto faml = conical_family(lin, idm, geo, 1);
  faml.values(root, G, H);
  for (double g : G) CHECK(g == doctest::Approx(1.0).epsilon(1e-6));
  for (double h : H) CHECK(h == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));

  // aperture monotonicity for a harmonic gradient
  const auto cat = harmonic_catalog();
  GradField cosg = harmonic_grad_field(cat[0]);
  auto famc = conical_family(cosg, idm, geo, 1);
  for (const DyadicCube& Q : all_cubes_to_depth(geo, 2)) {
    famc.values(Q, G, H);
    for (std::size_t i = 0; i < G.size(); ++i) CHECK(G[i] <= H[i] * (1 + 1e-9));
  }
}

TEST_CASE("planar lattice: maximal function and bmo family smoke") {
  auto lat = make_lattice(2, {0.0, 0.0}, 1.0, 5);
  // indicator of the lower-left quadrant
  const std::int64_t n = lat.per_axis();
  for (std::int64_t j = 0; j < n; ++j) {
    for (std::int64_t i = 0; i < n; ++i) {
      lat.at(i, j) = (i < n / 2 && j < n / 2) ? 1.0 : 0.0;
    }
  }
  const double inside[2] = {0.1, 0.1};
  CHECK(dyadic_maximal(lat, inside) == doctest::Approx(1.0));
  const double outside[2] = {0.9, 0.9};
  // ancestors of the far corner: cells 0, quadrant 0, root 1/4
  CHECK(dyadic_maximal(lat, outside) == doctest::Approx(0.25));

  auto bf = bmo_family(lat, std::exp(-1.0), 4);
  std::vector<double> G, H;
  DyadicCube root;
  root.dim = 2;
  bf.family.values(root, G, H);
  REQUIRE(G.size() == lat.cell_count());
  // |1_Q - 1/4| takes the values 3/4 inside the quadrant and 1/4 outside
  for (double g : G) {
    const bool valid = std::abs(g - 0.75) < 1e-12 || std::abs(g - 0.25) < 1e-12;
    CHECK(valid);
  }
  for (std::size_t i = 0; i < G.size(); ++i) CHECK(G[i] <= H[i] + 1e-12);
  CHECK(bf.dyadic_norm > 0.3);

  const auto dec = stopping_decomposition(lat, 0.9);
  REQUIRE(dec.size() == 1);
  CHECK(dec[0].level == 1);
  CHECK(dec[0].ix == 0);
  CHECK(dec[0].iy == 0);
  const std::string json = stopping_cubes_json(lat, dec);
  CHECK(json.find("\"interval\"") != std::string::npos);
  CHECK(json.find("0.5") != std::string::npos);
}

TEST_CASE("exponential bound is a theorem across random bounded lattice data") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double alpha = std::exp(-1.0);
  for (int trial = 0; trial < 10; ++trial) {
    auto lat = unit_lattice(9);
    if (trial % 3 == 0) {
      // rough steps
      for (auto& v : lat.cell) v = uni(rng) < 0.5 ? -1.0 : 1.0;
    } else if (trial % 3 == 1) {
      for (auto& v : lat.cell) v = uni(rng);
    } else {
      // translated log spikes
      const double c = uni(rng);
      const std::int64_t n = lat.per_axis();
      for (std::int64_t i = 0; i < n; ++i) {
        const double x = (i + 0.5) / double(n);
        lat.at(i) = std::log(std::abs(x - c) + 1e-4);
      }
    }
    auto bf = bmo_family(lat, alpha, 7);
    std::vector<double> probe = {0.0};
    const double m = jn_profile(bf.family, lat, alpha, probe, 7).m_alpha;
    std::vector<double> grid;
    for (int j = 1; j <= 12; ++j) grid.push_back(j * m / 3.0);
    const auto prof = jn_profile(bf.family, lat, alpha, grid, 7);
    CAPTURE(trial);
    CHECK(prof.bound_holds);
    CHECK(prof.m_alpha <= bf.m_alpha_bound * (1 + 1e-12));
  }
}

TEST_CASE("conical family satisfies the two-scale chain inequality on samples") {
  auto geo = make_lattice(1, {-0.5}, 1.0, 5);
  GrowthFunction w;
  w.eval = [](double t) { return std::sqrt(t); };
  const auto cat = harmonic_catalog();
  GradField g = harmonic_grad_field(cat[2]);  // the square-root trace solution
  auto fam = conical_family(g, w, geo, 1);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> G, H;
  for (const DyadicCube& Q : all_cubes_to_depth(geo, 1)) {
    for (const DyadicCube& Qc : dyadic_children(Q)) {
      for (const DyadicCube& Qp : dyadic_children(Qc)) {
        const auto plo = geo.cube_lo(Qp);
        const double ps = geo.cube_side(Qp);
        const auto clo = geo.cube_lo(Qc);
        for (int trial = 0; trial < 2; ++trial) {
          const double xq[1] = {plo[0] + ps * uni(rng)};
          const double yq[1] = {clo[0] + geo.cube_side(Qc) * uni(rng)};
          const auto [gQ, hQ] = family_at(fam, geo, Q, xq);
          const auto [gP, hP] = family_at(fam, geo, Qp, xq);
          const auto [gy, hy] = family_at(fam, geo, Q, yq);
          (void)hP;
          (void)gy;
          CHECK(gQ <= gP + hy + 1e-6 + 1e-6 * (gP + hy));
          CHECK(gQ <= hQ * (1 + 1e-9));
        }
      }
    }
  }
}
