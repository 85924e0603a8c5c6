#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "halfspace/extension.hpp"
#include "halfspace/growth.hpp"

namespace halfspace {

// Half-open dyadic cube inside a fixed root: level 0 is the root itself,
// children halve each axis. Coordinates are integers at the cube's level.
struct DyadicCube {
  int level = 0;
  std::int64_t ix = 0;
  std::int64_t iy = 0;
  int dim = 1;

  DyadicCube parent() const;
  bool operator==(const DyadicCube&) const = default;
};

// Cell-mean data on the root cube at a fixed lattice resolution. Level-set
// measures, means and maximal functions are exact lattice counting for the
// piecewise-constant representative carried here.
struct DyadicLattice {
  int dim = 1;
  std::vector<double> lo = {0.0};
  double side = 1.0;
  int levels = 14;  // cells per axis = 2^levels
  std::vector<double> cell;

  std::int64_t per_axis() const { return std::int64_t(1) << levels; }
  std::size_t cell_count() const;
  double cell_width() const { return side / double(per_axis()); }
  double cell_measure() const;
  double& at(std::int64_t ix, std::int64_t iy = 0);
  double at(std::int64_t ix, std::int64_t iy = 0) const;

  // cube geometry
  double cube_side(const DyadicCube& Q) const { return side / double(std::int64_t(1) << Q.level); }
  std::vector<double> cube_lo(const DyadicCube& Q) const;
  std::int64_t cells_per_axis(const DyadicCube& Q) const {
    return std::int64_t(1) << (levels - Q.level);
  }
  std::size_t cube_cell_count(const DyadicCube& Q) const;
  bool contains(const DyadicCube& Q, std::span<const double> x) const;
  DyadicCube cell_containing(std::span<const double> x) const;
};

DyadicLattice make_lattice(int dim, std::vector<double> lo, double side, int levels);
// fill cells from a pointwise callback (per-cell Gauss means) or from an
// analytic cell-mean callback for exactness
void fill_from_point(DyadicLattice& lat, const std::function<double(std::span<const double>)>& f,
                     int order = 4);
void fill_from_cell_mean(
    DyadicLattice& lat,
    const std::function<double(std::span<const double>, std::span<const double>)>& mean);

std::vector<DyadicCube> dyadic_children(const DyadicCube& Q);
std::vector<DyadicCube> all_cubes_to_depth(const DyadicLattice& lat, int max_depth);

// localized dyadic Hardy-Littlewood maximal function of |f| at x
double dyadic_maximal(const DyadicLattice& f, std::span<const double> x);

// maximal dyadic cubes with density of the mask above beta; requires the
// root density to be below beta
std::vector<DyadicCube> stopping_decomposition(const DyadicLattice& mask, double beta);

// stopping cubes as a JSON list of half-open coordinate intervals
std::string stopping_cubes_json(const DyadicLattice& lat,
                                std::span<const DyadicCube> cubes);

// Calderon-style pair family: batch values of (G_Q, H_Q) over the cells of Q,
// ordered row-major within the cube.
struct PairFamily {
  std::string label;
  std::function<void(const DyadicCube&, std::vector<double>&, std::vector<double>&)> values;
};

// spot values at a point (cell lookup)
std::pair<double, double> family_at(const PairFamily& fam, const DyadicLattice& lat,
                                    const DyadicCube& Q, std::span<const double> x);

struct JnProfile {
  double m_alpha = 0.0;
  std::vector<double> t_grid;
  std::vector<double> xi;  // max level-set fraction of G_Q per threshold
  bool bound_holds = false;
  double worst_margin = 0.0;  // min over grid of bound / measured (>1 means slack)
};

JnProfile jn_profile(const PairFamily& fam, const DyadicLattice& lat, double alpha,
                     std::span<const double> t_grid, int max_depth);

struct BmoFamily {
  PairFamily family;
  double dyadic_norm = 0.0;     // sup over probed cubes of mean |f - f_Q|
  double m_alpha_bound = 0.0;   // 2^{n-1} norm / alpha, from the weak (1,1) step
};

BmoFamily bmo_family(const DyadicLattice& f, double alpha = std::exp(-1.0),
                     int max_depth = 10);

// conical family: G with unit aperture, H with the widened aperture
// 1 + 2 sqrt(n-1); both normalized by phi(side(Q)).
PairFamily conical_family(const GradField& grad, const GrowthFunction& phi,
                          const DyadicLattice& geometry, int M);

struct OrliczReport {
  bool lq_ok = false;
  bool exp_ok = false;
  double lq_worst = 0.0;   // max over cubes of measured / bound
  double exp_worst = 0.0;
};

OrliczReport orlicz_conclusions(const PairFamily& fam, const DyadicLattice& lat,
                                double alpha, double q, double m_alpha, int max_depth);

}  // namespace halfspace
