#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "halfspace/extension.hpp"
#include "halfspace/growth.hpp"

namespace halfspace {

using BoundaryField = std::function<VecC(std::span<const double>)>;

struct Cube {
  std::vector<double> lo;
  double side = 1.0;
  int dim = 1;
};

// Dyadic-in-scale cube family inside a fixed root box: per level a small
// lattice of aligned positions plus seeded random offsets. All sup-type
// estimators scan this family, so their outputs are lower bounds of the true
// suprema; stability is judged by re-running with a denser sweep.
struct CubeSweep {
  int dim = 1;
  std::vector<double> root_lo = {-8.0};
  double root_side = 16.0;
  int level_min = 0;
  int level_max = 6;
  int lattice_per_level = 5;
  int random_per_level = 4;
  std::uint64_t seed = 1234;

  std::vector<Cube> cubes() const;
  CubeSweep doubled() const;  // twice the positions per level
};

// mean of f over the cube by tensor Gauss quadrature (32 nodes per axis)
VecC cube_mean(const BoundaryField& f, const Cube& Q, int M, int order = 32);

// osc_p(f; r): max over swept cubes of side <= r of (mean |f - f_Q|^p)^{1/p}
double osc_p(const BoundaryField& f, int M, double p, double r, const CubeSweep& sweep);

struct SemiNormEstimate {
  double value = 0.0;
  Cube witness_cube;
  std::vector<double> witness_x, witness_y;  // for pair-based sups
};

// sup |f(x)-f(y)| / w(|x-y|) over structured dyadic-separation pairs plus
// seeded random pairs in the box [-box, box]^dim.
SemiNormEstimate holder_seminorm(const BoundaryField& f, int dim, const GrowthFunction& w,
                                 int pair_budget = 4000, std::uint64_t seed = 99,
                                 double box = 64.0);

// same sup over half-space pairs (x,t), t in [t_min, t_max]
SemiNormEstimate holder_seminorm_halfspace(
    const std::function<VecC(std::span<const double>, double)>& u, int dim,
    const GrowthFunction& w, int pair_budget = 4000, std::uint64_t seed = 99,
    double box = 32.0, double t_min = 1e-6, double t_max = 32.0);

SemiNormEstimate morrey_campanato_seminorm(const BoundaryField& f, int M,
                                           const GrowthFunction& w, double p,
                                           const CubeSweep& sweep);

// Per-cube vertical-square data: V(x_i; l(Q)) at the tensor quadrature nodes.
// Computing it once lets every q, the Orlicz endpoint and stability reruns
// share the expensive gradient sweeps.
struct CubeVerticalData {
  Cube cube;
  std::vector<double> node_v;
  std::vector<double> weight;  // normalized cube-mean weights
};

std::vector<CubeVerticalData> sweep_vertical(const GradField& grad, const CubeSweep& sweep,
                                             int M, int nodes_per_axis = 32);

double star2_q_from(std::span<const CubeVerticalData> data, const GrowthFunction& w,
                    double q);
double star2_exp_from(std::span<const CubeVerticalData> data, const GrowthFunction& w);

double star2_q(const GradField& grad, const GrowthFunction& w, double q,
               const CubeSweep& sweep, int M);
double star2_exp(const GradField& grad, const GrowthFunction& w, const CubeSweep& sweep,
                 int M);

// sup over a log-in-t lattice of t |grad u(x,t)| / w(t)
double star2_inf(const GradField& grad, const GrowthFunction& w, int dim,
                 double box = 32.0, double t_min = 1e-5, double t_max = 64.0,
                 int nx = 65, int nt = 161);

// Luxemburg norm on weighted samples: inf{ tau : sum w (e^{|v|/tau}-1)/sum w <= 1 }
double luxemburg_norm(std::span<const double> values, std::span<const double> weights = {});
// callback version over a cube with tensor Gauss nodes
double luxemburg_norm(const std::function<double(std::span<const double>)>& g,
                      const Cube& Q, int order = 32);

}  // namespace halfspace
