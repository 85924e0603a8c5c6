#include "halfspace/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "halfspace/quadrature.hpp"

namespace halfspace {

namespace {

// tensor product Gauss nodes over a cube; weights normalized to mean weights
void cube_nodes(const Cube& Q, int order, std::vector<std::vector<double>>& pts,
                std::vector<double>& w) {
  const GaussRule& g = gauss_rule(order);
  pts.clear();
  w.clear();
  if (Q.dim == 1) {
    pts.reserve(order);
    for (int i = 0; i < order; ++i) {
      pts.push_back({Q.lo[0] + 0.5 * Q.side * (1.0 + g.node[i])});
      w.push_back(0.5 * g.weight[i]);
    }
  } else if (Q.dim == 2) {
    pts.reserve(static_cast<std::size_t>(order) * order);
    for (int i = 0; i < order; ++i) {
      for (int j = 0; j < order; ++j) {
        pts.push_back({Q.lo[0] + 0.5 * Q.side * (1.0 + g.node[i]),
                       Q.lo[1] + 0.5 * Q.side * (1.0 + g.node[j])});
        w.push_back(0.25 * g.weight[i] * g.weight[j]);
      }
    }
  } else {
    throw std::invalid_argument("cube_nodes: dim must be 1 or 2");
  }
}

}  // namespace

std::vector<Cube> CubeSweep::cubes() const {
  std::vector<Cube> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int k = std::max(0, level_min); k <= level_max; ++k) {
    const double side = root_side * std::ldexp(1.0, -k);
    const double play = root_side - side;
    auto push = [&](std::span<const double> frac) {
      Cube Q;
      Q.dim = dim;
      Q.side = side;
      for (int d = 0; d < dim; ++d) Q.lo.push_back(root_lo[d] + frac[d] * play);
      out.push_back(std::move(Q));
    };
    if (dim == 1) {
      for (int i = 0; i < lattice_per_level; ++i) {
        const double f = lattice_per_level == 1 ? 0.5 : double(i) / (lattice_per_level - 1);
        push(std::span<const double>(&f, 1));
      }
      for (int i = 0; i < random_per_level; ++i) {
        const double f = uni(rng);
        push(std::span<const double>(&f, 1));
      }
    } else {
      for (int i = 0; i < lattice_per_level; ++i) {
        for (int j = 0; j < lattice_per_level; ++j) {
          const double f[2] = {
              lattice_per_level == 1 ? 0.5 : double(i) / (lattice_per_level - 1),
              lattice_per_level == 1 ? 0.5 : double(j) / (lattice_per_level - 1)};
          push(f);
        }
      }
      for (int i = 0; i < random_per_level; ++i) {
        const double f[2] = {uni(rng), uni(rng)};
        push(f);
      }
    }
  }
  return out;
}

CubeSweep CubeSweep::doubled() const {
  CubeSweep s = *this;
  s.lattice_per_level *= 2;
  s.random_per_level *= 2;
  s.seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  return s;
}

VecC cube_mean(const BoundaryField& f, const Cube& Q, int M, int order) {
  std::vector<std::vector<double>> pts;
  std::vector<double> w;
  cube_nodes(Q, order, pts, w);
  VecC acc = VecC::Zero(M);
  for (std::size_t i = 0; i < pts.size(); ++i) acc += w[i] * f(pts[i]);
  return acc;
}

double osc_p(const BoundaryField& f, int M, double p, double r, const CubeSweep& sweep) {
  if (p < 1.0) throw std::invalid_argument("osc_p: p must be >= 1");
  if (!(r > 0.0)) throw std::invalid_argument("osc_p: scale must be positive");
  double best = 0.0;
  std::vector<std::vector<double>> pts;
  std::vector<double> w;
  for (const Cube& Q : sweep.cubes()) {
    if (Q.side > r) continue;
    cube_nodes(Q, 32, pts, w);
    std::vector<VecC> vals;
    vals.reserve(pts.size());
    for (const auto& x : pts) vals.push_back(f(x));
    VecC mean = VecC::Zero(M);
    for (std::size_t i = 0; i < vals.size(); ++i) mean += w[i] * vals[i];
    double osc = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      osc += w[i] * std::pow((vals[i] - mean).norm(), p);
    }
    best = std::max(best, std::pow(osc, 1.0 / p));
  }
  return best;
}

namespace {

struct PairEval {
  double ratio;
  std::vector<double> x, y;
};

}  // namespace

SemiNormEstimate holder_seminorm(const BoundaryField& f, int dim, const GrowthFunction& w,
                                 int pair_budget, std::uint64_t seed, double box) {
  SemiNormEstimate est;
  auto consider = [&](std::span<const double> a, std::span<const double> b) {
    double d2 = 0.0;
    for (int i = 0; i < dim; ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    const double dist = std::sqrt(d2);
    if (dist < 1e-300) return;
    const double den = w(dist);
    if (!(den > 0.0)) return;
    const double ratio = (f(a) - f(b)).norm() / den;
    if (ratio > est.value) {
      est.value = ratio;
      est.witness_x.assign(a.begin(), a.end());
      est.witness_y.assign(b.begin(), b.end());
    }
  };

  // structured pairs: dyadic separations along each axis from coarse anchors
  int used = 0;
  for (int j = -20; j <= 20 && used < pair_budget / 2; ++j) {
    const double h = std::ldexp(1.0, j);
    if (h > 2.0 * box) continue;
    for (int a = 0; a < 8 && used < pair_budget / 2; ++a) {
      std::vector<double> p(dim, 0.0), q(dim, 0.0);
      const double base = -box + (2.0 * box) * (a + 0.5) / 8.0;
      for (int d = 0; d < dim; ++d) {
        p[d] = base;
        q[d] = base;
      }
      for (int d = 0; d < dim; ++d) {
        q[d] = p[d] + h;
        consider(p, q);
        q[d] = p[d];
        ++used;
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-box, box);
  std::uniform_real_distribution<double> logsep(-20.0, std::log2(box));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (; used < pair_budget; ++used) {
    std::vector<double> p(dim), q(dim);
    for (int d = 0; d < dim; ++d) p[d] = uni(rng);
    const double h = std::exp2(logsep(rng));
    if (dim == 1) {
      q[0] = p[0] + h;
    } else {
      const double th = angle(rng);
      q[0] = p[0] + h * std::cos(th);
      q[1] = p[1] + h * std::sin(th);
    }
    consider(p, q);
  }
  return est;
}

SemiNormEstimate holder_seminorm_halfspace(
    const std::function<VecC(std::span<const double>, double)>& u, int dim,
    const GrowthFunction& w, int pair_budget, std::uint64_t seed, double box,
    double t_min, double t_max) {
  SemiNormEstimate est;
  auto consider = [&](std::span<const double> a, double ta, std::span<const double> b,
                      double tb) {
    double d2 = (ta - tb) * (ta - tb);
    for (int i = 0; i < dim; ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    const double dist = std::sqrt(d2);
    if (dist < 1e-300) return;
    const double den = w(dist);
    if (!(den > 0.0)) return;
    const double ratio = (u(a, ta) - u(b, tb)).norm() / den;
    if (ratio > est.value) {
      est.value = ratio;
      est.witness_x.assign(a.begin(), a.end());
      est.witness_x.push_back(ta);
      est.witness_y.assign(b.begin(), b.end());
      est.witness_y.push_back(tb);
    }
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-box, box);
  const double lt_min = std::log(t_min), lt_max = std::log(t_max);
  std::uniform_real_distribution<double> logt(lt_min, lt_max);
  std::uniform_real_distribution<double> logsep(-20.0, std::log2(box));
  std::uniform_real_distribution<double> pick(0.0, 1.0);

  // structured: vertical pairs (same x, dyadic height ratios) and horizontal
  // pairs at matched heights
  int used = 0;
  for (int j = -16; j <= 4 && used < pair_budget / 3; ++j) {
    const double h = std::ldexp(1.0, j);
    for (int a = 0; a < 6; ++a) {
      std::vector<double> p(dim, 0.0);
      p[0] = -box + (2.0 * box) * (a + 0.5) / 6.0;
      const double t0 = std::max(t_min, h);
      consider(p, t0, p, std::min(t_max, t0 + h));
      std::vector<double> q = p;
      q[0] += h;
      consider(p, t0, q, t0);
      used += 2;
    }
  }
  for (; used < pair_budget; ++used) {
    std::vector<double> p(dim), q(dim);
    for (int d = 0; d < dim; ++d) p[d] = uni(rng);
    q = p;
    const double ta = std::exp(logt(rng));
    const double h = std::exp2(logsep(rng));
    double tb = ta;
    if (pick(rng) < 0.5) {
      tb = std::min(t_max, ta + h);
    } else {
      q[0] += h;
    }
    consider(p, ta, q, tb);
  }
  return est;
}

SemiNormEstimate morrey_campanato_seminorm(const BoundaryField& f, int M,
                                           const GrowthFunction& w, double p,
                                           const CubeSweep& sweep) {
  if (p < 1.0) throw std::invalid_argument("morrey_campanato_seminorm: p must be >= 1");
  SemiNormEstimate est;
  std::vector<std::vector<double>> pts;
  std::vector<double> wts;
  for (const Cube& Q : sweep.cubes()) {
    cube_nodes(Q, 32, pts, wts);
    std::vector<VecC> vals;
    vals.reserve(pts.size());
    for (const auto& x : pts) vals.push_back(f(x));
    VecC mean = VecC::Zero(M);
    for (std::size_t i = 0; i < vals.size(); ++i) mean += wts[i] * vals[i];
    double osc = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      osc += wts[i] * std::pow((vals[i] - mean).norm(), p);
    }
    const double ratio = std::pow(osc, 1.0 / p) / w(Q.side);
    if (ratio > est.value) {
      est.value = ratio;
      est.witness_cube = Q;
    }
  }
  return est;
}

std::vector<CubeVerticalData> sweep_vertical(const GradField& grad, const CubeSweep& sweep,
                                             int M, int nodes_per_axis) {
  std::vector<CubeVerticalData> out;
  std::vector<std::vector<double>> pts;
  std::vector<double> w;
  for (const Cube& Q : sweep.cubes()) {
    cube_nodes(Q, nodes_per_axis, pts, w);
    CubeVerticalData d;
    d.cube = Q;
    d.weight = w;
    d.node_v.reserve(pts.size());
    for (const auto& x : pts) {
      d.node_v.push_back(vertical_square(grad, x, Q.side, Q.dim, M));
    }
    out.push_back(std::move(d));
  }
  return out;
}

double star2_q_from(std::span<const CubeVerticalData> data, const GrowthFunction& w,
                    double q) {
  if (!(q > 0.0)) throw std::invalid_argument("star2_q: q must be positive");
  double best = 0.0;
  for (const auto& d : data) {
    double m = 0.0;
    for (std::size_t i = 0; i < d.node_v.size(); ++i) {
      m += d.weight[i] * std::pow(d.node_v[i], q);
    }
    best = std::max(best, std::pow(m, 1.0 / q) / w(d.cube.side));
  }
  return best;
}

double star2_exp_from(std::span<const CubeVerticalData> data, const GrowthFunction& w) {
  double best = 0.0;
  for (const auto& d : data) {
    best = std::max(best, luxemburg_norm(d.node_v, d.weight) / w(d.cube.side));
  }
  return best;
}

double star2_q(const GradField& grad, const GrowthFunction& w, double q,
               const CubeSweep& sweep, int M) {
  const auto data = sweep_vertical(grad, sweep, M);
  return star2_q_from(data, w, q);
}

double star2_exp(const GradField& grad, const GrowthFunction& w, const CubeSweep& sweep,
                 int M) {
  const auto data = sweep_vertical(grad, sweep, M);
  return star2_exp_from(data, w);
}

double star2_inf(const GradField& grad, const GrowthFunction& w, int dim, double box,
                 double t_min, double t_max, int nx, int nt) {
  double best = 0.0;
  std::vector<double> x(dim, 0.0);
  for (int it = 0; it < nt; ++it) {
    const double t = t_min * std::pow(t_max / t_min, double(it) / (nt - 1));
    for (int ix = 0; ix < nx; ++ix) {
      x[0] = -box + 2.0 * box * double(ix) / (nx - 1);
      if (dim == 2) x[1] = 0.25 * x[0];
      best = std::max(best, t * grad(x, t).norm() / w(t));
    }
  }
  return best;
}

double luxemburg_norm(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) return 0.0;
  std::vector<double> wts;
  if (weights.empty()) {
    wts.assign(values.size(), 1.0 / values.size());
    weights = wts;
  }
  double wsum = 0.0, mean = 0.0, vmax = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::abs(values[i]);
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    wsum += weights[i];
    mean += weights[i] * v;
    vmax = std::max(vmax, v);
  }
  mean /= wsum;
  if (vmax == 0.0) return 0.0;

  auto phi = [&](double tau) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double e = std::abs(values[i]) / tau;
      if (e > 700.0) return std::numeric_limits<double>::infinity();
      acc += weights[i] * std::expm1(e);
    }
    return acc / wsum - 1.0;
  };

  double lo = mean / std::log(2.0);
  double hi = lo;
  if (phi(lo) <= 0.0) {
    while (phi(lo) <= 0.0 && lo > 1e-300) {
      hi = lo;
      lo *= 0.5;
    }
  } else {
    while (phi(hi) > 0.0 && hi < 1e300) {
      lo = hi;
      hi *= 2.0;
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > 0.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-8 * hi) break;
  }
  return hi;
}

double luxemburg_norm(const std::function<double(std::span<const double>)>& g,
                      const Cube& Q, int order) {
  std::vector<std::vector<double>> pts;
  std::vector<double> w;
  cube_nodes(Q, order, pts, w);
  std::vector<double> vals;
  vals.reserve(pts.size());
  for (const auto& x : pts) vals.push_back(g(x));
  return luxemburg_norm(vals, w);
}

}  // namespace halfspace
