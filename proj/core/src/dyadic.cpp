#include "halfspace/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "halfspace/quadrature.hpp"
#include "halfspace/seminorms.hpp"

namespace halfspace {

DyadicCube DyadicCube::parent() const {
  if (level == 0) throw std::invalid_argument("DyadicCube: the root has no parent");
  DyadicCube p = *this;
  p.level = level - 1;
  p.ix = ix >> 1;
  p.iy = iy >> 1;
  return p;
}

std::size_t DyadicLattice::cell_count() const {
  const std::size_t n = static_cast<std::size_t>(per_axis());
  return dim == 1 ? n : n * n;
}

double DyadicLattice::cell_measure() const {
  const double w = cell_width();
  return dim == 1 ? w : w * w;
}

double& DyadicLattice::at(std::int64_t ix, std::int64_t iy) {
  return cell[static_cast<std::size_t>(ix) +
              (dim == 2 ? static_cast<std::size_t>(per_axis()) * iy : 0)];
}

double DyadicLattice::at(std::int64_t ix, std::int64_t iy) const {
  return cell[static_cast<std::size_t>(ix) +
              (dim == 2 ? static_cast<std::size_t>(per_axis()) * iy : 0)];
}

std::vector<double> DyadicLattice::cube_lo(const DyadicCube& Q) const {
  const double s = cube_side(Q);
  std::vector<double> out = {lo[0] + Q.ix * s};
  if (dim == 2) out.push_back(lo[1] + Q.iy * s);
  return out;
}

std::size_t DyadicLattice::cube_cell_count(const DyadicCube& Q) const {
  const std::size_t n = static_cast<std::size_t>(cells_per_axis(Q));
  return dim == 1 ? n : n * n;
}

bool DyadicLattice::contains(const DyadicCube& Q, std::span<const double> x) const {
  const auto l = cube_lo(Q);
  const double s = cube_side(Q);
  for (int d = 0; d < dim; ++d) {
    if (x[d] < l[d] || x[d] >= l[d] + s) return false;
  }
  return true;
}

DyadicCube DyadicLattice::cell_containing(std::span<const double> x) const {
  DyadicCube c;
  c.dim = dim;
  c.level = levels;
  const double w = cell_width();
  c.ix = static_cast<std::int64_t>(std::floor((x[0] - lo[0]) / w));
  if (c.ix < 0 || c.ix >= per_axis())
    throw std::invalid_argument("DyadicLattice: point outside the root cube");
  if (dim == 2) {
    c.iy = static_cast<std::int64_t>(std::floor((x[1] - lo[1]) / w));
    if (c.iy < 0 || c.iy >= per_axis())
      throw std::invalid_argument("DyadicLattice: point outside the root cube");
  }
  return c;
}

DyadicLattice make_lattice(int dim, std::vector<double> lo, double side, int levels) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("make_lattice: dim must be 1 or 2");
  if (!(side > 0.0)) throw std::invalid_argument("make_lattice: side must be positive");
  if (levels < 1 || levels > (dim == 1 ? 22 : 11))
    throw std::invalid_argument("make_lattice: resolution out of range");
  DyadicLattice lat;
  lat.dim = dim;
  lat.lo = std::move(lo);
  lat.side = side;
  lat.levels = levels;
  lat.cell.assign(lat.cell_count(), 0.0);
  return lat;
}

void fill_from_point(DyadicLattice& lat,
                     const std::function<double(std::span<const double>)>& f, int order) {
  const GaussRule& g = gauss_rule(order);
  const double w = lat.cell_width();
  const std::int64_t n = lat.per_axis();
  if (lat.dim == 1) {
    for (std::int64_t i = 0; i < n; ++i) {
      const double a = lat.lo[0] + i * w;
      double acc = 0.0;
      for (int k = 0; k < order; ++k) {
        const double x[1] = {a + 0.5 * w * (1.0 + g.node[k])};
        acc += 0.5 * g.weight[k] * f(x);
      }
      lat.at(i) = acc;
    }
  } else {
    for (std::int64_t j = 0; j < n; ++j) {
      for (std::int64_t i = 0; i < n; ++i) {
        const double a = lat.lo[0] + i * w, b = lat.lo[1] + j * w;
        double acc = 0.0;
        for (int k = 0; k < order; ++k) {
          for (int l = 0; l < order; ++l) {
            const double x[2] = {a + 0.5 * w * (1.0 + g.node[k]),
                                 b + 0.5 * w * (1.0 + g.node[l])};
            acc += 0.25 * g.weight[k] * g.weight[l] * f(x);
          }
        }
        lat.at(i, j) = acc;
      }
    }
  }
}

void fill_from_cell_mean(
    DyadicLattice& lat,
    const std::function<double(std::span<const double>, std::span<const double>)>& mean) {
  const double w = lat.cell_width();
  const std::int64_t n = lat.per_axis();
  if (lat.dim == 1) {
    for (std::int64_t i = 0; i < n; ++i) {
      const double a[1] = {lat.lo[0] + i * w};
      const double b[1] = {lat.lo[0] + (i + 1) * w};
      lat.at(i) = mean(a, b);
    }
  } else {
    for (std::int64_t j = 0; j < n; ++j) {
      for (std::int64_t i = 0; i < n; ++i) {
        const double a[2] = {lat.lo[0] + i * w, lat.lo[1] + j * w};
        const double b[2] = {lat.lo[0] + (i + 1) * w, lat.lo[1] + (j + 1) * w};
        lat.at(i, j) = mean(a, b);
      }
    }
  }
}

std::vector<DyadicCube> dyadic_children(const DyadicCube& Q) {
  std::vector<DyadicCube> out;
  DyadicCube c = Q;
  c.level = Q.level + 1;
  if (Q.dim == 1) {
    for (int i = 0; i < 2; ++i) {
      c.ix = 2 * Q.ix + i;
      out.push_back(c);
    }
  } else {
    for (int j = 0; j < 2; ++j) {
      for (int i = 0; i < 2; ++i) {
        c.ix = 2 * Q.ix + i;
        c.iy = 2 * Q.iy + j;
        out.push_back(c);
      }
    }
  }
  return out;
}

std::vector<DyadicCube> all_cubes_to_depth(const DyadicLattice& lat, int max_depth) {
  const int depth = std::min(max_depth, lat.levels);
  std::vector<DyadicCube> out;
  for (int l = 0; l <= depth; ++l) {
    const std::int64_t n = std::int64_t(1) << l;
    DyadicCube Q;
    Q.dim = lat.dim;
    Q.level = l;
    if (lat.dim == 1) {
      for (std::int64_t i = 0; i < n; ++i) {
        Q.ix = i;
        out.push_back(Q);
      }
    } else {
      for (std::int64_t j = 0; j < n; ++j) {
        for (std::int64_t i = 0; i < n; ++i) {
          Q.ix = i;
          Q.iy = j;
          out.push_back(Q);
        }
      }
    }
  }
  return out;
}

namespace {

// sum of cells over a cube (direct; cubes are processed rarely enough that
// prefix tables are not worth the memory for 2D lattices)
double cube_sum(const DyadicLattice& lat, const DyadicCube& Q,
                const std::function<double(double)>& transform = nullptr) {
  const std::int64_t m = lat.cells_per_axis(Q);
  const std::int64_t x0 = Q.ix * m;
  double acc = 0.0;
  if (lat.dim == 1) {
    for (std::int64_t i = 0; i < m; ++i) {
      const double v = lat.at(x0 + i);
      acc += transform ? transform(v) : v;
    }
  } else {
    const std::int64_t y0 = Q.iy * m;
    for (std::int64_t j = 0; j < m; ++j) {
      for (std::int64_t i = 0; i < m; ++i) {
        const double v = lat.at(x0 + i, y0 + j);
        acc += transform ? transform(v) : v;
      }
    }
  }
  return acc;
}

double cube_mean_lattice(const DyadicLattice& lat, const DyadicCube& Q,
                         const std::function<double(double)>& transform = nullptr) {
  return cube_sum(lat, Q, transform) / double(lat.cube_cell_count(Q));
}

}  // namespace

double dyadic_maximal(const DyadicLattice& f, std::span<const double> x) {
  DyadicCube c = f.cell_containing(x);
  double best = 0.0;
  DyadicCube Q = c;
  while (true) {
    best = std::max(best, cube_mean_lattice(f, Q, [](double v) { return std::abs(v); }));
    if (Q.level == 0) break;
    Q = Q.parent();
  }
  return best;
}

std::vector<DyadicCube> stopping_decomposition(const DyadicLattice& mask, double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("stopping_decomposition: beta must lie in (0,1)");
  DyadicCube root;
  root.dim = mask.dim;
  const double root_density = cube_mean_lattice(mask, root);
  if (!(root_density < beta))
    throw std::invalid_argument(
        "stopping_decomposition: root density must stay below the threshold");
  std::vector<DyadicCube> out;
  std::vector<DyadicCube> stack = {root};
  while (!stack.empty()) {
    const DyadicCube Q = stack.back();
    stack.pop_back();
    if (Q.level == mask.levels) continue;  // cells with density <= beta stop here
    for (const DyadicCube& ch : dyadic_children(Q)) {
      const double d = cube_mean_lattice(mask, ch);
      if (d > beta) {
        out.push_back(ch);
      } else if (ch.level < mask.levels) {
        stack.push_back(ch);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const DyadicCube& a, const DyadicCube& b) {
    return std::tie(a.level, a.iy, a.ix) < std::tie(b.level, b.iy, b.ix);
  });
  return out;
}

std::string stopping_cubes_json(const DyadicLattice& lat,
                                std::span<const DyadicCube> cubes) {
  std::string out = "[";
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const auto lo = lat.cube_lo(cubes[i]);
    const double s = lat.cube_side(cubes[i]);
    out += i ? ", " : "";
    out += "{\"level\": " + std::to_string(cubes[i].level) + ", \"interval\": [[";
    for (std::size_t d = 0; d < lo.size(); ++d) {
      out += (d ? ", " : "") + format_double(lo[d]);
    }
    out += "], [";
    for (std::size_t d = 0; d < lo.size(); ++d) {
      out += (d ? ", " : "") + format_double(lo[d] + s);
    }
    out += "]]}";
  }
  out += "]";
  return out;
}

std::pair<double, double> family_at(const PairFamily& fam, const DyadicLattice& lat,
                                    const DyadicCube& Q, std::span<const double> x) {
  if (!lat.contains(Q, x))
    throw std::invalid_argument("family_at: point outside the cube");
  std::vector<double> G, H;
  fam.values(Q, G, H);
  const DyadicCube c = lat.cell_containing(x);
  const std::int64_t m = lat.cells_per_axis(Q);
  const std::int64_t ix = c.ix - Q.ix * m;
  const std::int64_t iy = lat.dim == 2 ? c.iy - Q.iy * m : 0;
  const std::size_t idx = static_cast<std::size_t>(ix) +
                          (lat.dim == 2 ? static_cast<std::size_t>(m) * iy : 0);
  return {G[idx], H[idx]};
}

JnProfile jn_profile(const PairFamily& fam, const DyadicLattice& lat, double alpha,
                     std::span<const double> t_grid, int max_depth) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("jn_profile: alpha must lie in (0,1)");
  JnProfile prof;
  prof.t_grid.assign(t_grid.begin(), t_grid.end());
  prof.xi.assign(t_grid.size(), 0.0);

  std::vector<double> G, H;
  for (const DyadicCube& Q : all_cubes_to_depth(lat, max_depth)) {
    fam.values(Q, G, H);
    const std::size_t N = G.size();
    // quantile threshold of H over the cube
    std::vector<double> h = H;
    std::sort(h.begin(), h.end(), std::greater<double>());
    const std::size_t k = std::min(N - 1, static_cast<std::size_t>(alpha * N));
    prof.m_alpha = std::max(prof.m_alpha, h[k]);
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
      std::size_t cnt = 0;
      for (double g : G) cnt += g > t_grid[ti] ? 1 : 0;
      prof.xi[ti] = std::max(prof.xi[ti], double(cnt) / double(N));
    }
  }
  prof.bound_holds = true;
  prof.worst_margin = std::numeric_limits<double>::infinity();
  const double rate = std::log(1.0 / alpha);
  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    const double bound =
        (1.0 / alpha) * std::exp(-rate * prof.t_grid[ti] / std::max(prof.m_alpha, 1e-300));
    if (prof.xi[ti] > bound) prof.bound_holds = false;
    if (prof.xi[ti] > 0.0) prof.worst_margin = std::min(prof.worst_margin, bound / prof.xi[ti]);
  }
  return prof;
}

BmoFamily bmo_family(const DyadicLattice& f, double alpha, int max_depth) {
  BmoFamily out;
  const double factor = std::ldexp(1.0, f.dim);  // 2^{n-1} with n-1 = dim
  auto lat = std::make_shared<DyadicLattice>(f);

  out.family.label = "bmo";
  out.family.values = [lat, factor](const DyadicCube& Q, std::vector<double>& G,
                                    std::vector<double>& H) {
    const DyadicLattice& l = *lat;
    const std::int64_t m = l.cells_per_axis(Q);
    const std::size_t N = l.cube_cell_count(Q);
    G.resize(N);
    H.resize(N);
    const double fQ = cube_mean_lattice(l, Q);
    // |f - f_Q| per cell of Q, row-major
    const std::int64_t x0 = Q.ix * m, y0 = l.dim == 2 ? Q.iy * m : 0;
    for (std::int64_t j = 0; j < (l.dim == 2 ? m : 1); ++j) {
      for (std::int64_t i = 0; i < m; ++i) {
        G[static_cast<std::size_t>(i) + static_cast<std::size_t>(m) * j] =
            std::abs(l.at(x0 + i, y0 + j) - fQ);
      }
    }
    // localized maximal function of |f - f_Q| within Q: bottom-up subtree
    // sums, then a top-down running maximum of the subtree means
    const int depth = l.levels - Q.level;
    if (l.dim == 1) {
      std::vector<double> sums = G;
      std::vector<std::vector<double>> level_sums(depth + 1);
      level_sums[depth] = sums;
      for (int d = depth; d > 0; --d) {
        const std::size_t n = level_sums[d].size();
        std::vector<double> up(n / 2);
        for (std::size_t i = 0; i < n / 2; ++i) {
          up[i] = level_sums[d][2 * i] + level_sums[d][2 * i + 1];
        }
        level_sums[d - 1] = std::move(up);
      }
      for (std::size_t c = 0; c < N; ++c) {
        double best = 0.0;
        std::size_t idx = c;
        for (int d = depth; d >= 0; --d) {
          const double cells_here = std::ldexp(1.0, depth - d);
          best = std::max(best, level_sums[d][idx] / cells_here);
          idx >>= 1;
        }
        H[c] = factor * best;
      }
    } else {
      const int dd = depth;
      std::vector<std::vector<double>> level_sums(dd + 1);
      level_sums[dd] = G;
      for (int d = dd; d > 0; --d) {
        const std::int64_t n = std::int64_t(1) << d;         // cells per axis at depth d
        const std::int64_t nh = n >> 1;
        std::vector<double> up(static_cast<std::size_t>(nh) * nh);
        for (std::int64_t j = 0; j < nh; ++j) {
          for (std::int64_t i = 0; i < nh; ++i) {
            const auto& cur = level_sums[d];
            up[static_cast<std::size_t>(i) + static_cast<std::size_t>(nh) * j] =
                cur[2 * i + static_cast<std::size_t>(n) * (2 * j)] +
                cur[2 * i + 1 + static_cast<std::size_t>(n) * (2 * j)] +
                cur[2 * i + static_cast<std::size_t>(n) * (2 * j + 1)] +
                cur[2 * i + 1 + static_cast<std::size_t>(n) * (2 * j + 1)];
          }
        }
        level_sums[d - 1] = std::move(up);
      }
      for (std::int64_t j = 0; j < m; ++j) {
        for (std::int64_t i = 0; i < m; ++i) {
          double best = 0.0;
          std::int64_t ci = i, cj = j;
          for (int d = dd; d >= 0; --d) {
            const std::int64_t n = std::int64_t(1) << d;
            const double cells_here = std::ldexp(1.0, 2 * (dd - d));
            best = std::max(best,
                            level_sums[d][static_cast<std::size_t>(ci) +
                                          static_cast<std::size_t>(n) * cj] /
                                cells_here);
            ci >>= 1;
            cj >>= 1;
          }
          H[static_cast<std::size_t>(i) + static_cast<std::size_t>(m) * j] = factor * best;
        }
      }
    }
  };

  for (const DyadicCube& Q : all_cubes_to_depth(f, max_depth)) {
    const double fQ = cube_mean_lattice(f, Q);
    const double osc =
        cube_mean_lattice(f, Q, [fQ](double v) { return std::abs(v - fQ); });
    out.dyadic_norm = std::max(out.dyadic_norm, osc);
  }
  out.m_alpha_bound = factor * out.dyadic_norm / alpha;
  return out;
}

PairFamily conical_family(const GradField& grad, const GrowthFunction& phi,
                          const DyadicLattice& geometry, int M) {
  PairFamily fam;
  fam.label = "conical";
  auto lat = std::make_shared<DyadicLattice>(geometry);
  const double kappa_wide = 1.0 + 2.0 * std::sqrt(double(geometry.dim));
  fam.values = [lat, grad, phi, M, kappa_wide](const DyadicCube& Q, std::vector<double>& G,
                                               std::vector<double>& H) {
    const DyadicLattice& l = *lat;
    const std::int64_t m = l.cells_per_axis(Q);
    const std::size_t N = l.cube_cell_count(Q);
    G.resize(N);
    H.resize(N);
    const double s = l.cube_side(Q);
    const double scale = phi(s);
    const auto qlo = l.cube_lo(Q);
    const double w = l.cell_width();
    for (std::int64_t j = 0; j < (l.dim == 2 ? m : 1); ++j) {
      for (std::int64_t i = 0; i < m; ++i) {
        ConeSpec narrow, wide;
        narrow.vertex = {qlo[0] + (i + 0.5) * w};
        if (l.dim == 2) narrow.vertex.push_back(qlo[1] + (j + 0.5) * w);
        wide.vertex = narrow.vertex;
        narrow.aperture = 1.0;
        wide.aperture = kappa_wide;
        const std::size_t idx =
            static_cast<std::size_t>(i) + (l.dim == 2 ? static_cast<std::size_t>(m) * j : 0);
        G[idx] = conical_square(grad, narrow, s, M) / scale;
        H[idx] = conical_square(grad, wide, s, M) / scale;
      }
    }
  };
  return fam;
}

OrliczReport orlicz_conclusions(const PairFamily& fam, const DyadicLattice& lat,
                                double alpha, double q, double m_alpha, int max_depth) {
  OrliczReport rep;
  const double rate = std::log(1.0 / alpha);
  const double lq_bound =
      std::pow(std::tgamma(q + 1.0), 1.0 / q) * std::pow(alpha, -1.0 / q) * m_alpha / rate;
  const double exp_bound = (1.0 + 1.0 / alpha) / rate * m_alpha;
  std::vector<double> G, H;
  for (const DyadicCube& Q : all_cubes_to_depth(lat, max_depth)) {
    fam.values(Q, G, H);
    double mq = 0.0;
    for (double g : G) mq += std::pow(g, q);
    mq = std::pow(mq / double(G.size()), 1.0 / q);
    rep.lq_worst = std::max(rep.lq_worst, mq / lq_bound);
    const double lux = luxemburg_norm(G);
    rep.exp_worst = std::max(rep.exp_worst, lux / exp_bound);
  }
  rep.lq_ok = rep.lq_worst <= 1.0 + 1e-9;
  rep.exp_ok = rep.exp_worst <= 1.0 + 1e-9;
  return rep;
}

}  // namespace halfspace
