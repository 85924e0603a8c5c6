#include "halfspace/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace halfspace {

namespace {

GaussRule make_rule(int m) {
  GaussRule r;
  r.node.resize(m);
  r.weight.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    // Chebyshev initial guess, Newton on P_m.
    double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = m * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.node[i] = -x;
    r.node[m - 1 - i] = x;
    r.weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weight[m - 1 - i] = r.weight[i];
  }
  return r;
}

}  // namespace

const GaussRule& gauss_rule(int order) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
  return it->second;
}

double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  if (n == 1) return v[0];
  if (n == 2) return v[0] + v[1];
  const std::size_t half = n / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int order) {
  const GaussRule& g = gauss_rule(order);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(panels) * order);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (int i = 0; i < order; ++i) {
      terms.push_back(0.5 * h * g.weight[i] * f(mid + 0.5 * h * g.node[i]));
    }
  }
  return pairwise_sum(terms);
}

namespace {

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double whole, double abstol, int order, int depth) {
  const double m = 0.5 * (a + b);
  const double left = integrate_panels(f, a, m, 1, order);
  const double right = integrate_panels(f, m, b, 1, order);
  const double delta = left + right - whole;
  if (std::abs(delta) <= abstol || depth <= 0) return left + right;
  return adaptive_rec(f, a, m, left, 0.5 * abstol, order, depth - 1) +
         adaptive_rec(f, m, b, right, 0.5 * abstol, order, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abstol, int order, int max_depth) {
  const double whole = integrate_panels(f, a, b, 1, order);
  return adaptive_rec(f, a, b, whole, abstol, order, max_depth);
}

double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double rtol, int max_level) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double umax = 3.5;
  auto term = [&](double u) {
    const double sh = 0.5 * M_PI * std::sinh(u);
    const double x = mid + half * std::tanh(sh);
    const double w = 0.5 * M_PI * std::cosh(u) / (std::cosh(sh) * std::cosh(sh));
    return w * f(x);
  };
  double h = umax / 4.0;
  std::vector<double> terms;
  for (int i = -4; i <= 4; ++i) terms.push_back(term(i * h));
  double value = half * h * pairwise_sum(terms);
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    std::vector<double> extra;
    const int count = (int)std::floor(umax / h);
    for (int i = -count; i <= count; ++i) {
      if (i % 2 != 0) extra.push_back(term(i * h));
    }
    const double refined = 0.5 * value + half * h * pairwise_sum(extra);
    const double change = std::abs(refined - value);
    value = refined;
    if (change <= rtol * std::max(1e-300, std::abs(value)) && level >= 3) break;
  }
  return value;
}

double integrate_with_breakpoints(const std::function<double(double)>& f, double a,
                                  double b, std::span<const double> breakpoints,
                                  int order) {
  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  auto on_break = [&](double x) {
    for (double c : breakpoints) {
      if (std::abs(x - c) <= 1e-12 * std::max(1.0, std::abs(c))) return true;
    }
    return false;
  };
  std::vector<double> parts;
  parts.reserve(cuts.size() - 1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (on_break(cuts[i]) || on_break(cuts[i + 1])) {
      parts.push_back(integrate_tanh_sinh(f, cuts[i], cuts[i + 1]));
    } else {
      parts.push_back(integrate_panels(f, cuts[i], cuts[i + 1], 1, order));
    }
  }
  return pairwise_sum(parts);
}

namespace {

OctaveResult octave_loop(const std::function<double(double)>& f, double c, double rtol,
                         int max_octaves, int order, bool down,
                         std::span<const double> breakpoints) {
  std::vector<double> increments;
  increments.reserve(max_octaves);
  double prev_inc = 0.0;
  double prev_est = 0.0;
  double last_tail = 0.0;
  bool have_est = false;
  bool contracting = false;
  int stable = 0;
  for (int k = 0; k < max_octaves; ++k) {
    double lo, hi;
    if (down) {
      lo = c * std::ldexp(1.0, -k - 1);
      hi = c * std::ldexp(1.0, -k);
    } else {
      lo = c * std::ldexp(1.0, k);
      hi = c * std::ldexp(1.0, k + 1);
    }
    const double inc = integrate_with_breakpoints(f, lo, hi, breakpoints, order);
    increments.push_back(inc);
    const double total = pairwise_sum(increments);

    // Geometric remainder from the measured octave ratio; only trusted while
    // the ratio is safely below 1.
    double tail = 0.0;
    contracting = false;
    if (k >= 1) {
      if (inc == 0.0) {
        contracting = true;
      } else if (std::abs(prev_inc) > 0.0) {
        const double r = std::abs(inc) / std::abs(prev_inc);
        if (r < 0.98) {
          tail = (inc >= 0 ? 1.0 : -1.0) * std::abs(inc) * r / (1.0 - r);
          contracting = true;
        }
      }
    }
    const double est = total + tail;
    if (have_est) {
      const double scale = std::max(std::abs(est), std::abs(prev_est));
      if (scale == 0.0 || std::abs(est - prev_est) <= rtol * scale) {
        ++stable;
        if (stable >= 2) {
          OctaveResult res;
          res.value = est;
          res.tail_estimate = tail;
          res.octaves = k + 1;
          return res;
        }
      } else {
        stable = 0;
      }
    }
    prev_inc = inc;
    prev_est = est;
    last_tail = tail;
    have_est = true;
  }
  if (contracting) {
    // Increments still shrink geometrically: the integral converges, merely
    // slower than rtol within the octave budget. Return the extrapolated
    // value instead of mistaking slow convergence for divergence.
    OctaveResult res;
    res.value = prev_est;
    res.tail_estimate = last_tail;
    res.octaves = max_octaves;
    return res;
  }
  throw divergence_error("octave increments do not contract within octave budget");
}

}  // namespace

OctaveResult octave_integral_down(const std::function<double(double)>& f, double c,
                                  double rtol, int max_octaves, int order,
                                  std::span<const double> breakpoints) {
  return octave_loop(f, c, rtol, max_octaves, order, true, breakpoints);
}

OctaveResult octave_integral_up(const std::function<double(double)>& f, double c,
                                double rtol, int max_octaves, int order,
                                std::span<const double> breakpoints) {
  return octave_loop(f, c, rtol, max_octaves, order, false, breakpoints);
}

}  // namespace halfspace
