#include "halfspace/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "halfspace/catalog.hpp"
#include "halfspace/dyadic.hpp"
#include "halfspace/extension.hpp"
#include "halfspace/growth.hpp"
#include "halfspace/poisson.hpp"
#include "halfspace/quadrature.hpp"
#include "halfspace/seminorms.hpp"

namespace halfspace {

namespace {

double knob(const LabConfig& cfg, const std::string& name, double dflt) {
  auto it = cfg.knobs.find(name);
  return it == cfg.knobs.end() ? dflt : it->second;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string fmt(double v) { return format_double(v); }

PoissonKernel kernel_for(const LabConfig& cfg) {
  if (cfg.system.kind == "laplacian") return PoissonKernel::closed_form_laplacian(cfg.n);
  return PoissonKernel::spectral(build_system(cfg.system, cfg.n));
}

// uniform-lattice periodic interpolation (Catmull-Rom) of a sampled slice
struct PeriodicSlice {
  double period = 2.0 * M_PI;
  int count = 0;
  int M = 1;
  std::vector<VecC> samples;  // at x = j * period / count

  VecC eval(double x) const {
    const double h = period / count;
    double u = (x / h);
    double base = std::floor(u);
    const double s = u - base;
    auto wrap = [&](long long j) {
      long long m = j % count;
      if (m < 0) m += count;
      return static_cast<std::size_t>(m);
    };
    const long long j0 = static_cast<long long>(base);
    const VecC& pm1 = samples[wrap(j0 - 1)];
    const VecC& p0 = samples[wrap(j0)];
    const VecC& p1 = samples[wrap(j0 + 1)];
    const VecC& p2 = samples[wrap(j0 + 2)];
    // Catmull-Rom weights
    const double s2 = s * s, s3 = s2 * s;
    const double w0 = -0.5 * s3 + s2 - 0.5 * s;
    const double w1 = 1.5 * s3 - 2.5 * s2 + 1.0;
    const double w2 = -1.5 * s3 + 2.0 * s2 + 0.5 * s;
    const double w3 = 0.5 * s3 - 0.5 * s2;
    return VecC(w0 * pm1 + w1 * p0 + w2 * p1 + w3 * p2);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// example 6 machinery
// ---------------------------------------------------------------------------

namespace {

// integral of log over [a,b], a,b >= 1
double log_primitive(double a, double b) {
  auto F = [](double x) { return x * std::log(x) - x; };
  return F(b) - F(a);
}

// integral over [u,v]^2 of |log x - log y|, iterated rule with the inner
// integral in closed form
double log_diag_square(double u, double v) {
  const GaussRule& g = gauss_rule(32);
  double acc = 0.0;
  for (int i = 0; i < 32; ++i) {
    const double y = 0.5 * (u + v) + 0.5 * (v - u) * g.node[i];
    const double inner = (y - u) * std::log(y) - log_primitive(u, y);
    acc += 0.5 * (v - u) * g.weight[i] * inner;
  }
  return 2.0 * acc;
}

// integral over [p,q] x [r,s] (all within the logarithmic branch, >= 1) of
// |log x - log y|: split both at the endpoints of the other; identical pieces
// go through the diagonal rule, disjoint ones are exact
double log_rect(double p, double q, double r, double s) {
  std::vector<double> cx = {p, q}, cy = {r, s};
  for (double c : {r, s}) {
    if (c > p && c < q) cx.push_back(c);
  }
  for (double c : {p, q}) {
    if (c > r && c < s) cy.push_back(c);
  }
  std::sort(cx.begin(), cx.end());
  std::sort(cy.begin(), cy.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cx.size(); ++i) {
    for (std::size_t j = 0; j + 1 < cy.size(); ++j) {
      const double u1 = cx[i], u2 = cx[i + 1];
      const double v1 = cy[j], v2 = cy[j + 1];
      if (u1 == v1 && u2 == v2) {
        acc += log_diag_square(u1, u2);
      } else if (v1 >= u2) {
        // log y - log x throughout
        acc += (u2 - u1) * log_primitive(v1, v2) - (v2 - v1) * log_primitive(u1, u2);
      } else {
        acc += (v2 - v1) * log_primitive(u1, u2) - (u2 - u1) * log_primitive(v1, v2);
      }
    }
  }
  return acc;
}

enum class Branch { zero, log };  // log branch works in |x| coordinates

struct Piece {
  Branch branch;
  double lo, hi;  // in |x| coordinates for the log branch
};

std::vector<Piece> split_interval(double a, double b) {
  std::vector<double> cuts = {a, b};
  for (double c : {-1.0, 1.0}) {
    if (c > a && c < b) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double mid = 0.5 * (lo + hi);
    if (std::abs(mid) <= 1.0) {
      out.push_back({Branch::zero, lo, hi});
    } else if (mid > 1.0) {
      out.push_back({Branch::log, lo, hi});
    } else {
      out.push_back({Branch::log, -hi, -lo});  // mirror to [1, inf)
    }
  }
  return out;
}

}  // namespace

double example6_H_bruteforce(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("example6_H: need a < b");
  const auto pieces = split_interval(a, b);
  double acc = 0.0;
  for (const Piece& I : pieces) {
    for (const Piece& J : pieces) {
      if (I.branch == Branch::zero && J.branch == Branch::zero) continue;
      if (I.branch == Branch::zero) {
        acc += (I.hi - I.lo) * log_primitive(J.lo, J.hi);
      } else if (J.branch == Branch::zero) {
        acc += (J.hi - J.lo) * log_primitive(I.lo, I.hi);
      } else {
        acc += log_rect(I.lo, I.hi, J.lo, J.hi);
      }
    }
  }
  return acc / ((b - a) * (b - a));
}

double example6_G(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("example6_G: lambda must be >= 0");
  if (lambda == 0.0) return 1.0;
  return 1.0 + 2.0 * lambda - 2.0 * lambda * (lambda + 1.0) * std::log1p(1.0 / lambda);
}

double example6_Gtilde(double lambda, double alpha) {
  if (!(lambda > 1.0)) throw std::invalid_argument("example6_Gtilde: lambda must exceed 1");
  return (lambda * std::log(lambda) - lambda + 1.0) / std::pow(lambda - 1.0, 1.0 + alpha);
}

double example6_W_closed(double alpha, double beta, double t) {
  if (t <= 1.0) return std::pow(t, alpha) / alpha;
  const double L = std::log(t);
  return 1.0 / alpha + std::pow(L, beta + 1.0) / (beta + 1.0) + L;
}

double example6_holder_ratio(double alpha, double beta, double x1) {
  auto w = catalog_growth("example6", {{"alpha", alpha}, {"beta", beta}});
  return std::log(x1) / w(x1 - 1.0);
}

// ---------------------------------------------------------------------------
// scenarios
// ---------------------------------------------------------------------------

ScenarioResult scenario_example6(double alpha, double beta, int sample_budget,
                                 std::uint64_t seed) {
  Timer timer;
  ScenarioResult res;
  res.name = "example6";
  bool ok = true;

  auto w = catalog_growth("example6", {{"alpha", alpha}, {"beta", beta}});

  // (i)+(ii) brute-force double mean against the closed form on the
  // logarithmic branch
  CsvTable tabH;
  tabH.name = "H";
  tabH.header = {"a", "b", "H", "G(a/(b-a))", "abs_diff"};
  const std::pair<double, double> case1[] = {{1.0, 2.0}, {2.0, 5.0}, {1.0, 1.5}};
  for (auto [a, b] : case1) {
    const double H = example6_H_bruteforce(a, b);
    const double G = example6_G(a / (b - a));
    tabH.add_row({fmt(a), fmt(b), fmt(H), fmt(G), fmt(std::abs(H - G))});
    if (!(std::abs(H - G) <= 1e-6)) ok = false;
  }
  {
    const double H0 = example6_H_bruteforce(-0.5, 0.5);
    tabH.add_row({fmt(-0.5), fmt(0.5), fmt(H0), "", ""});
    if (H0 != 0.0) ok = false;
  }
  res.tables.push_back(tabH);

  // (iii) sup of H(a,b) / w(b-a) over seeded pairs across scales, with a
  // doubled-budget stability rerun
  auto sup_scan = [&](int budget, std::uint64_t sd) {
    double sup = 0.0;
    auto probe = [&](double a, double b) {
      sup = std::max(sup, example6_H_bruteforce(a, b) / w(b - a));
    };
    // structured probes around the breakpoints of log_+ and across scales,
    // shared by every budget so the doubled rerun differs only in the
    // random tail
    for (int i = 0; i <= 40; ++i) {
      const double len = std::pow(10.0, -3.0 + 6.0 * i / 40.0);
      probe(1.0, 1.0 + len);
      probe(1.0 - 0.5 * len, 1.0 + 0.5 * len);
      probe(-0.5 * len, 0.5 * len);
      probe(len, 2.0 * len);
      probe(-2.0 * len, -len);
      // asymmetric straddles of the flat region maximize the ratio
      for (double gamma : {0.05, 0.1, 0.125, 0.15, 0.25}) {
        probe(-gamma * len, (1.0 - gamma) * len);
        probe(-(1.0 - gamma) * len, gamma * len);
      }
    }
    std::mt19937_64 rng(sd);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < budget; ++i) {
      const double len = std::pow(10.0, 6.0 * uni(rng) - 3.0);
      const double center = (2.0 * uni(rng) - 1.0) * std::pow(10.0, 3.0 * uni(rng));
      probe(center - 0.5 * len, center + 0.5 * len);
    }
    return sup;
  };
  const double sup1 = sup_scan(sample_budget, seed);
  const double sup2 = sup_scan(2 * sample_budget, seed * 2654435761ULL + 1);
  if (!(sup1 <= 10.0 && sup2 <= 10.0)) ok = false;
  if (std::abs(sup1 - sup2) > 0.05 * std::max(sup1, sup2)) ok = false;
  res.notes.emplace_back("sup_ratio", fmt(sup1));
  res.notes.emplace_back("sup_ratio_doubled", fmt(sup2));

  // (iv) the pointwise divergence sequence
  CsvTable tabR;
  tabR.name = "ratios";
  tabR.header = {"x1", "holder_ratio"};
  double prev = 0.0;
  bool increasing = true;
  double last = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const double x1 = std::exp(10.0 * k);
    last = example6_holder_ratio(alpha, beta, x1);
    tabR.add_row({fmt(x1), fmt(last)});
    if (last <= prev) increasing = false;
    prev = last;
  }
  if (!increasing || !(last > 3.0)) ok = false;
  res.tables.push_back(tabR);

  // (v) the integrated modulus against its closed form
  CsvTable tabW;
  tabW.name = "W";
  tabW.header = {"t", "quadrature", "closed_form", "rel_err"};
  for (double t : {0.25, 1.0, std::exp(1.0), 100.0, 1e6}) {
    const double quad = w_transform(w, t);
    const double closed = example6_W_closed(alpha, beta, t);
    const double rel = std::abs(quad - closed) / closed;
    tabW.add_row({fmt(t), fmt(quad), fmt(closed), fmt(rel)});
    if (!(rel <= 1e-8)) ok = false;
  }
  res.tables.push_back(tabW);

  // (vi) boundedness of the auxiliary profiles
  double supG = 0.0, supLG = 0.0, supGt = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double lam = std::pow(10.0, -4.0 + 8.0 * i / 400.0);
    supG = std::max(supG, example6_G(lam));
    supLG = std::max(supLG, std::pow(lam, alpha) * example6_G(lam));
  }
  for (int i = 1; i <= 200; ++i) {
    const double lam = 1.0 + i / 200.0;
    supGt = std::max(supGt, example6_Gtilde(lam, alpha));
  }
  if (!(std::isfinite(supG) && std::isfinite(supLG) && std::isfinite(supGt))) ok = false;
  res.notes.emplace_back("sup_G", fmt(supG));
  res.notes.emplace_back("sup_lambda_alpha_G", fmt(supLG));
  res.notes.emplace_back("sup_Gtilde", fmt(supGt));

  res.verdict = ok ? "PASS" : "FAIL";
  res.wall_seconds = timer.seconds();
  return res;
}

ScenarioResult scenario_dirichlet(const LabConfig& cfg, const std::string& kind) {
  Timer timer;
  ScenarioResult res;
  res.name = "dirichlet-" + kind;
  bool ok = true;

  auto w = catalog_growth(cfg.growth.name, cfg.growth.params);
  GridSpec quick;
  quick.fixed_points = 512;
  quick.random_points = 512;
  const auto repb = check_condition_b(w, quick);
  if (!repb.satisfied) {
    res.verdict = "FAIL";
    res.notes.emplace_back("precondition", "tail condition (b) not satisfied for " + w.label);
    res.wall_seconds = timer.seconds();
    return res;
  }
  if (kind == "morrey") {
    try {
      (void)w_transform(w, 1.0);
    } catch (const divergence_error&) {
      res.verdict = "FAIL";
      res.notes.emplace_back("precondition", "integrability condition (a) fails for " + w.label);
      res.wall_seconds = timer.seconds();
      return res;
    }
  }

  const PoissonKernel K = kernel_for(cfg);
  const BoundaryDatum f = catalog_datum(cfg.datum.name, cfg.datum.param, cfg.n - 1);
  const double tol = knob(cfg, "dirichlet_tol", 1e-4);
  const int pair_budget = static_cast<int>(knob(cfg, "dirichlet_pairs", 500));
  const double box = knob(cfg, "dirichlet_box", 16.0);

  CsvTable tab;
  tab.name = "constants";
  tab.header = {"quantity", "value"};

  double boundary_norm = 0.0, solution_norm = 0.0;

  if (kind == "holder") {
    boundary_norm = holder_seminorm(f.eval, f.dim, w, 2 * pair_budget, cfg.seed, box).value;
    auto u = [&](std::span<const double> x, double t) {
      return extend_point(K, f, x, t, tol).value;
    };
    solution_norm = holder_seminorm_halfspace(u, f.dim, w, pair_budget, cfg.seed + 1,
                                              box / 2.0, 1e-3, box / 2.0)
                        .value;
    tab.add_row({"holder_boundary", fmt(boundary_norm)});
    tab.add_row({"holder_solution", fmt(solution_norm)});
  } else if (kind == "morrey") {
    CubeSweep sweep;
    sweep.dim = f.dim;
    sweep.root_lo = std::vector<double>(f.dim, cfg.sweep.root_lo);
    sweep.root_side = cfg.sweep.root_side;
    sweep.level_min = cfg.sweep.level_min;
    sweep.level_max = std::min(cfg.sweep.level_max, 3);
    sweep.lattice_per_level = std::min(cfg.sweep.lattice_per_level, 2);
    sweep.random_per_level = std::min(cfg.sweep.random_per_level, 1);
    sweep.seed = cfg.sweep.seed;
    boundary_norm = morrey_campanato_seminorm(f.eval, f.M, w, cfg.p, sweep).value;
    GradField grad = extension_grad_field(K, f, knob(cfg, "gradient_tol", 1e-3));
    const int nodes = static_cast<int>(knob(cfg, "star2_nodes", 8));
    const auto data = sweep_vertical(grad, sweep, f.M, nodes);
    solution_norm = star2_q_from(data, w, cfg.q);
    const double expn = star2_exp_from(data, w);
    tab.add_row({"morrey_boundary", fmt(boundary_norm)});
    tab.add_row({"star2_q", fmt(solution_norm)});
    tab.add_row({"star2_exp", fmt(expn)});
    if (!(expn >= 0.0) || !std::isfinite(expn)) ok = false;
  } else {
    throw std::invalid_argument("scenario_dirichlet: kind must be holder or morrey");
  }

  if (boundary_norm == 0.0 && solution_norm <= 1e-10) {
    res.verdict = "PASS-degenerate";
    res.tables.push_back(tab);
    res.wall_seconds = timer.seconds();
    return res;
  }
  const double cap = knob(cfg, "constant_cap", 100.0);
  const double up = solution_norm / boundary_norm;
  const double down = boundary_norm / solution_norm;
  tab.add_row({"constant_up", fmt(up)});
  tab.add_row({"constant_down", fmt(down)});
  if (!(up <= cap && down <= cap)) ok = false;

  // nontangential trace probes at five boundary points; the trace converges
  // at the speed of the datum's own modulus, so the pass threshold scales
  // with it
  std::vector<double> heights;
  for (int k = 2; k <= 12; ++k) heights.push_back(std::ldexp(1.0, -k));
  const double trace_tol = knob(cfg, "trace_tol_factor", 5.0) * f.modulus_constant *
                           f.modulus(2.0 * heights.back());
  CsvTable tr;
  tr.name = "trace";
  tr.header = {"x", "final_height", "final_error", "converged"};
  for (double x0 : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
    std::vector<double> x(f.dim, 0.0);
    x[0] = x0;
    const auto rep = trace_probe(K, f, x, 1.0, heights, trace_tol, tol * 0.1);
    tr.add_row({fmt(x0), fmt(rep.heights.back()), fmt(rep.errors.back()),
                rep.converged ? "yes" : "no"});
    if (!rep.converged) ok = false;
  }
  res.tables.push_back(tab);
  res.tables.push_back(tr);
  res.notes.emplace_back("tail_condition_constant", fmt(repb.constant));
  res.verdict = ok ? "PASS" : "FAIL";
  res.wall_seconds = timer.seconds();
  return res;
}

ScenarioResult scenario_equivalence(const LabConfig& cfg) {
  Timer timer;
  ScenarioResult res;
  res.name = "equivalence";
  bool ok = true;

  auto w = catalog_growth(cfg.growth.name, cfg.growth.params);
  GridSpec quick;
  quick.fixed_points = 512;
  quick.random_points = 512;
  const auto main_rep = check_condition_main(w, quick);
  if (!main_rep.report.satisfied) {
    res.notes.emplace_back("precondition",
                           "balanced condition not satisfied; ratios reported anyway");
  }
  const double c_w = check_condition_b(w, quick).constant;
  const double c_prime = main_rep.c_prime;
  auto W = w_transform_function(w);

  CubeSweep sweep;
  sweep.dim = 1;
  sweep.root_lo = {cfg.sweep.root_lo};
  sweep.root_side = cfg.sweep.root_side;
  sweep.level_min = cfg.sweep.level_min;
  sweep.level_max = cfg.sweep.level_max;
  sweep.lattice_per_level = cfg.sweep.lattice_per_level;
  sweep.random_per_level = cfg.sweep.random_per_level;
  sweep.seed = cfg.sweep.seed;

  const double cap = knob(cfg, "ratio_cap", 50.0);
  const double qs[3] = {1.0, 2.0, 4.0};

  CsvTable tab;
  tab.name = "ratios";
  tab.header = {"u", "norm_q1", "norm_q2", "norm_q4", "norm_exp", "norm_inf",
                "holder", "min_pairwise", "max_pairwise", "stability"};
  CsvTable side;
  side.name = "onesided";
  side.header = {"u", "inequality", "lhs", "rhs", "holds"};

  const auto catalog = harmonic_catalog();
  for (const auto& h : catalog) {
    GradField g = harmonic_grad_field(h);
    const auto data = sweep_vertical(g, sweep, 1, 16);
    const auto data2 = sweep_vertical(g, sweep.doubled(), 1, 16);
    double vals[6];
    for (int i = 0; i < 3; ++i) vals[i] = star2_q_from(data, w, qs[i]);
    vals[3] = star2_exp_from(data, w);
    vals[4] = star2_inf(g, w, 1);
    vals[5] = holder_seminorm_halfspace(harmonic_field(h), 1, w,
                                        static_cast<int>(knob(cfg, "pairs", 4000)),
                                        cfg.seed)
                  .value;
    double q2b = star2_q_from(data2, w, 2.0);
    const double stability = std::abs(q2b - vals[1]) / std::max(q2b, vals[1]);

    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        if (i == j) continue;
        const double r = vals[i] / vals[j];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
    tab.add_row({h.label, fmt(vals[0]), fmt(vals[1]), fmt(vals[2]), fmt(vals[3]),
                 fmt(vals[4]), fmt(vals[5]), fmt(lo), fmt(hi), fmt(stability)});
    if (!(lo >= 1.0 / cap && hi <= cap)) ok = false;
    if (!(stability <= 0.10)) ok = false;

    // one-sided comparisons with their constant expressions
    const double C = cap;
    auto row = [&](const std::string& label, double lhs, double rhs) {
      side.add_row({h.label, label, fmt(lhs), fmt(rhs), lhs <= rhs ? "yes" : "no"});
      if (!(lhs <= rhs)) ok = false;
    };
    row("inf<=C*holder", vals[4], C * vals[5]);
    for (int i = 0; i < 3; ++i) {
      row("inf<=C*Cw*q" + std::to_string(int(qs[i])), vals[4], C * c_w * vals[i]);
    }
    row("exp<=C*Cw^2*q2", vals[3], C * c_w * c_w * vals[1]);
    // integrated-modulus Holder seminorm against the sup functional, with the
    // exact constant C_w (2 + C_w)
    const double holder_W =
        holder_seminorm_halfspace(harmonic_field(h), 1, W,
                                  static_cast<int>(knob(cfg, "pairs", 4000)), cfg.seed)
            .value;
    row("holderW<=Cw(2+Cw)*inf", holder_W, c_w * (2.0 + c_w) * vals[4]);
    row("exp<=sqrt(Cprime)*inf", vals[3], std::sqrt(c_prime) * vals[4]);
  }
  res.tables.push_back(tab);
  res.tables.push_back(side);
  res.notes.emplace_back("C_w", fmt(c_w));
  res.notes.emplace_back("C_prime", fmt(c_prime));
  res.notes.emplace_back("C0", fmt(main_rep.report.constant));
  res.verdict = ok ? "PASS" : "FAIL";
  res.wall_seconds = timer.seconds();
  return res;
}

ScenarioResult scenario_fatou(const LabConfig& cfg) {
  Timer timer;
  ScenarioResult res;
  res.name = "fatou";
  bool ok = true;

  const EllipticSystem L = build_system(cfg.system, cfg.n);
  // symbol-level residual
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  std::vector<std::vector<double>> xis;
  while (xis.size() < 100) {
    std::vector<double> xi(cfg.n - 1);
    double nn = 0.0;
    for (auto& v : xi) {
      v = uni(rng);
      nn += v * v;
    }
    if (std::sqrt(nn) < 1e-2) continue;
    xis.push_back(xi);
  }
  const double s = knob(cfg, "fatou_s", 0.5);
  const double t = knob(cfg, "fatou_t", 0.7);
  const double sym_resid = semigroup_residual(L, xis, s, t);
  res.notes.emplace_back("symbol_residual", fmt(sym_resid));
  if (!(sym_resid <= 1e-10)) ok = false;

  // slice reconstruction for periodic catalog data
  const std::string dname = cfg.datum.name;
  if (cfg.n != 2 || (dname != "cos" && dname != "cos2" && dname != "cos-vector")) {
    res.notes.emplace_back("slice", "skipped: slice test runs on periodic plane data");
    res.verdict = ok ? "PASS" : "FAIL";
    res.wall_seconds = timer.seconds();
    return res;
  }
  const PoissonKernel K = kernel_for(cfg);
  const BoundaryDatum f = catalog_datum(dname, 0.0, 1);
  const double tol = knob(cfg, "fatou_tol", cfg.system.kind == "laplacian" ? 5e-6 : 1e-5);

  auto slice = std::make_shared<PeriodicSlice>();
  slice->period = dname == "cos2" ? M_PI : 2.0 * M_PI;
  slice->count = static_cast<int>(knob(cfg, "fatou_samples", 160));
  slice->M = f.M;
  for (int j = 0; j < slice->count; ++j) {
    const double x[1] = {slice->period * j / slice->count};
    slice->samples.push_back(extend_point(K, f, x, s, tol).value);
  }

  // declared modulus for the interpolated slice: measured Lipschitz constant
  // and oscillation cap, then spot-checked like any other datum
  double sup_abs = 0.0, lip = 0.0;
  for (int j = 0; j < slice->count; ++j) {
    sup_abs = std::max(sup_abs, slice->samples[j].cwiseAbs().maxCoeff());
    const VecC d = slice->samples[(j + 1) % slice->count] - slice->samples[j];
    lip = std::max(lip, d.norm() / (slice->period / slice->count));
  }
  BoundaryDatum fs;
  fs.dim = 1;
  fs.M = f.M;
  fs.label = "slice[" + dname + "]";
  fs.eval = [slice](std::span<const double> x) { return slice->eval(x[0]); };
  const double capv = 2.0 * sup_abs * std::sqrt(double(f.M)) * 1.05;
  const double lipv = lip * 1.2;
  fs.modulus.eval = [capv, lipv](double r) { return std::min(lipv * r, capv); };
  fs.modulus.label = "slice-modulus";
  fs.modulus.breakpoints = {capv / std::max(lipv, 1e-300)};
  fs.modulus_constant = 1.0;
  if (modulus_spot_check(fs, 4000, cfg.seed, slice->period) > 1.01) {
    res.notes.emplace_back("slice_modulus", "declared slice modulus failed its spot check");
    ok = false;
  }

  CsvTable tab;
  tab.name = "slice";
  tab.header = {"x", "direct_re", "reextended_re", "abs_diff"};
  double worst = 0.0;
  for (double x0 : {-2.0, -1.0, 0.0, 0.9, 2.2}) {
    const double x[1] = {x0};
    const VecC direct = extend_point(K, f, x, s + t, tol).value;
    const VecC re = extend_point(K, fs, x, t, tol).value;
    const double diff = (direct - re).cwiseAbs().maxCoeff();
    worst = std::max(worst, diff);
    tab.add_row({fmt(x0), fmt(direct(0).real()), fmt(re(0).real()), fmt(diff)});
  }
  res.tables.push_back(tab);
  res.notes.emplace_back("slice_residual", fmt(worst));
  const double cap_resid = knob(cfg, "fatou_cap", cfg.system.kind == "laplacian" ? 1e-5 : 1e-4);
  if (!(worst <= cap_resid)) ok = false;

  res.verdict = ok ? "PASS" : "FAIL";
  res.wall_seconds = timer.seconds();
  return res;
}

ScenarioResult scenario_jn(const LabConfig& cfg, const std::string& variant) {
  Timer timer;
  ScenarioResult res;
  res.name = "jn-" + variant;
  bool ok = true;

  if (variant == "bmo") {
    const int levels = static_cast<int>(knob(cfg, "jn_levels", 14));
    const int depth = static_cast<int>(knob(cfg, "jn_depth", 10));
    const double alpha = knob(cfg, "jn_alpha", std::exp(-1.0));
    auto lat = make_lattice(1, {0.0}, 1.0, levels);
    fill_from_cell_mean(lat, [](std::span<const double> a, std::span<const double> b) {
      auto F = [](double x) { return x == 0.0 ? 0.0 : x - x * std::log(x); };
      return (F(b[0]) - F(a[0])) / (b[0] - a[0]);
    });
    auto bf = bmo_family(lat, alpha, depth);
    std::vector<double> probe = {0.0};
    const double m = jn_profile(bf.family, lat, alpha, probe, depth).m_alpha;
    std::vector<double> grid;
    for (int j = 1; j <= 20; ++j) grid.push_back(j * m / 2.0);
    const auto prof = jn_profile(bf.family, lat, alpha, grid, depth);
    if (!prof.bound_holds) ok = false;
    if (!(prof.m_alpha <= bf.m_alpha_bound * (1.0 + 1e-12))) ok = false;

    CsvTable tab;
    tab.name = "xi";
    tab.header = {"t", "xi", "exponential_bound"};
    LinePlot plot;
    plot.name = "xi_decay";
    plot.xlabel = "t";
    plot.ylabel = "level-set fraction";
    plot.log_y = true;
    PlotSeries meas{"measured", {}}, bnd{"bound", {}};
    const double rate = std::log(1.0 / alpha);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double bound = (1.0 / alpha) * std::exp(-rate * grid[i] / prof.m_alpha);
      tab.add_row({fmt(grid[i]), fmt(prof.xi[i]), fmt(bound)});
      if (prof.xi[i] > 0) meas.points.emplace_back(grid[i], prof.xi[i]);
      bnd.points.emplace_back(grid[i], bound);
    }
    plot.series = {meas, bnd};
    res.tables.push_back(tab);
    res.plots.push_back(plot);

    // Orlicz endpoint with the explicit constant at alpha = 1/e
    std::vector<double> G, H;
    DyadicCube root;
    root.dim = 1;
    bf.family.values(root, G, H);
    const double lux = luxemburg_norm(G);
    const double expl_bound =
        (1.0 + std::exp(1.0)) * std::exp(1.0) * 2.0 * bf.dyadic_norm;
    if (std::abs(alpha - std::exp(-1.0)) < 1e-12 && !(lux <= expl_bound)) ok = false;
    res.notes.emplace_back("luxemburg_root", fmt(lux));
    res.notes.emplace_back("explicit_bound", fmt(expl_bound));
    res.notes.emplace_back("m_alpha", fmt(prof.m_alpha));
    res.notes.emplace_back("bmo_norm", fmt(bf.dyadic_norm));

    const auto orl = orlicz_conclusions(bf.family, lat, alpha, cfg.q, prof.m_alpha, depth);
    if (!orl.lq_ok || !orl.exp_ok) ok = false;
    res.notes.emplace_back("lq_worst", fmt(orl.lq_worst));
    res.notes.emplace_back("exp_worst", fmt(orl.exp_worst));
  } else if (variant == "conical") {
    auto w = catalog_growth(cfg.growth.name, cfg.growth.params);
    GridSpec quick;
    quick.fixed_points = 512;
    quick.random_points = 512;
    const auto main_rep = check_condition_main(w, quick);
    if (!main_rep.report.satisfied) {
      res.verdict = "FAIL";
      res.notes.emplace_back("precondition", "balanced condition required for the conical run");
      res.wall_seconds = timer.seconds();
      return res;
    }
    const double c0 = main_rep.report.constant;
    const double c_w = check_condition_b(w, quick).constant;
    const double N = std::sqrt(2.0 * c0) * c_w;

    // gradient field: closed form for the catalog trace, else extension-backed
    GradField grad;
    int M = 1;
    if (cfg.system.kind == "laplacian" && cfg.datum.name == "sqrt-abs") {
      const auto cat = harmonic_catalog();
      for (const auto& h : cat) {
        if (h.datum_name == "sqrt-abs") grad = harmonic_grad_field(h);
      }
    } else {
      const PoissonKernel K = kernel_for(cfg);
      const BoundaryDatum f = catalog_datum(cfg.datum.name, cfg.datum.param, cfg.n - 1);
      M = f.M;
      grad = extension_grad_field(K, f, knob(cfg, "gradient_tol", 1e-3));
    }
    const int levels = static_cast<int>(knob(cfg, "jn_levels_conical", 7));
    const int depth = static_cast<int>(knob(cfg, "jn_depth_conical", 4));
    auto geo = make_lattice(1, {-0.5}, 1.0, levels);
    auto fam = conical_family(grad, w, geo, M);

    const double alpha = 0.5;
    std::vector<double> probe = {0.0};
    const auto prof0 = jn_profile(fam, geo, alpha, probe, depth);
    if (!(prof0.m_alpha <= N)) ok = false;  // the Chebyshev-step hypothesis
    std::vector<double> grid;
    for (int j = 1; j <= 12; ++j) grid.push_back(j * prof0.m_alpha / 2.0);
    const auto prof = jn_profile(fam, geo, alpha, grid, depth);
    if (!prof.bound_holds) ok = false;
    const auto orl = orlicz_conclusions(fam, geo, alpha, cfg.q, prof.m_alpha, depth);
    if (!orl.lq_ok || !orl.exp_ok) ok = false;

    CsvTable tab;
    tab.name = "xi";
    tab.header = {"t", "xi", "exponential_bound"};
    const double rate = std::log(1.0 / alpha);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      tab.add_row({fmt(grid[i]), fmt(prof.xi[i]),
                   fmt((1.0 / alpha) * std::exp(-rate * grid[i] / prof.m_alpha))});
    }
    res.tables.push_back(tab);
    res.notes.emplace_back("threshold_N", fmt(N));
    res.notes.emplace_back("m_half", fmt(prof0.m_alpha));
    res.notes.emplace_back("lq_worst", fmt(orl.lq_worst));
    res.notes.emplace_back("exp_worst", fmt(orl.exp_worst));
  } else {
    throw std::invalid_argument("scenario_jn: variant must be bmo or conical");
  }

  res.verdict = ok ? "PASS" : "FAIL";
  res.wall_seconds = timer.seconds();
  return res;
}

std::vector<ScenarioResult> run_scenarios(const LabConfig& cfg) {
  std::vector<ScenarioResult> out;
  for (const std::string& name : cfg.scenarios) {
    if (name == "dirichlet-holder") {
      out.push_back(scenario_dirichlet(cfg, "holder"));
    } else if (name == "dirichlet-morrey") {
      out.push_back(scenario_dirichlet(cfg, "morrey"));
    } else if (name == "equivalence") {
      out.push_back(scenario_equivalence(cfg));
    } else if (name == "fatou") {
      out.push_back(scenario_fatou(cfg));
    } else if (name == "example6") {
      const double alpha = cfg.growth.params.count("alpha") ? cfg.growth.params.at("alpha") : 0.5;
      const double beta = cfg.growth.params.count("beta") ? cfg.growth.params.at("beta") : 0.5;
      out.push_back(scenario_example6(alpha, beta,
                                      static_cast<int>(knob(cfg, "example6_budget", 250)),
                                      cfg.seed));
    } else if (name == "jn-bmo") {
      out.push_back(scenario_jn(cfg, "bmo"));
    } else if (name == "jn-conical") {
      out.push_back(scenario_jn(cfg, "conical"));
    } else {
      ScenarioResult sk;
      sk.name = name;
      sk.verdict = "SKIPPED";
      sk.notes.emplace_back("reason", "unknown scenario name");
      out.push_back(sk);
    }
  }
  return out;
}

RunManifest make_manifest(const LabConfig& cfg) {
  RunManifest m;
  m.config_hash = cfg.fingerprint;
  m.seed = cfg.seed;
  m.version = lab_version();
  return m;
}

std::string lab_version() { return "halfspace-lab 0.1.0"; }

}  // namespace halfspace
