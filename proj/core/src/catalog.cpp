#include "halfspace/catalog.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace halfspace {

namespace {

GrowthFunction modulus_fn(std::function<double(double)> f, std::string label,
                          std::vector<double> breaks = {}) {
  GrowthFunction g;
  g.eval = std::move(f);
  g.label = std::move(label);
  g.breakpoints = std::move(breaks);
  return g;
}

BoundaryDatum scalar_datum(std::string label, int dim,
                           std::function<double(std::span<const double>)> f) {
  BoundaryDatum d;
  d.dim = dim;
  d.M = 1;
  d.label = std::move(label);
  d.eval = [f = std::move(f)](std::span<const double> x) {
    VecC v(1);
    v(0) = f(x);
    return v;
  };
  return d;
}

}  // namespace

BoundaryDatum catalog_datum(const std::string& name, double param, int dim) {
  if (name == "constant") {
    BoundaryDatum d = scalar_datum("constant", dim,
                                   [param](std::span<const double>) { return param; });
    d.modulus = modulus_fn([](double t) { return t; }, "r");
    d.modulus_constant = 0.0;
    d.second_modulus = d.modulus;
    d.second_modulus_constant = 0.0;
    return d;
  }
  if (name == "linear") {
    BoundaryDatum d =
        scalar_datum("linear", dim, [](std::span<const double> x) { return x[0]; });
    d.modulus = modulus_fn([](double t) { return t; }, "r");
    d.modulus_constant = 1.0;
    d.second_modulus = d.modulus;
    d.second_modulus_constant = 0.0;  // symmetric second difference vanishes
    return d;
  }
  if (name == "cos") {
    BoundaryDatum d =
        scalar_datum("cos", dim, [](std::span<const double> x) { return std::cos(x[0]); });
    d.modulus = modulus_fn([](double t) { return std::min(t, 2.0); }, "min(r,2)", {2.0});
    d.modulus_constant = 1.0;
    d.second_modulus =
        modulus_fn([](double t) { return std::min(t * t, 4.0); }, "min(r^2,4)", {2.0});
    d.second_modulus_constant = 1.0;
    return d;
  }
  if (name == "cos2") {
    BoundaryDatum d = scalar_datum(
        "cos2", dim, [](std::span<const double> x) { return std::cos(2.0 * x[0]); });
    d.modulus = modulus_fn([](double t) { return std::min(2.0 * t, 2.0); }, "min(2r,2)", {1.0});
    d.modulus_constant = 1.0;
    d.second_modulus = modulus_fn([](double t) { return std::min(4.0 * t * t, 4.0); },
                                  "min(4r^2,4)", {1.0});
    d.second_modulus_constant = 1.0;
    return d;
  }
  if (name == "sqrt-abs") {
    BoundaryDatum d = scalar_datum(
        "sqrt-abs", dim, [](std::span<const double> x) { return std::sqrt(std::abs(x[0])); });
    d.modulus = modulus_fn([](double t) { return std::sqrt(t); }, "r^{1/2}");
    d.modulus_constant = 1.0;
    return d;
  }
  if (name == "bump") {
    BoundaryDatum d = scalar_datum("bump", dim, [](std::span<const double> x) {
      return M_1_PI / (1.0 + x[0] * x[0]);
    });
    d.modulus = modulus_fn([](double t) { return std::min(t, 1.0); }, "min(r,1)", {1.0});
    d.modulus_constant = 0.35;
    d.second_modulus =
        modulus_fn([](double t) { return std::min(t * t, 2.0); }, "min(r^2,2)", {std::sqrt(2.0)});
    d.second_modulus_constant = 0.7;
    return d;
  }
  if (name == "arctan") {
    BoundaryDatum d = scalar_datum("arctan", dim, [](std::span<const double> x) {
      return std::atan2(1.0, x[0]);
    });
    d.modulus = modulus_fn([](double t) { return std::min(t, M_PI); }, "min(r,pi)", {M_PI});
    d.modulus_constant = 1.0;
    d.second_modulus =
        modulus_fn([](double t) { return std::min(t * t, 7.0); }, "min(r^2,7)", {std::sqrt(7.0)});
    d.second_modulus_constant = 1.0;
    return d;
  }
  if (name == "logplus-abs") {
    BoundaryDatum d = scalar_datum("logplus-abs", dim, [](std::span<const double> x) {
      const double a = std::abs(x[0]);
      return a > 1.0 ? std::log(a) : 0.0;
    });
    // |log_+|a| - log_+|b|| <= log(1 + |a-b|)
    d.modulus = modulus_fn([](double t) { return std::log1p(t); }, "log(1+r)");
    d.modulus_constant = 1.0;
    return d;
  }
  if (name == "cos-vector") {
    BoundaryDatum d;
    d.dim = dim;
    d.M = 2;
    d.label = "cos-vector";
    d.eval = [](std::span<const double> x) {
      VecC v(2);
      v(0) = std::cos(x[0]);
      v(1) = 0.0;
      return v;
    };
    d.modulus = modulus_fn([](double t) { return std::min(t, 2.0); }, "min(r,2)", {2.0});
    d.modulus_constant = 1.0;
    d.second_modulus =
        modulus_fn([](double t) { return std::min(t * t, 4.0); }, "min(r^2,4)", {2.0});
    d.second_modulus_constant = 1.0;
    return d;
  }
  throw std::invalid_argument("catalog_datum: unknown name " + name);
}

std::vector<HarmonicExtension> harmonic_catalog() {
  using Cd = std::complex<double>;
  std::vector<HarmonicExtension> cat;

  cat.push_back({"cos-decay",
                 [](double x, double t) { return std::exp(-t) * std::cos(x); },
                 [](double x, double t) {
                   return std::array<double, 2>{-std::exp(-t) * std::sin(x),
                                                -std::exp(-t) * std::cos(x)};
                 },
                 "cos"});

  cat.push_back({"cos2-decay",
                 [](double x, double t) { return std::exp(-2.0 * t) * std::cos(2.0 * x); },
                 [](double x, double t) {
                   return std::array<double, 2>{-2.0 * std::exp(-2.0 * t) * std::sin(2.0 * x),
                                                -2.0 * std::exp(-2.0 * t) * std::cos(2.0 * x)};
                 },
                 "cos2"});

  // trace |x|^{1/2}: real + imaginary part of the principal square root
  cat.push_back({"sqrt-halfplane",
                 [](double x, double t) {
                   const Cd z = std::sqrt(Cd(x, t));
                   return z.real() + z.imag();
                 },
                 [](double x, double t) {
                   const Cd dz = Cd(1.0, -1.0) / (2.0 * std::sqrt(Cd(x, t)));
                   // u = Re((1-i) sqrt z); u_x = Re F', u_t = -Im F'
                   return std::array<double, 2>{dz.real(), -dz.imag()};
                 },
                 "sqrt-abs"});

  // vertical translate of the kernel itself
  cat.push_back({"kernel-translate",
                 [](double x, double t) {
                   const double s = t + 1.0;
                   return M_1_PI * s / (x * x + s * s);
                 },
                 [](double x, double t) {
                   const Cd w = Cd(x, t + 1.0);
                   const Cd g = M_1_PI / (w * w);
                   // u = -Im(1/(pi w)): u_x = Im g, u_t = Re g
                   return std::array<double, 2>{g.imag(), g.real()};
                 },
                 "bump"});

  // bounded angular harmonic
  cat.push_back({"angle",
                 [](double x, double t) { return std::atan2(t + 1.0, x); },
                 [](double x, double t) {
                   const Cd g = 1.0 / Cd(x, t + 1.0);
                   // u = Im log(z+i): u_x = Im g, u_t = Re g
                   return std::array<double, 2>{g.imag(), g.real()};
                 },
                 "arctan"});
  return cat;
}

GradField harmonic_grad_field(const HarmonicExtension& h) {
  return [du = h.du](std::span<const double> x, double t) {
    const auto g = du(x[0], t);
    MatC m(2, 1);
    m(0, 0) = g[0];
    m(1, 0) = g[1];
    return m;
  };
}

std::function<VecC(std::span<const double>, double)> harmonic_field(
    const HarmonicExtension& h) {
  return [u = h.u](std::span<const double> x, double t) {
    VecC v(1);
    v(0) = u(x[0], t);
    return v;
  };
}

}  // namespace halfspace
