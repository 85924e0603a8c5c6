#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "halfspace/elliptic.hpp"

namespace halfspace {

// Minimal TOML reader covering the configuration schema: top-level and
// [section] tables, string/number/boolean scalars and flat arrays, comments.
// Nested tables and dates are out of scope.
struct TomlValue {
  std::variant<std::string, double, bool, std::vector<double>, std::vector<std::string>> v;

  const std::string& str() const { return std::get<std::string>(v); }
  double num() const { return std::get<double>(v); }
  bool flag() const { return std::get<bool>(v); }
};

using TomlTable = std::map<std::string, TomlValue>;  // keys "section.key"

TomlTable parse_toml(const std::string& text);

struct SystemSpec {
  std::string kind = "laplacian";  // laplacian | lame | scalar-divA | tensor
  Cplx mu{1.0, 0.0};
  Cplx lambda{1.0, 0.0};
  std::vector<Cplx> tensor;  // for scalar-divA (n*n) or tensor (n*n*M*M)
  int M = 1;
};

struct GrowthSpec {
  std::string name = "power";
  std::map<std::string, double> params = {{"alpha", 0.5}};
};

struct DatumSpec {
  std::string name = "cos";
  double param = 0.0;
};

struct SweepSpec {
  int level_min = 0;
  int level_max = 6;
  int lattice_per_level = 5;
  int random_per_level = 4;
  double root_lo = -8.0;
  double root_side = 16.0;
  std::uint64_t seed = 1234;
};

struct LabConfig {
  int n = 2;
  SystemSpec system;
  GrowthSpec growth;
  DatumSpec datum;
  std::vector<std::string> scenarios;
  SweepSpec sweep;
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  bool svg = true;
  double p = 1.0;
  double q = 2.0;
  // free-form scenario knobs (pair budgets, lattice depths, tolerances)
  std::map<std::string, double> knobs;

  std::string fingerprint;  // hash of the originating text
};

LabConfig config_from_toml(const std::string& text);
LabConfig load_config(const std::string& path);

EllipticSystem build_system(const SystemSpec& spec, int n);

// FNV-1a over the raw text, hex-encoded
std::string config_hash(const std::string& text);

}  // namespace halfspace
