#include "halfspace/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace halfspace {

namespace {

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// remove a trailing comment that is not inside a string literal
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

TomlValue parse_scalar(const std::string& raw, int line_no) {
  const std::string s = strip(raw);
  if (s.empty()) throw std::invalid_argument("toml: empty value at line " + std::to_string(line_no));
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"')
      throw std::invalid_argument("toml: unterminated string at line " + std::to_string(line_no));
    return TomlValue{s.substr(1, s.size() - 2)};
  }
  if (s == "true") return TomlValue{true};
  if (s == "false") return TomlValue{false};
  std::size_t pos = 0;
  const double d = std::stod(s, &pos);
  if (pos != s.size())
    throw std::invalid_argument("toml: malformed number '" + s + "' at line " +
                                std::to_string(line_no));
  return TomlValue{d};
}

TomlValue parse_array(const std::string& raw, int line_no) {
  const std::string s = strip(raw);
  std::vector<std::string> items;
  std::string cur;
  bool in_str = false;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const char c = s[i];
    if (c == '"') in_str = !in_str;
    if (c == ',' && !in_str) {
      items.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!strip(cur).empty()) items.push_back(cur);
  bool all_str = true, all_num = true;
  for (const auto& it : items) {
    const std::string t = strip(it);
    if (t.empty()) continue;
    if (t.front() == '"') {
      all_num = false;
    } else {
      all_str = false;
    }
  }
  if (all_str && !items.empty()) {
    std::vector<std::string> out;
    for (const auto& it : items) {
      TomlValue v = parse_scalar(it, line_no);
      out.push_back(v.str());
    }
    return TomlValue{out};
  }
  if (all_num) {
    std::vector<double> out;
    for (const auto& it : items) out.push_back(parse_scalar(it, line_no).num());
    return TomlValue{out};
  }
  throw std::invalid_argument("toml: mixed array at line " + std::to_string(line_no));
}

}  // namespace

TomlTable parse_toml(const std::string& text) {
  TomlTable table;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = strip(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw std::invalid_argument("toml: malformed table header at line " +
                                    std::to_string(line_no));
      section = strip(s.substr(1, s.size() - 2));
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("toml: expected key = value at line " +
                                  std::to_string(line_no));
    const std::string key = strip(s.substr(0, eq));
    const std::string val = strip(s.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    if (!val.empty() && val.front() == '[') {
      table[full] = parse_array(val, line_no);
    } else {
      table[full] = parse_scalar(val, line_no);
    }
  }
  return table;
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

LabConfig config_from_toml(const std::string& text) {
  const TomlTable t = parse_toml(text);
  LabConfig cfg;
  cfg.fingerprint = config_hash(text);

  auto num = [&](const std::string& key, double dflt) {
    auto it = t.find(key);
    return it == t.end() ? dflt : it->second.num();
  };
  auto str = [&](const std::string& key, const std::string& dflt) {
    auto it = t.find(key);
    return it == t.end() ? dflt : it->second.str();
  };

  cfg.n = static_cast<int>(num("n", 2));
  cfg.seed = static_cast<std::uint64_t>(num("seed", 42));
  cfg.out_dir = str("out_dir", "out");
  cfg.p = num("p", 1.0);
  cfg.q = num("q", 2.0);
  if (auto it = t.find("svg"); it != t.end()) cfg.svg = it->second.flag();

  if (auto it = t.find("scenarios"); it != t.end()) {
    cfg.scenarios = std::get<std::vector<std::string>>(it->second.v);
  }

  cfg.system.kind = str("system.kind", "laplacian");
  cfg.system.mu = Cplx(num("system.mu_re", 1.0), num("system.mu_im", 0.0));
  cfg.system.lambda = Cplx(num("system.lambda_re", 1.0), num("system.lambda_im", 0.0));
  cfg.system.M = static_cast<int>(num("system.M", 1));
  if (auto it = t.find("system.tensor"); it != t.end()) {
    const auto& flat = std::get<std::vector<double>>(it->second.v);
    if (flat.size() % 2 != 0)
      throw std::invalid_argument("config: system.tensor must list [re, im] pairs");
    for (std::size_t i = 0; i + 1 < flat.size(); i += 2) {
      cfg.system.tensor.emplace_back(flat[i], flat[i + 1]);
    }
  }

  cfg.growth.name = str("growth.name", "power");
  cfg.growth.params.clear();
  for (const char* key : {"alpha", "beta", "theta"}) {
    auto it = t.find(std::string("growth.") + key);
    if (it != t.end()) cfg.growth.params[key] = it->second.num();
  }
  if (cfg.growth.params.empty()) cfg.growth.params = {{"alpha", 0.5}};

  cfg.datum.name = str("datum.name", "cos");
  cfg.datum.param = num("datum.param", 0.0);

  cfg.sweep.level_min = static_cast<int>(num("sweep.level_min", 0));
  cfg.sweep.level_max = static_cast<int>(num("sweep.level_max", 6));
  cfg.sweep.lattice_per_level = static_cast<int>(num("sweep.lattice_per_level", 5));
  cfg.sweep.random_per_level = static_cast<int>(num("sweep.random_per_level", 4));
  cfg.sweep.root_lo = num("sweep.root_lo", -8.0);
  cfg.sweep.root_side = num("sweep.root_side", 16.0);
  cfg.sweep.seed = static_cast<std::uint64_t>(num("sweep.seed", 1234));

  for (const auto& [key, value] : t) {
    if (key.rfind("knobs.", 0) == 0 && std::holds_alternative<double>(value.v)) {
      cfg.knobs[key.substr(6)] = std::get<double>(value.v);
    }
  }
  return cfg;
}

LabConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_toml(ss.str());
}

EllipticSystem build_system(const SystemSpec& spec, int n) {
  if (spec.kind == "laplacian") return make_laplacian(n);
  if (spec.kind == "lame") return make_lame(n, spec.mu, spec.lambda).system;
  if (spec.kind == "scalar-divA") {
    MatC A(n, n);
    if (static_cast<int>(spec.tensor.size()) != n * n)
      throw std::invalid_argument("config: scalar-divA needs an n x n tensor");
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) A(r, c) = spec.tensor[r * n + c];
    }
    return make_scalar_diva(n, A);
  }
  if (spec.kind == "tensor") {
    return make_system(n, spec.M, spec.tensor);
  }
  throw std::invalid_argument("config: unknown system kind " + spec.kind);
}

}  // namespace halfspace
