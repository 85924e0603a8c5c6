#include "halfspace/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace halfspace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvTable::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) {
    os << (i ? "," : "") << header[i];
  }
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << row[i];
    }
    os << "\n";
  }
  return os.str();
}

std::string render_svg(const LinePlot& plot) {
  const int W = 640, H = 420, ml = 70, mr = 20, mt = 30, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : plot.series) {
    for (auto [x, y] : s.points) {
      double yy = plot.log_y ? (y > 0 ? std::log10(y) : -300.0) : y;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, yy);
      ymax = std::max(ymax, yy);
    }
  }
  if (!(xmax > xmin)) {
    xmax = xmin + 1;
  }
  if (!(ymax > ymin)) {
    ymax = ymin + 1;
  }
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) {
    const double yy = plot.log_y ? (y > 0 ? std::log10(y) : -300.0) : y;
    return H - mb - (yy - ymin) / (ymax - ymin) * (H - mt - mb);
  };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
     << plot.name << "</text>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
     << H - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-size=\"12\">" << plot.xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 "
     << H / 2 << ")\" text-anchor=\"middle\">" << plot.ylabel
     << (plot.log_y ? " (log10)" : "") << "</text>\n";
  int ci = 0;
  for (const auto& s : plot.series) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[ci % 6] << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : s.points) {
      os << format_double(px(x)) << "," << format_double(py(y)) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << W - mr - 4 << "\" y=\"" << mt + 16 * (ci + 1)
       << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << colors[ci % 6] << "\">"
       << s.label << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
  return os.str();
}

void emit_report(const RunManifest& manifest, std::span<const ScenarioResult> results,
                 const std::string& out_dir, bool svg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("emit_report: cannot create " + out_dir + ": " + ec.message());

  auto write_file = [&](const std::string& name, const std::string& bytes) {
    const fs::path p = fs::path(out_dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("emit_report: cannot write " + p.string());
    out << bytes;
  };

  for (const auto& r : results) {
    for (const auto& tab : r.tables) {
      write_file(r.name + "_" + tab.name + ".csv", tab.to_string());
    }
    if (svg) {
      for (const auto& pl : r.plots) {
        write_file(r.name + "_" + pl.name + ".svg", render_svg(pl));
      }
    }
  }

  nlohmann::ordered_json j;
  j["config_hash"] = manifest.config_hash;
  j["seed"] = manifest.seed;
  j["version"] = manifest.version;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json s;
    s["scenario"] = r.name;
    s["verdict"] = r.verdict;
    s["wall_seconds"] = r.wall_seconds;
    nlohmann::ordered_json notes = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.notes) notes[k] = v;
    s["notes"] = notes;
    arr.push_back(s);
  }
  j["scenarios"] = arr;
  write_file("manifest.json", j.dump(2) + "\n");
}

}  // namespace halfspace
