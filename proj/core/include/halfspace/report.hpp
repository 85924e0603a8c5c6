#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace halfspace {

// deterministic shortest-roundtrip formatting shared by every emitter
std::string format_double(double v);

struct CsvTable {
  std::string name;  // file stem suffix
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::initializer_list<std::string> cells) { rows.emplace_back(cells); }
  std::string to_string() const;
};

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct LinePlot {
  std::string name;
  std::string xlabel, ylabel;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

std::string render_svg(const LinePlot& plot);

struct ScenarioResult {
  std::string name;
  std::string verdict;  // PASS | FAIL | PASS-degenerate | SKIPPED
  double wall_seconds = 0.0;
  std::vector<CsvTable> tables;
  std::vector<LinePlot> plots;
  std::vector<std::pair<std::string, std::string>> notes;
};

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
  std::vector<ScenarioResult>* results = nullptr;  // filled by emit_report
};

// Writes <scenario>_<table>.csv, optional <scenario>_<plot>.svg and
// manifest.json under out_dir. CSV bytes depend only on the data (stable
// formatting and ordering); wall-clock times live in the manifest only.
void emit_report(const RunManifest& manifest, std::span<const ScenarioResult> results,
                 const std::string& out_dir, bool svg);

}  // namespace halfspace
