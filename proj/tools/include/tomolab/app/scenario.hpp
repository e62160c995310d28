#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tomolab/app/config.hpp"
#include "tomolab/inversion.hpp"
#include "tomolab/metrics.hpp"

namespace tomolab::app {

struct FrequencyRun {
  double ratio = 1.0;  // omega / omega_1
  ScattererField truth;
  double noise_to_signal = 0.0;
  double sigma = 0.0;
  double forward_seconds = 0.0;
  ReconstructionTrace trace;
};

struct ScenarioOutcome {
  RunConfig config;
  std::vector<FrequencyRun> runs;  // runs[0] is omega_1
  ScattererField average;          // multifrequency average, normalized to omega_1
  std::optional<double> average_delta_v;
  double amplitude_norm = 0.0;  // of the measured amplitude at omega_1
  PhaseShift phase;             // along y = 0 across the grid, true contrast
  double contrast_min = 0.0, contrast_max = 0.0;
  std::vector<std::string> warnings;  // deduplicated, first-seen order
  double seconds = 0.0;

  const FrequencyRun& primary() const { return runs.front(); }
};

struct RunOptions {
  bool serial = false;
  std::function<void(const std::string&)> log;
};

// Runs every frequency of the configured scenario. Frequencies are simulated
// independently (in parallel unless serial) and noise is drawn in frequency
// order, so the outcome does not depend on the thread count.
ScenarioOutcome execute(const RunConfig& cfg, const RunOptions& opt = {});

// Run report; `normalize` zeroes every timing so identical runs compare equal.
nlohmann::json make_report(const ScenarioOutcome& out, bool normalize);

// Writes report.json, convergence.csv, cross_section.csv and field dumps.
void write_artifacts(const ScenarioOutcome& out, const std::filesystem::path& dir, bool normalize);

// Samples of the real part along y = 0 at the cell-centre abscissae.
struct CrossSection {
  std::vector<double> x;
  std::vector<std::vector<double>> columns;
};
CrossSection cross_section(const std::vector<const ScattererField*>& fields);

nlohmann::json error_json(const std::exception& e, int exit_code);
int exit_code_for(const std::exception& e);

std::string version();

}  // namespace tomolab::app
