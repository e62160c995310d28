#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tomolab/inversion.hpp"
#include "tomolab/metrics.hpp"
#include "tomolab/model.hpp"

namespace tomolab::app {

enum class FieldFormat { GridCsv, Binary };
const char* to_string(FieldFormat f);
FieldFormat parse_field_format(const std::string& s);

struct MediumConfig {
  double c0 = 1.0;
  double wavelength = 8.0;  // at the lowest frequency, l.s.u.
  int frequency_count = 1;
  double max_frequency_ratio = 1.5;
  // omega_j / omega_1, uniform in [1, max_frequency_ratio].
  std::vector<double> ratios() const;
};

struct GeometryConfig {
  double radius_wavelengths = 4.0;
  int transducers = 60;
};

struct GridConfig {
  double side = 56.0;
  double cell = 1.0;
  std::optional<double> support_radius = 28.0;
};

struct PhantomConfig {
  PhantomVariant variant = PhantomVariant::TwoBlob;
  double amplitude = 0.43;
  ExponentForm exponent = ExponentForm::Squared;
  // Replaces the preset blob list when present.
  std::optional<std::vector<Blob>> blobs;
};

struct OutputConfig {
  bool fields = true;
  bool amplitudes = false;
  FieldFormat format = FieldFormat::GridCsv;
};

struct RunConfig {
  std::string preset = "custom";
  MediumConfig medium;
  GeometryConfig geometry;
  GridConfig grid;
  PhantomConfig phantom;
  NoiseSpec noise{0.0, 20240607};
  ReconstructionConfig inversion;
  OutputConfig output;

  Wavenumber base_wave() const;
  RingGeometry ring() const;
  Grid2D make_grid() const;
  PhantomSpec phantom_spec() const;
  // Checks every precondition the run depends on; throws Config errors.
  void validate() const;
};

const std::vector<std::string>& preset_names();
RunConfig preset(const std::string& name);

// Applies a JSON document on top of `base`. Unknown keys are rejected.
RunConfig apply_json(RunConfig base, const nlohmann::json& doc);
RunConfig load_config(const std::string& preset_name, const std::string& path);

// Complete echo: every value the run uses.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace tomolab::app
