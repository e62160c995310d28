#include "tomolab/app/config.hpp"

#include <fstream>
#include <set>

#include "tomolab/error.hpp"

namespace tomolab::app {

using nlohmann::json;

const char* to_string(FieldFormat f) { return f == FieldFormat::GridCsv ? "grid-csv" : "binary"; }

FieldFormat parse_field_format(const std::string& s) {
  if (s == "grid-csv") return FieldFormat::GridCsv;
  if (s == "binary") return FieldFormat::Binary;
  fail(ErrorKind::Config, "unknown field format '" + s + "' (grid-csv | binary)");
}

std::vector<double> MediumConfig::ratios() const {
  std::vector<double> r(frequency_count, 1.0);
  for (int j = 1; j < frequency_count; ++j)
    r[j] = 1.0 + (max_frequency_ratio - 1.0) * j / (frequency_count - 1);
  return r;
}

Wavenumber RunConfig::base_wave() const { return Wavenumber::from_k0(two_pi / medium.wavelength, medium.c0); }

RingGeometry RunConfig::ring() const {
  return RingGeometry(geometry.radius_wavelengths * medium.wavelength, geometry.transducers);
}

Grid2D RunConfig::make_grid() const { return Grid2D::centered_square(grid.side, grid.cell, grid.support_radius); }

PhantomSpec RunConfig::phantom_spec() const {
  PhantomSpec s = phantom.variant == PhantomVariant::FourBlob
                      ? PhantomSpec::four_blob(phantom.amplitude, medium.wavelength)
                      : PhantomSpec::two_blob(phantom.amplitude, medium.wavelength);
  if (phantom.blobs) s.blobs = *phantom.blobs;
  s.exponent = phantom.exponent;
  return s;
}

namespace {

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorKind::Config, msg); }

// Strict view of a JSON object: every key must be consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) config_error(path_ + " must be an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) config_error("unknown key '" + path_ + "." + it.key() + "'");
  }

  template <class T>
  void get(const char* key, T& out) {
    used_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      config_error("bad value for '" + path_ + "." + key + "': " + e.what());
    }
  }
  bool has(const char* key) const { return j_.contains(key); }
  const json* child(const char* key) {
    used_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }
  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

PhantomVariant parse_variant(const std::string& s) {
  if (s == "two-blob") return PhantomVariant::TwoBlob;
  if (s == "four-blob") return PhantomVariant::FourBlob;
  config_error("phantom.variant must be two-blob or four-blob");
}

ExponentForm parse_exponent(const std::string& s) {
  if (s == "squared") return ExponentForm::Squared;
  if (s == "literal") return ExponentForm::Literal;
  config_error("phantom.exponent must be squared or literal");
}

TauMode parse_mode(const std::string& s) {
  if (s == "fixed") return TauMode::Fixed;
  if (s == "adaptive") return TauMode::Adaptive;
  config_error("inversion.tau.mode must be fixed or adaptive");
}

AmplitudeSource parse_source(const std::string& s) {
  if (s == "direct") return AmplitudeSource::Direct;
  if (s == "boundary") return AmplitudeSource::Boundary;
  config_error("inversion.amplitude_source must be direct or boundary");
}

RunConfig base_defaults() {
  RunConfig c;
  c.inversion.tau = TauSchedule{};  // adaptive, tau0 0.5
  c.inversion.max_iterations = 60;
  return c;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5-clean", "fig5-noise", "custom"};
  return names;
}

RunConfig preset(const std::string& name) {
  RunConfig c = base_defaults();
  c.preset = name;
  if (name == "fig2") {
    c.phantom.amplitude = 0.43;
    c.inversion.tau.mode = TauMode::Fixed;
    c.inversion.tau.tau0 = 1.0;
    c.inversion.max_iterations = 10;
  } else if (name == "fig3") {
    c.phantom.amplitude = 0.55;
  } else if (name == "fig4") {
    c.phantom.amplitude = 0.91;
    c.inversion.tau.mode = TauMode::Fixed;
    c.inversion.tau.tau0 = 1.0;
  } else if (name == "fig5-clean" || name == "fig5-noise") {
    c.phantom.variant = PhantomVariant::FourBlob;
    c.phantom.amplitude = 1.1;
    c.inversion.max_iterations = 25;
    if (name == "fig5-noise") c.noise.level = 0.15;
  } else if (name != "custom") {
    config_error("unknown preset '" + name + "'");
  }
  return c;
}

RunConfig apply_json(RunConfig c, const json& doc) {
  Section root(doc, "config");
  std::string preset_name;
  root.get("preset", preset_name);
  if (!preset_name.empty() && preset_name != c.preset)
    config_error("config names preset '" + preset_name + "' but run selected '" + c.preset + "'");

  if (const json* j = root.child("medium")) {
    Section s(*j, "medium");
    s.get("c0", c.medium.c0);
    s.get("wavelength", c.medium.wavelength);
    s.get("frequency_count", c.medium.frequency_count);
    s.get("max_frequency_ratio", c.medium.max_frequency_ratio);
  }
  if (const json* j = root.child("geometry")) {
    Section s(*j, "geometry");
    s.get("radius_wavelengths", c.geometry.radius_wavelengths);
    s.get("transducers", c.geometry.transducers);
  }
  if (const json* j = root.child("grid")) {
    Section s(*j, "grid");
    s.get("side", c.grid.side);
    s.get("cell", c.grid.cell);
    if (const json* r = s.child("support_radius")) {
      if (r->is_null()) c.grid.support_radius.reset();
      else if (r->is_number()) c.grid.support_radius = r->get<double>();
      else config_error("grid.support_radius must be a number or null");
    }
  }
  if (const json* j = root.child("phantom")) {
    Section s(*j, "phantom");
    std::string v = to_string(c.phantom.variant), e = to_string(c.phantom.exponent);
    s.get("variant", v);
    s.get("exponent", e);
    c.phantom.variant = parse_variant(v);
    c.phantom.exponent = parse_exponent(e);
    s.get("amplitude", c.phantom.amplitude);
    if (const json* b = s.child("blobs")) {
      if (!b->is_array()) config_error("phantom.blobs must be an array");
      std::vector<Blob> blobs;
      for (const auto& item : *b) {
        Section bs(item, "phantom.blobs[]");
        std::vector<double> center{0.0, 0.0};
        Blob blob{{0, 0}, 1.0, 1.0};
        bs.get("center", center);
        bs.get("width", blob.width);
        bs.get("weight", blob.weight);
        if (center.size() != 2) config_error("phantom.blobs[].center must have two entries");
        blob.center = {center[0], center[1]};
        blobs.push_back(blob);
      }
      c.phantom.blobs = blobs;
    }
  }
  if (const json* j = root.child("noise")) {
    Section s(*j, "noise");
    s.get("level", c.noise.level);
    s.get("seed", c.noise.seed);
  }
  if (const json* j = root.child("inversion")) {
    Section s(*j, "inversion");
    auto& inv = c.inversion;
    if (const json* t = s.child("tau")) {
      Section ts(*t, "inversion.tau");
      std::string mode = to_string(inv.tau.mode);
      ts.get("mode", mode);
      inv.tau.mode = parse_mode(mode);
      ts.get("tau0", inv.tau.tau0);
      ts.get("growth", inv.tau.growth);
      ts.get("shrink", inv.tau.shrink);
      ts.get("window", inv.tau.window);
      ts.get("stagnation", inv.tau.stagnation);
      ts.get("tau_min", inv.tau.tau_min);
    }
    s.get("max_iterations", inv.max_iterations);
    s.get("stop_discrepancy", inv.stop_discrepancy);
    std::string src = to_string(inv.source);
    s.get("amplitude_source", src);
    inv.source = parse_source(src);
    s.get("real_scatterer", inv.real_scatterer);
    if (const json* q = s.child("quadrature")) {
      Section qs(*q, "inversion.quadrature");
      qs.get("refine", inv.quadrature.refine);
      qs.get("kink_correction", inv.quadrature.kink_correction);
    }
  }
  if (const json* j = root.child("near2far")) {
    Section s(*j, "near2far");
    s.get("order", c.inversion.truncation.Q);
    s.get("g_floor", c.inversion.truncation.g_floor);
  }
  if (const json* j = root.child("solver")) {
    Section s(*j, "solver");
    s.get("warn_condition", c.inversion.solver.warn_condition);
    s.get("max_condition", c.inversion.solver.max_condition);
  }
  if (const json* j = root.child("output")) {
    Section s(*j, "output");
    s.get("fields", c.output.fields);
    s.get("amplitudes", c.output.amplitudes);
    std::string fmt = to_string(c.output.format);
    s.get("format", fmt);
    c.output.format = parse_field_format(fmt);
  }
  return c;
}

RunConfig load_config(const std::string& preset_name, const std::string& path) {
  RunConfig base = preset(preset_name);
  if (path.empty()) return base;
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    config_error("config file " + path + " is not valid JSON: " + e.what());
  }
  return apply_json(std::move(base), doc);
}

void RunConfig::validate() const {
  try {
    if (!(medium.wavelength > 0.0)) config_error("medium.wavelength must be > 0");
    if (medium.frequency_count < 1) config_error("medium.frequency_count must be >= 1");
    if (!(medium.max_frequency_ratio >= 1.0)) config_error("medium.max_frequency_ratio must be >= 1");
    if (geometry.transducers < 4 || geometry.transducers % 2)
      config_error("geometry.transducers must be an even number >= 4");
    if (!(noise.level >= 0.0)) config_error("noise.level must be >= 0");
    if (inversion.max_iterations < 0) config_error("inversion.max_iterations must be >= 0");
    if (!(inversion.stop_discrepancy >= 0.0)) config_error("inversion.stop_discrepancy must be >= 0");
    if (inversion.quadrature.refine < 1) config_error("inversion.quadrature.refine must be >= 1");
    if (!(inversion.truncation.g_floor >= 0.0)) config_error("near2far.g_floor must be >= 0");
    inversion.tau.validate();
    const Wavenumber k1 = base_wave();
    const RingGeometry geom = ring();
    if (inversion.truncation.Q < 0 || inversion.truncation.Q > geom.nyquist_order())
      config_error("near2far.order must lie in [0, " + std::to_string(geom.nyquist_order()) + "]");
    const Grid2D g = make_grid();
    g.require_inside(geom.radius());
    const PhantomSpec spec = phantom_spec();
    const ScattererField v = build_phantom(spec, k1, g);
    // v / omega^2 does not depend on frequency, so one check covers the band.
    v_to_speed_contrast(v);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    fail(ErrorKind::Config, std::string("invalid configuration: ") + e.what());
  }
}

json to_json(const RunConfig& c) {
  json blobs = json::array();
  for (const auto& b : c.phantom_spec().blobs)
    blobs.push_back({{"center", {b.center.x, b.center.y}}, {"width", b.width}, {"weight", b.weight}});
  const auto& inv = c.inversion;
  return {
      {"preset", c.preset},
      {"medium",
       {{"c0", c.medium.c0},
        {"wavelength", c.medium.wavelength},
        {"frequency_count", c.medium.frequency_count},
        {"max_frequency_ratio", c.medium.max_frequency_ratio}}},
      {"geometry", {{"radius_wavelengths", c.geometry.radius_wavelengths}, {"transducers", c.geometry.transducers}}},
      {"grid",
       {{"side", c.grid.side},
        {"cell", c.grid.cell},
        {"support_radius", c.grid.support_radius ? json(*c.grid.support_radius) : json(nullptr)}}},
      {"phantom",
       {{"variant", to_string(c.phantom.variant)},
        {"amplitude", c.phantom.amplitude},
        {"exponent", to_string(c.phantom.exponent)},
        {"blobs", blobs}}},
      {"noise", {{"level", c.noise.level}, {"seed", c.noise.seed}}},
      {"inversion",
       {{"tau",
         {{"mode", to_string(inv.tau.mode)},
          {"tau0", inv.tau.tau0},
          {"growth", inv.tau.growth},
          {"shrink", inv.tau.shrink},
          {"window", inv.tau.window},
          {"stagnation", inv.tau.stagnation},
          {"tau_min", inv.tau.tau_min},
          {"policy", "reconstructed: shrink and revert on a rise of delta_f, grow on stagnation"}}},
        {"max_iterations", inv.max_iterations},
        {"stop_discrepancy", inv.stop_discrepancy},
        {"amplitude_source", to_string(inv.source)},
        {"real_scatterer", inv.real_scatterer},
        {"quadrature", {{"refine", inv.quadrature.refine}, {"kink_correction", inv.quadrature.kink_correction}}}}},
      {"near2far", {{"order", inv.truncation.Q}, {"g_floor", inv.truncation.g_floor}}},
      {"solver", {{"warn_condition", inv.solver.warn_condition}, {"max_condition", inv.solver.max_condition}}},
      {"output",
       {{"fields", c.output.fields}, {"amplitudes", c.output.amplitudes}, {"format", to_string(c.output.format)}}},
  };
}

}  // namespace tomolab::app
