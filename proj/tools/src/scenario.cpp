#include "tomolab/app/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <charconv>
#include <exception>
#include <set>
#include <thread>

#include "tomolab/app/field_io.hpp"
#include "tomolab/error.hpp"

#ifndef TOMOLAB_VERSION
#define TOMOLAB_VERSION "unknown"
#endif

namespace tomolab::app {

using nlohmann::json;
using clock_type = std::chrono::steady_clock;

std::string version() { return TOMOLAB_VERSION; }

namespace {

double since(clock_type::time_point t0) { return std::chrono::duration<double>(clock_type::now() - t0).count(); }

// Runs body(0..n-1); the exception of the lowest failing index wins so the
// reported error does not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, bool serial, F&& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t threads = serial ? 1 : std::min(n, hw);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string fmt(double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

ScenarioOutcome execute(const RunConfig& cfg, const RunOptions& opt) {
  const auto t_start = clock_type::now();
  cfg.validate();
  auto log = [&](const std::string& s) {
    if (opt.log) opt.log(s);
  };

  const Wavenumber k1 = cfg.base_wave();
  const RingGeometry geom = cfg.ring();
  const Grid2D grid = cfg.make_grid();
  const PhantomSpec spec = cfg.phantom_spec();
  const std::vector<double> ratios = cfg.medium.ratios();
  const std::size_t J = ratios.size();
  auto wave = [&](std::size_t j) { return Wavenumber(k1.omega() * ratios[j], k1.c0()); };

  std::vector<std::optional<ScattererField>> truths(J);
  std::vector<std::optional<BoundaryFields>> fields(J);
  std::vector<double> fwd_seconds(J, 0.0);
  parallel_for(J, opt.serial, [&](std::size_t j) {
    const auto t0 = clock_type::now();
    truths[j] = build_phantom(spec, wave(j), grid, k1);
    fields[j] = simulate_boundary(*truths[j], geom, cfg.inversion.solver);
    fwd_seconds[j] = since(t0);
    log("forward " + std::to_string(j + 1) + "/" + std::to_string(J) + " done");
  });

  // One generator, frequency-major: noise does not depend on scheduling.
  NoiseRng rng(cfg.noise.seed);
  std::vector<NoisyFields> noisy;
  noisy.reserve(J);
  for (std::size_t j = 0; j < J; ++j) noisy.push_back(inject_noise(*fields[j], cfg.noise.level, rng));
  fields.clear();

  std::vector<std::optional<ReconstructionTrace>> traces(J);
  parallel_for(J, opt.serial, [&](std::size_t j) {
    traces[j] = run_reconstruction(noisy[j].fields, grid, wave(j), geom, cfg.inversion, &*truths[j]);
    const auto& tr = *traces[j];
    std::string msg = "reconstruction " + std::to_string(j + 1) + "/" + std::to_string(J) + ": " +
                      to_string(tr.status) + " after " + std::to_string(tr.records.size() - 1) + " updates";
    if (tr.result().delta_v) msg += ", delta_v " + fmt(*tr.result().delta_v);
    log(msg);
  });

  std::vector<FrequencyRun> runs;
  runs.reserve(J);
  std::vector<ScattererField> finals;
  for (std::size_t j = 0; j < J; ++j) {
    finals.push_back(traces[j]->result().estimate);
    runs.push_back(FrequencyRun{ratios[j], std::move(*truths[j]), noisy[j].noise_to_signal, noisy[j].sigma,
                                fwd_seconds[j], std::move(*traces[j])});
  }

  ScenarioOutcome out{cfg, std::move(runs), multifrequency_average(finals), std::nullopt, 0.0, {}, 0.0, 0.0, {}, 0.0};
  const ScattererField& truth = out.primary().truth;
  if (truth.values.norm() > 0.0) out.average_delta_v = solution_discrepancy(out.average, truth);
  out.amplitude_norm = tomolab::amplitude_norm(out.primary().trace.measured);

  const RVector contrast = v_to_speed_contrast(truth);
  const double x0 = grid.origin().x, x1 = x0 + grid.nx() * grid.h();
  out.phase = phase_shift(grid, contrast, k1, {x0, 0.0}, {x1, 0.0});
  out.contrast_min = contrast.size() ? contrast.minCoeff() : 0.0;
  out.contrast_max = contrast.size() ? contrast.maxCoeff() : 0.0;

  std::set<std::string> seen;
  for (const auto& r : out.runs)
    for (const auto& w : r.trace.warnings)
      if (seen.insert(w).second) out.warnings.push_back(w);
  out.seconds = since(t_start);
  return out;
}

json make_report(const ScenarioOutcome& out, bool normalize) {
  auto t = [&](double s) { return normalize ? 0.0 : s; };
  const FrequencyRun& p = out.primary();
  const ReconstructionTrace& tr = p.trace;

  json iterations = json::array();
  for (const auto& r : tr.records)
    iterations.push_back({{"n", r.n},
                          {"tau", r.tau},
                          {"delta_v", optional_number(r.delta_v)},
                          {"delta_f", r.delta_f},
                          {"reverted", r.reverted},
                          {"imag_ratio", r.imag_ratio},
                          {"seconds", t(r.seconds)}});

  json freqs = json::array();
  double ns_sum = 0.0, recon_seconds = 0.0, fwd_seconds = 0.0;
  for (const auto& r : out.runs) {
    double secs = 0.0;
    for (const auto& rec : r.trace.records) secs += rec.seconds;
    recon_seconds += secs;
    fwd_seconds += r.forward_seconds;
    ns_sum += r.noise_to_signal;
    freqs.push_back({{"ratio", r.ratio},
                     {"omega", r.truth.omega()},
                     {"status", to_string(r.trace.status)},
                     {"updates", r.trace.records.size() - 1},
                     {"final_iteration", r.trace.final},
                     {"delta_v_born", optional_number(r.trace.born().delta_v)},
                     {"delta_v_final", optional_number(r.trace.result().delta_v)},
                     {"delta_f_final", r.trace.result().delta_f},
                     {"noise_to_signal", r.noise_to_signal},
                     {"sigma", r.sigma}});
  }

  const auto& fin = tr.result();
  json metrics = {
      {"delta_v_born", optional_number(tr.born().delta_v)},
      {"delta_v_final", optional_number(fin.delta_v)},
      {"delta_f_born", tr.born().delta_f},
      {"delta_f_final", fin.delta_f},
      {"final_iteration", tr.final},
      {"best_iteration", tr.best},
      {"amplitude_norm", out.amplitude_norm},
      {"amplitude_norm_times_3pi", out.amplitude_norm * 3.0 * pi},
      {"phase_shift",
       {{"total", out.phase.total},
        {"total_over_pi", out.phase.total / pi},
        {"positive", out.phase.positive},
        {"positive_over_pi", out.phase.positive / pi},
        {"negative", out.phase.negative},
        {"path", "y = 0 across the grid"}}},
      {"contrast_min", out.contrast_min},
      {"contrast_max", out.contrast_max},
      {"noise_to_signal", p.noise_to_signal},
      {"noise_to_signal_mean", out.runs.empty() ? 0.0 : ns_sum / out.runs.size()},
      {"sigma", p.sigma},
      {"delta_v_average", optional_number(out.average_delta_v)},
  };

  json report = {
      {"tool", "tomolab"},
      {"version", version()},
      {"preset", out.config.preset},
      {"status", to_string(tr.status)},
      {"metrics", metrics},
      {"iterations", iterations},
      {"tau_trajectory", tr.tau_trajectory()},
      {"frequencies", freqs},
      {"timings",
       {{"normalized", normalize},
        {"total_seconds", t(out.seconds)},
        {"forward_seconds", t(fwd_seconds)},
        {"reconstruction_seconds", t(recon_seconds)}}},
      {"warnings", out.warnings},
      {"config", to_json(out.config)},
  };
  // Published results of a non-iterative method, kept for comparison only.
  if (out.config.preset == "fig2")
    report["context"] = {{"functional_analytical_delta_v", 0.008}};
  else if (out.config.preset.rfind("fig5", 0) == 0)
    report["context"] = {{"functional_analytical_delta_v", 0.018}};
  return report;
}

CrossSection cross_section(const std::vector<const ScattererField*>& fields) {
  CrossSection cs;
  if (fields.empty()) return cs;
  const Grid2D& g = fields.front()->grid;
  for (int ix = 0; ix < g.nx(); ++ix) cs.x.push_back(g.center(ix, 0).x);
  for (const auto* f : fields) {
    if (!(f->grid == g)) fail(ErrorKind::Mismatch, "cross-section fields use different grids");
    const RVector re = f->values.real();
    std::vector<double> col;
    col.reserve(cs.x.size());
    for (double x : cs.x) col.push_back(bilinear(g, re, {x, 0.0}));
    cs.columns.push_back(std::move(col));
  }
  return cs;
}

void write_artifacts(const ScenarioOutcome& out, const std::filesystem::path& dir, bool normalize) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, dir.string() + ": cannot create output directory: " + ec.message());

  std::filesystem::remove(dir / "error.json", ec);  // left by an earlier failed run
  write_text(dir / "report.json", make_report(out, normalize).dump(2) + "\n");

  std::string conv = "freq,n,tau,delta_v,delta_f,reverted,imag_ratio\n";
  for (std::size_t j = 0; j < out.runs.size(); ++j)
    for (const auto& r : out.runs[j].trace.records) {
      conv += std::to_string(j) + ',' + std::to_string(r.n) + ',' + fmt(r.tau) + ',' +
              (r.delta_v ? fmt(*r.delta_v) : std::string()) + ',' + fmt(r.delta_f) + ',' +
              (r.reverted ? "1" : "0") + ',' + fmt(r.imag_ratio) + '\n';
    }
  write_text(dir / "convergence.csv", conv);

  const auto& p = out.primary();
  std::vector<const ScattererField*> cols{&p.truth, &p.trace.born().estimate, &p.trace.result().estimate};
  std::string header = "x,v_true,v_born,v_final";
  if (out.runs.size() > 1) {
    cols.push_back(&out.average);
    header += ",v_average";
  }
  const CrossSection cs = cross_section(cols);
  std::string text = header + '\n';
  for (std::size_t i = 0; i < cs.x.size(); ++i) {
    text += fmt(cs.x[i]);
    for (const auto& c : cs.columns) text += ',' + fmt(c[i]);
    text += '\n';
  }
  write_text(dir / "cross_section.csv", text);

  const FieldFormat ff = out.config.output.format;
  if (out.config.output.fields) {
    write_field(p.truth, dir / field_file_name("v_true", ff), ff);
    write_field(p.trace.born().estimate, dir / field_file_name("v_born", ff), ff);
    write_field(p.trace.result().estimate, dir / field_file_name("v_final", ff), ff);
    if (out.runs.size() > 1) write_field(out.average, dir / field_file_name("v_average", ff), ff);
  }
  if (out.config.output.amplitudes)
    write_amplitude(p.trace.measured, dir / field_file_name("f_measured", ff), ff);
}

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e))
    if (err->kind() == ErrorKind::Config || err->kind() == ErrorKind::Io) return 2;
  return 3;
}

json error_json(const std::exception& e, int exit_code) {
  json err = {{"message", e.what()}, {"exit_code", exit_code}};
  if (const auto* te = dynamic_cast<const Error*>(&e)) {
    err["kind"] = to_string(te->kind());
    if (const auto* se = dynamic_cast<const SingularSystemError*>(&e)) err["condition_estimate"] = se->condition_estimate();
  } else {
    err["kind"] = "internal";
  }
  return {{"tool", "tomolab"}, {"version", version()}, {"error", err}};
}

}  // namespace tomolab::app
