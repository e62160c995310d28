#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tomolab/app/config.hpp"
#include "tomolab/app/field_io.hpp"
#include "tomolab/app/scenario.hpp"
#include "tomolab/error.hpp"

namespace fs = std::filesystem;
using namespace tomolab;
using namespace tomolab::app;

namespace {

int report_failure(const std::exception& e, const fs::path& out_dir) {
  const int code = exit_code_for(e);
  const auto doc = error_json(e, code);
  std::cerr << doc.dump(2) << "\n";
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!ec) {
      try {
        write_text(out_dir / "error.json", doc.dump(2) + "\n");
      } catch (const std::exception&) {
        // The error already went to stderr.
      }
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative acoustic tomography: forward simulation, near-to-far transform and reconstruction"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  std::string preset_name, config_path, out_dir;
  std::uint64_t seed = 0;
  bool serial = false, normalize = false, quiet = false;
  auto* run = app.add_subcommand("run", "Run a scenario and write its artifacts");
  run->add_option("--preset", preset_name, "Scenario preset")
      ->required()
      ->check(CLI::IsMember(preset_names()));
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--config", config_path, "JSON config applied on top of the preset")->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "Noise seed override");
  run->add_flag("--serial", serial, "Process frequencies one at a time");
  run->add_flag("--normalize-report", normalize, "Zero all timings in report.json");
  run->add_flag("-q,--quiet", quiet, "No progress output");

  std::string show_preset, show_config;
  auto* show = app.add_subcommand("config", "Print the resolved configuration as JSON");
  show->add_option("--preset", show_preset, "Scenario preset")->required()->check(CLI::IsMember(preset_names()));
  show->add_option("--config", show_config, "JSON config applied on top of the preset")->check(CLI::ExistingFile);

  std::string in_path, out_path, from = "grid-csv", to = "binary", kind = "field";
  auto* exp = app.add_subcommand("export", "Convert a field or amplitude dump between formats");
  exp->add_option("--in", in_path, "Input file")->required()->check(CLI::ExistingFile);
  exp->add_option("--out", out_path, "Output file")->required();
  exp->add_option("--from", from, "Input format")->check(CLI::IsMember({"grid-csv", "binary"}));
  exp->add_option("--to", to, "Output format")->check(CLI::IsMember({"grid-csv", "binary"}));
  exp->add_option("--kind", kind, "Dump kind")->check(CLI::IsMember({"field", "amplitude"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*run) {
    try {
      RunConfig cfg = load_config(preset_name, config_path);
      if (*seed_opt) cfg.noise.seed = seed;
      RunOptions opt;
      opt.serial = serial;
      if (!quiet) opt.log = [](const std::string& s) { std::cerr << "tomolab: " << s << "\n"; };
      const ScenarioOutcome outcome = execute(cfg, opt);
      write_artifacts(outcome, out_dir, normalize);
      if (!quiet) {
        const auto& fin = outcome.primary().trace.result();
        std::cerr << "tomolab: status " << to_string(outcome.primary().trace.status);
        if (fin.delta_v) std::cerr << ", final delta_v " << *fin.delta_v;
        std::cerr << ", report " << (fs::path(out_dir) / "report.json").string() << "\n";
      }
      return 0;
    } catch (const std::exception& e) {
      return report_failure(e, out_dir);
    }
  }

  if (*show) {
    try {
      const RunConfig cfg = load_config(show_preset, show_config);
      cfg.validate();
      std::cout << to_json(cfg).dump(2) << "\n";
      return 0;
    } catch (const std::exception& e) {
      return report_failure(e, {});
    }
  }

  try {
    const FieldFormat src = parse_field_format(from), dst = parse_field_format(to);
    if (kind == "field")
      write_field(read_field(in_path, src), out_path, dst);
    else
      write_amplitude(read_amplitude(in_path, src), out_path, dst);
    return 0;
  } catch (const std::exception& e) {
    return report_failure(e, {});
  }
}
