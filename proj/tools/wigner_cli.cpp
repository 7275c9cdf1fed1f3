// Command-line driver: run configs or presets, refinement studies, validation.

#include <CLI11.hpp>
#include <iostream>
#include <nlohmann/json.hpp>

#include "wigner/config.hpp"
#include "wigner/driver.hpp"
#include "wigner/error.hpp"

using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int fail(int code, const std::string& kind, const std::string& message, json extra = json::object()) {
  json j{{"status", "error"}, {"exit_code", code}, {"kind", kind}, {"message", message}};
  j.update(extra);
  std::cerr << j.dump() << "\n";
  return code;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const wigner::ValidationError& e) {
    return fail(kExitValidation, e.kind(), e.what(), {{"field", e.field()}});
  } catch (const wigner::ContractError& e) {
    return fail(kExitValidation, e.kind(), e.what());
  } catch (const wigner::NumericalError& e) {
    return fail(kExitNumerical, e.kind(), e.what(), {{"estimate", e.estimate()}});
  } catch (const wigner::Error& e) {
    return fail(kExitNumerical, e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail(kExitNumerical, "internal", e.what());
  }
}

wigner::RunConfig resolve(const std::string& config, const std::string& preset) {
  if (!preset.empty()) return wigner::preset_config(preset);
  if (config.empty()) throw wigner::ValidationError("config", "give a config file or --preset");
  return wigner::load_config(config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary Wigner equation solver: parity-decomposition BVP, moment hierarchy, upwind oracle"};
  app.set_version_flag("--version", wigner::kVersion);
  app.require_subcommand(1);

  std::string config, preset, output;
  auto* run = app.add_subcommand("run", "solve one configuration and write its artifacts");
  run->add_option("config", config, "INI config file");
  run->add_option("--preset", preset, "start from a named preset instead of a file");
  run->add_option("-o,--output", output, "override [run] output_dir");

  int levels = 3;
  bool no_oracle = false;
  auto* refine = app.add_subcommand("refine", "refinement study: halve dx and dv per level");
  refine->add_option("config", config, "INI config file");
  refine->add_option("--preset", preset, "start from a named preset instead of a file");
  refine->add_option("--levels", levels, "number of resolution levels (>= 2)");
  refine->add_flag("--no-oracle", no_oracle, "skip the direct upwind solves");
  refine->add_option("-o,--output", output, "override [run] output_dir");

  auto* presets = app.add_subcommand("presets", "preset configurations");
  auto* list = presets->add_subcommand("list", "list preset names");
  presets->require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("config", config, "INI config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (list->parsed()) {
    for (const auto& [name, text] : wigner::list_presets()) std::cout << name << "\t" << text << "\n";
    return 0;
  }
  if (validate->parsed()) {
    return guarded([&] {
      const auto cfg = wigner::load_config(config);
      const auto warnings = wigner::validate_config(cfg);
      std::cout << json{{"status", "ok"}, {"warnings", warnings}, {"config", cfg.to_json()}}.dump(2) << "\n";
      return 0;
    });
  }
  if (run->parsed()) {
    return guarded([&] {
      auto cfg = resolve(config, preset);
      if (!output.empty()) cfg.output_dir = output;
      const auto s = wigner::run(cfg);
      for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
      json out{{"status", "ok"}, {"output_dir", s.output_dir.string()}, {"files", s.files}};
      const auto& d = s.diagnostics;
      if (d.contains("provenance")) out["provenance"] = d["provenance"];
      if (d.contains("oracle_global_relative")) out["oracle_global_relative"] = d["oracle_global_relative"];
      std::cout << out.dump(2) << "\n";
      return 0;
    });
  }
  if (refine->parsed()) {
    return guarded([&] {
      auto cfg = resolve(config, preset);
      if (!output.empty()) cfg.output_dir = output;
      const auto report = wigner::refine_study(cfg, {levels, !no_oracle});
      json out{{"status", "ok"}, {"pipeline", report["pipeline"]}};
      if (report.contains("oracle")) out["oracle"] = report["oracle"];
      std::cout << out.dump(2) << "\n";
      return 0;
    });
  }
  return 0;
}
