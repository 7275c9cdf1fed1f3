#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "wigner/config.hpp"

namespace wigner {

inline constexpr const char* kVersion = "0.3.0";

/// output_dir, placed under $WIGNER_OUTPUT_ROOT when that is set and output_dir is relative.
std::filesystem::path resolve_output_dir(const RunConfig& cfg);

struct RunSummary {
  std::filesystem::path output_dir;
  std::vector<std::string> files;  // relative to output_dir
  std::vector<std::string> warnings;
  nlohmann::json diagnostics;
};

/// Validates, runs the configured mode and writes every artifact plus manifest.json.
/// Throws ValidationError for bad input and the library's numerical errors otherwise.
RunSummary run(const RunConfig& cfg);

struct RefineOptions {
  int levels = 3;
  bool include_oracle = true;
};

/// Re-solves with dx and dv halved per level (v_max fixed) and reports pairwise
/// differences of consecutive levels on the coarsest grid plus observed orders.
/// The inflow extension is analytic and subtracted first; only the response is
/// interpolated in v (4-point Lagrange on each half-line).
/// Writes refine.json into the output directory and returns it.
nlohmann::json refine_study(const RunConfig& cfg, const RefineOptions& options);

}  // namespace wigner
