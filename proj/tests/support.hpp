#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "wigner/grid.hpp"
#include "wigner/kernel_table.hpp"
#include "wigner/potential.hpp"

namespace testing_support {

inline wigner::VelocityGrid reference_vgrid() { return {64, 0.15}; }
inline wigner::SpaceGrid reference_sgrid() { return {10.0, 200}; }

inline wigner::GridFunction gaussian_bump(const wigner::VelocityGrid& g, double shift, double width = 1.0) {
  return wigner::GridFunction::sample(g, [=](double v) { return std::exp(-(v - shift) * (v - shift) / width); });
}

inline double max_abs_diff(const wigner::GridFunction& a, const wigner::GridFunction& b) {
  double m = 0.0;
  for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

inline double rel_l2_diff(const wigner::GridFunction& a, const wigner::GridFunction& b) {
  double d = 0.0, n = 0.0;
  for (int j = 0; j < a.size(); ++j) {
    d += (a[j] - b[j]) * (a[j] - b[j]);
    n += b[j] * b[j];
  }
  return n > 0.0 ? std::sqrt(d / n) : std::sqrt(d);
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("wigner_tests_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing_support
