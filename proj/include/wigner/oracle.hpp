#pragma once

#include <nlohmann/json.hpp>
#include <vector>

#include "wigner/bvp.hpp"

namespace wigner {

/// x-discretization of v ∂_x f = Θ f used by the direct solver. Both are upwind:
/// rows with v > 0 couple x_i to x_{i-1}, rows with v < 0 couple x_i to x_{i+1}.
enum class UpwindScheme {
  first_order,  // v (f_i - f_{i-1}) / dx = Θ_i f_i
  box,          // v (f_i - f_{i-1}) / dx = (Θ_i f_i + Θ_{i-1} f_{i-1}) / 2
};

const char* to_string(UpwindScheme s);

/// Direct discretization of the inflow BVP as one block-tridiagonal linear system of
/// size (M+1)·2K (inflow rows fixed to f_L, f_R), solved by block LU elimination in x.
/// Throws NumericalError when a diagonal block is singular.
SolutionField solve_direct(const KernelTable& table, const BoundaryData& bd,
                           UpwindScheme scheme = UpwindScheme::box);

struct FieldComparison {
  std::vector<double> slice_relative;  // per x node
  double global_relative = 0.0;        // ||a - b|| / max(||a||, ||b||) over the whole field
  std::vector<double> j0_difference;   // |J_0^a - J_0^b| per x node
  std::vector<double> j1_difference;
  double max_j0_difference = 0.0;
  double max_j1_difference = 0.0;

  nlohmann::json to_json() const;
};

FieldComparison compare_fields(const SolutionField& a, const SolutionField& b);

}  // namespace wigner
