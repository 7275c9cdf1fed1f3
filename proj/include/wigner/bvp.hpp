#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "wigner/grid.hpp"
#include "wigner/kernel_table.hpp"
#include "wigner/propagation.hpp"

namespace wigner {

/// Inflow data: f_L on the positive nodes (entering at -l/2), f_R on the negative
/// nodes (entering at +l/2). Both ordered by ascending signed velocity.
struct BoundaryData {
  VelocityGrid grid;
  std::vector<double> f_L;
  std::vector<double> f_R;

  void validate() const;
};

enum class SolveMode { general, symmetric_shortcut, direct };

const char* to_string(SolveMode m);

struct Provenance {
  SolveMode mode = SolveMode::general;
  std::string scheme;  // "rk4" or the oracle's upwind scheme
  double inflow_left = 0.0;            // ||P+ f(-l/2) - f_L||
  double inflow_right = 0.0;           // ||P- f(l/2) - f_R||
  double inflow_relative = 0.0;        // max of the two over max(||f_L||, ||f_R||)
  double current_drift = 0.0;          // max_i |J_1(x_i) - J_1(x_0)|
  double orthogonality_residual = 0.0; // max_i |dv Σ Vw(x_i, v) f_o(x_i, v)|
  double assembly_condition = 1.0;     // cond(Q_rl R_lr + I), 1 for the shortcut
  double solver_residual = 0.0;        // oracle only: relative linear-system residual
  bool inflow_flagged = false;         // inflow_relative above tolerance (general mode)

  nlohmann::json to_json() const;
};

/// f(x_i, ·) for every space node plus how it was obtained.
struct SolutionField {
  SpaceGrid sgrid;
  VelocityGrid vgrid;
  std::vector<GridFunction> slices;
  std::vector<GridFunction> even_part;  // empty for the oracle
  std::vector<GridFunction> odd_part;
  std::vector<double> orthogonality;    // per space node
  Provenance provenance;
};

struct BoundaryParts {
  GridFunction even0;
  GridFunction odd0;
  double condition = 1.0;
};

/// Even and odd parts of f(-l/2) from the inflow data:
///   e = (Q_rl R_lr + I)^{-1} (Q_rl f_R(-v) + f_L(v)),  o = f_L - e   on v > 0.
/// Throws AssemblyError if the system is singular or cond > max_condition.
BoundaryParts assemble_boundary(const BoundaryData& bd, const PropagatorMatrix& R_lr,
                                const PropagatorMatrix& Q_rl, double max_condition = 1e12);

/// Parts for the even-potential shortcut Q = R = I.
BoundaryParts assemble_symmetric(const BoundaryData& bd);

struct BvpOptions {
  double inflow_tolerance = 1e-6;
  double max_condition = 1e12;
};

/// Parity-decomposition solve: propagators, boundary assembly, then both IVPs
/// marched from -l/2 and summed. symmetric_shortcut requires an even potential.
SolutionField solve_bvp(const KernelTable& table, const BoundaryData& bd, SolveMode mode,
                        const BvpOptions& options = {});

/// General mode with propagators built by the caller.
SolutionField solve_bvp(const KernelTable& table, const BoundaryData& bd,
                        const PropagatorMatrix& R_lr, const PropagatorMatrix& Q_rl,
                        const BvpOptions& options = {});

/// dv · Σ_j Vw(x, v_j) f(v_j) at a station: the orthogonality condition residual.
double orthogonality_residual(const KernelTable& table, int station, const GridFunction& f);

/// Fills inflow residuals, current drift and orthogonality residuals.
void compute_diagnostics(const KernelTable& table, const BoundaryData& bd, SolutionField& field,
                         double inflow_tolerance);

struct SignReport {
  struct Entry {
    double sign = 1.0;
    double inflow_right = 0.0;
    double inflow_relative = 0.0;
    double condition = 1.0;
  };
  Entry governing;  // df/dx = +B f
  Entry flipped;    // df/dx = -B f
  std::string consistent_sign;
  nlohmann::json to_json() const;
};

/// Assembles the boundary data with propagators of +B and of -B, marches the
/// governing equation df/dx = B f from the assembled data and reports which sign
/// reproduces the right inflow.
SignReport check_sign_convention(const KernelTable& table, const BoundaryData& bd,
                                 double inflow_tolerance = 1e-6);

}  // namespace wigner
