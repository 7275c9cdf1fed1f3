#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <vector>

#include "wigner/grid.hpp"
#include "wigner/kernel_table.hpp"

namespace wigner {

enum class Direction { l_to_r, r_to_l };

const char* to_string(Direction d);

/// Marches df/dx = sign·B(x) f with classical RK4 on the table's space grid,
/// using the half-step stations for the midpoint stages.
///
/// l_to_r starts from f0 at -l/2; r_to_l starts at +l/2 and steps with -dx.
/// The result is indexed by space node (slice i sits at x_i) in both directions.
/// When `parity` is even or odd, f0 is validated against it and every slice is
/// tagged with it. `sign` = -1 integrates the flipped equation.
std::vector<GridFunction> march_ivp(const KernelTable& table, const GridFunction& f0,
                                    Parity parity, Direction direction, double sign = 1.0);

/// Dense map of a parity component across [-l/2, l/2], acting on positive-node
/// coordinates (negative nodes follow from the parity).
struct PropagatorMatrix {
  Parity parity = Parity::even;
  Direction direction = Direction::l_to_r;
  VelocityGrid vgrid;
  SpaceGrid sgrid;
  Eigen::MatrixXd matrix;
  double sign = 1.0;

  /// Odd-subspace propagators exist only because the grid excludes v = 0.
  bool grid_regularized() const { return parity == Parity::odd; }
  /// sigma_max / sigma_min from an SVD.
  double condition_number() const;
  /// Sidecar description: parity, direction, grids, scheme, condition number.
  nlohmann::json sidecar() const;
};

/// Parallel construction: the K basis columns are marched together in the
/// reduced parity coordinates, column blocks distributed over OpenMP threads.
PropagatorMatrix build_propagator(const KernelTable& table, Parity parity, Direction direction,
                                  double sign = 1.0);

namespace serial {
/// Reference construction: one full-grid march_ivp per basis vector.
PropagatorMatrix build_propagator(const KernelTable& table, Parity parity, Direction direction,
                                  double sign = 1.0);
}  // namespace serial

}  // namespace wigner
