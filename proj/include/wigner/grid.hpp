#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wigner {

/// Symmetric offset velocity grid: 2K nodes at v = ±(j + 1/2)·dv, j = 0..K-1.
///
/// Nodes are enumerated in ascending signed order by an index in [0, 2K):
/// index K + j is the positive node (j + 1/2)·dv and index K - 1 - j its mirror.
/// v = 0 is never a node, so 1/v is finite everywhere on the grid.
struct VelocityGrid {
  int half_count = 0;
  double spacing = 0.0;

  VelocityGrid() = default;
  VelocityGrid(int half_count, double spacing);

  int size() const { return 2 * half_count; }
  double node(int index) const { return (index - half_count + 0.5) * spacing; }
  /// Positive node j (0-based), (j + 1/2)·dv.
  double positive_node(int j) const { return (j + 0.5) * spacing; }
  int mirror(int index) const { return 2 * half_count - 1 - index; }
  double v_max() const { return (half_count - 0.5) * spacing; }
  std::vector<double> nodes() const;

  bool operator==(const VelocityGrid& other) const = default;
};

/// Uniform grid on [-l/2, l/2] with M steps.
struct SpaceGrid {
  double length = 0.0;
  int steps = 0;

  SpaceGrid() = default;
  SpaceGrid(double length, int steps);

  double dx() const { return length / steps; }
  double left() const { return -0.5 * length; }
  double right() const { return 0.5 * length; }
  int size() const { return steps + 1; }
  /// Node i in [0, M]; the last node is exactly l/2.
  double node(int i) const { return i == steps ? right() : left() + i * dx(); }

  bool operator==(const SpaceGrid& other) const = default;
};

enum class Parity { even, odd, none };

const char* to_string(Parity p);

/// Samples of f(x, ·) at one x on a velocity grid.
///
/// The parity tag is advisory. Nothing branches on it silently; call
/// parity_defect() or validate_parity() to check it against the values.
struct GridFunction {
  VelocityGrid grid;
  std::vector<double> values;
  Parity parity = Parity::none;

  GridFunction() = default;
  explicit GridFunction(const VelocityGrid& g, Parity p = Parity::none)
      : grid(g), values(static_cast<size_t>(g.size()), 0.0), parity(p) {}
  GridFunction(const VelocityGrid& g, std::vector<double> vals, Parity p = Parity::none);

  static GridFunction sample(const VelocityGrid& g, const std::function<double(double)>& fn,
                             Parity p = Parity::none);

  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
  int size() const { return static_cast<int>(values.size()); }
};

/// max_j |f(v_j) ∓ f(-v_j)| / max(max_j |f(v_j)|, tiny). Zero for an exact parity.
double parity_defect(std::span<const double> values, Parity p);

/// Throws ContractError when the tag is even/odd and the relative defect exceeds tol.
void validate_parity(const GridFunction& f, double tol = 1e-12);

/// P_e f = (f(v) + f(-v))/2 or P_o f = (f(v) - f(-v))/2.
GridFunction parity_project(const GridFunction& f, Parity which);

enum class Side { plus, minus };

/// Values at positive (plus) or negative (minus) nodes, ascending in signed v.
std::vector<double> inflow_restrict(const GridFunction& f, Side side);

/// Inverse of the two restrictions.
GridFunction inflow_combine(const VelocityGrid& g, std::span<const double> minus,
                            std::span<const double> plus);

/// Midpoint rule dv · Σ v_j^n f(v_j).
double velocity_moment(const GridFunction& f, int n);
double velocity_moment(const VelocityGrid& g, std::span<const double> values, int n);

/// sqrt(dv · Σ f(v_j)^2).
double l2_norm(const GridFunction& f);
double l2_norm(const VelocityGrid& g, std::span<const double> values);

/// Builds a full vector from positive-node coordinates, mirrored with the given parity.
GridFunction from_positive(const VelocityGrid& g, std::span<const double> positive, Parity p);

void require_same_grid(const VelocityGrid& a, const VelocityGrid& b, const char* where);

}  // namespace wigner
