#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wigner/grid.hpp"
#include "wigner/potential.hpp"
#include "wigner/propagation.hpp"

namespace wigner {

/// Odd velocity moments [J_1, J_3, ..., J_{2N-1}] at one x. Even moments of an
/// odd distribution vanish and are never stored.
struct MomentVector {
  int order = 0;
  std::vector<double> values;
  double x = 0.0;

  MomentVector() = default;
  MomentVector(std::vector<double> vals, double x_pos)
      : order(static_cast<int>(vals.size())), values(std::move(vals)), x(x_pos) {}

  double J(int n) const { return values[static_cast<size_t>((n - 1) / 2)]; }
};

/// Grid moments J_1..J_{2N-1} of f by the midpoint rule.
MomentVector odd_moments(const GridFunction& f, int order, double x = 0.0);

/// Sub-grid refinement used by solve_hierarchy (must be even).
inline constexpr int kHierarchyRefinement = 32;

/// Solves dJ_n/dx = Σ_{k=1,3,..,n-2} C(n-1,k) Vw_k(x) J_{n-1-k}(x), n = 1,3,...,2N-1,
/// from the boundary where `start` is given. The system is strictly lower
/// triangular in n, so each level is a cumulative quadrature of lower levels:
/// composite Simpson on the space grid refined `refinement` times, with kernel
/// moments evaluated exactly at the sub-nodes. r_to_l integrates the same system
/// backwards from +l/2. Returns one MomentVector per space node.
std::vector<MomentVector> solve_hierarchy(const PotentialSpec& spec, const SpaceGrid& sgrid,
                                          const MomentVector& start, Direction direction,
                                          int refinement = kHierarchyRefinement);

/// Moment-space transfer map (N x N, unit lower triangular); column m is the far-end
/// solution for the m-th unit start vector.
Eigen::MatrixXd build_moment_Q(const PotentialSpec& spec, const SpaceGrid& sgrid, int order,
                               Direction direction, int refinement = kHierarchyRefinement);

/// Truncated representative g(v) = Σ_m c_m He_{2m-1}(v) e^{-v²/2} whose grid moments
/// match the given J_1..J_{2N-1}. Not unique; a modeling choice.
struct Reconstruction {
  GridFunction function;
  Eigen::VectorXd coefficients;
  double condition_number = 0.0;
};

/// Throws IllPosedError when the moment-matching matrix is singular or its
/// condition number exceeds max_condition.
Reconstruction reconstruct_odd(const MomentVector& moments, const VelocityGrid& vgrid,
                               double max_condition = 1e12);

}  // namespace wigner
