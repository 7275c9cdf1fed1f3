#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <random>
#include <span>

#include "wigner/grid.hpp"
#include "wigner/kernel_table.hpp"

namespace wigner {

/// (Θf)(v_j) = dv · Σ_k Vw(x_s, v_j - v_k) f(v_k) at table station s.
/// Toeplitz product, rows distributed over OpenMP threads.
GridFunction apply_theta(const KernelTable& table, int station, const GridFunction& f);
void apply_theta(const KernelTable& table, int station, std::span<const double> f,
                 std::span<double> out);

/// (B f)(v_j) = (Θf)(v_j) / v_j.
GridFunction apply_B(const KernelTable& table, int station, const GridFunction& f);
void apply_B(const KernelTable& table, int station, std::span<const double> f,
             std::span<double> out);

/// (A f)(v_j) = dv · Σ_k (Vw(x, v_j - v_k) - Vw(x, -v_k)) / v_j · f(v_k).
/// Equal to B on even f; differs by a rank-one term on general f.
GridFunction apply_A(const KernelTable& table, int station, const GridFunction& f);

namespace serial {
/// Reference double loop over (j, k), single-threaded, no precomputed Toeplitz row.
GridFunction apply_theta(const KernelTable& table, int station, const GridFunction& f);
GridFunction apply_B(const KernelTable& table, int station, const GridFunction& f);
}  // namespace serial

/// Dense Θ at a station (2K x 2K), including the dv weight.
Eigen::MatrixXd theta_matrix(const KernelTable& table, int station);

/// B restricted to a parity subspace in positive-node coordinates (K x K):
/// B_p[j,k] = dv (Vw((j-k)dv) ± Vw((j+k+1)dv)) / v_j, + for even, - for odd.
Eigen::MatrixXd reduced_B(const KernelTable& table, int station, Parity parity);

/// Spectral norm of B on the even or odd subspace of the grid (same L2 weight on both sides).
double subspace_norm(const KernelTable& table, int station, Parity parity);

/// Reproducible random even function: P_e of a random polynomial times a
/// Gaussian envelope of random width.
GridFunction random_even_function(const VelocityGrid& grid, std::mt19937_64& rng);
GridFunction random_odd_function(const VelocityGrid& grid, std::mt19937_64& rng);

struct BoundReport {
  double x = 0.0;
  double bound = 0.0;      // sqrt(8) · ||Vw(x,·)||_H1
  double max_ratio = 0.0;  // max ||A f|| / ||f|| over the trials
  int trials = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.05;
  bool pass = false;

  nlohmann::json to_json() const;
};

/// Checks ||A f|| <= sqrt(8)·||Vw||_H1·||f|| on `trials` random even f, with a
/// relative slack `tolerance` for the discretization of both sides.
BoundReport operator_bound_check(const KernelTable& table, int station, int trials,
                                 std::uint64_t seed, double tolerance = 0.05);

}  // namespace wigner
