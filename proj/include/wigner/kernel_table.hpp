#pragma once

#include <string>
#include <vector>

#include "wigner/grid.hpp"
#include "wigner/potential.hpp"

namespace wigner {

/// Wigner kernel samples on the grids used by the x-marching.
///
/// Stations are the space nodes of the doubled-resolution grid: station s sits at
/// x = -l/2 + s·dx/2, s = 0..2M, so space node i is station 2i and the RK4
/// half-steps are the odd stations. At each station the kernel is stored at all
/// half-integer multiples of dv, Vw(x, q·dv/2) for q = 0..4K-1: even q are the
/// velocity differences v_j - v_k, odd q the grid nodes themselves. Negative
/// arguments follow from odd symmetry. Immutable after construction.
class KernelTable {
 public:
  KernelTable(const PotentialSpec& spec, const VelocityGrid& vgrid, const SpaceGrid& sgrid,
              int moment_order = 1);

  const PotentialSpec& potential() const { return spec_; }
  const VelocityGrid& velocity_grid() const { return vgrid_; }
  const SpaceGrid& space_grid() const { return sgrid_; }

  int station_count() const { return 2 * sgrid_.steps + 1; }
  static int station_of_node(int i) { return 2 * i; }
  double station_x(int s) const;

  /// Vw(x_s, m·dv), m in (-2K, 2K).
  double offset(int station, int m) const {
    const double val = row(station)[static_cast<size_t>(2 * (m < 0 ? -m : m))];
    return m < 0 ? -val : val;
  }
  /// Vw(x_s, v_index) at the signed velocity node.
  double at_node(int station, int index) const {
    const int j = index - vgrid_.half_count;  // v = (j + 1/2)·dv
    const int q = 2 * j + 1;
    const double val = row(station)[static_cast<size_t>(q < 0 ? -q : q)];
    return q < 0 ? -val : val;
  }
  /// ∂_v Vw at the same half-integer sample points.
  double dv_sample(int station, int q) const {
    const double val = dvw_[static_cast<size_t>(station) * samples_ + static_cast<size_t>(q < 0 ? -q : q)];
    return val;  // ∂_v Vw is even in v
  }
  /// Contiguous samples Vw(x_s, q·dv/2), q = 0..4K-1.
  const double* row(int station) const {
    return vw_.data() + static_cast<size_t>(station) * samples_;
  }
  int samples_per_station() const { return static_cast<int>(samples_); }

  /// Odd kernel moments Vw_1, Vw_3, ... up to stored_moment_order().
  const std::vector<double>& moments(int station) const {
    return moments_[static_cast<size_t>(station)];
  }
  int stored_moment_order() const { return moment_order_; }

  /// (||Vw(x,·)||^2 + ||∂_v Vw(x,·)||^2)^(1/2) by the trapezoidal rule on the samples.
  double h1_norm(int station) const { return h1_[static_cast<size_t>(station)]; }

  /// "analytic" or the finite-difference stencil used for ∂_v Vw.
  const std::string& dv_method() const { return dv_method_; }

  /// Kernel magnitude max_x |Vw(x, ±v_max)|, the velocity truncation residual.
  double truncation_residual() const;

 private:
  PotentialSpec spec_;
  VelocityGrid vgrid_;
  SpaceGrid sgrid_;
  size_t samples_ = 0;
  int moment_order_ = 0;
  std::vector<double> vw_;
  std::vector<double> dvw_;
  std::vector<std::vector<double>> moments_;
  std::vector<double> h1_;
  std::string dv_method_;
};

/// Discrete H^1 norm of the kernel at space-grid station index.
double kernel_h1_norm(const KernelTable& table, int station);

}  // namespace wigner
