#include "wigner/kernel_table.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#include "wigner/error.hpp"

namespace wigner {

KernelTable::KernelTable(const PotentialSpec& spec, const VelocityGrid& vgrid,
                         const SpaceGrid& sgrid, int moment_order)
    : spec_(spec), vgrid_(vgrid), sgrid_(sgrid) {
  validate(spec_);
  if (moment_order < 1 || moment_order % 2 == 0)
    throw ContractError("KernelTable: moment_order must be odd and >= 1");
  moment_order_ = std::min(moment_order, spec_.max_derivative() % 2 == 1
                                             ? spec_.max_derivative()
                                             : spec_.max_derivative() - 1);
  samples_ = static_cast<size_t>(4 * vgrid_.half_count);
  const int stations = station_count();
  const double h = 0.5 * vgrid_.spacing;
  const bool analytic = spec_.family != PotentialFamily::tabulated;
  dv_method_ = analytic ? "analytic" : "central-difference-4";

  // Two guard samples past the end feed the finite-difference stencil.
  const size_t guard = analytic ? 0 : 2;
  vw_.assign(static_cast<size_t>(stations) * samples_, 0.0);
  dvw_.assign(static_cast<size_t>(stations) * samples_, 0.0);
  moments_.assign(static_cast<size_t>(stations), {});
  h1_.assign(static_cast<size_t>(stations), 0.0);

  std::exception_ptr failure;
  std::mutex failure_mutex;

#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < stations; ++s) {
    try {
      const double x = station_x(s);
      const std::vector<double> ext = kernel_row(spec_, x, h, samples_ + guard);
      double* out = vw_.data() + static_cast<size_t>(s) * samples_;
      double* dout = dvw_.data() + static_cast<size_t>(s) * samples_;
      std::copy(ext.begin(), ext.begin() + static_cast<std::ptrdiff_t>(samples_), out);
      if (analytic) {
        for (size_t q = 0; q < samples_; ++q) dout[q] = eval_kernel_dv(spec_, x, static_cast<double>(q) * h);
      } else {
        auto at = [&](long q) { return q < 0 ? -ext[static_cast<size_t>(-q)] : ext[static_cast<size_t>(q)]; };
        for (long q = 0; q < static_cast<long>(samples_); ++q) {
          dout[q] = (-at(q + 2) + 8.0 * at(q + 1) - 8.0 * at(q - 1) + at(q - 2)) / (12.0 * h);
        }
      }
      // Trapezoid over q in [-(4K-1), 4K-1]; |Vw|^2 and |∂_v Vw|^2 are even in v.
      double l2 = 0.0;
      double d2 = dout[0] * dout[0];
      for (size_t q = 1; q < samples_; ++q) {
        const double w = q + 1 == samples_ ? 1.0 : 2.0;
        l2 += w * out[q] * out[q];
        d2 += w * dout[q] * dout[q];
      }
      h1_[static_cast<size_t>(s)] = std::sqrt(h * (l2 + d2));
      moments_[static_cast<size_t>(s)] = kernel_moments(spec_, x, moment_order_);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double KernelTable::station_x(int s) const {
  if (s == station_count() - 1) return sgrid_.right();
  return sgrid_.left() + 0.5 * s * sgrid_.dx();
}

double KernelTable::truncation_residual() const {
  double worst = 0.0;
  const int last = vgrid_.size() - 1;
  for (int s = 0; s < station_count(); ++s) worst = std::max(worst, std::abs(at_node(s, last)));
  return worst;
}

double kernel_h1_norm(const KernelTable& table, int station) {
  if (station < 0 || station >= table.station_count())
    throw ContractError("kernel_h1_norm: station out of range");
  return table.h1_norm(station);
}

}  // namespace wigner
