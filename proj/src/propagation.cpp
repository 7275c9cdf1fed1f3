#include "wigner/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>
#include <sstream>

#include "wigner/error.hpp"
#include "wigner/wigner_op.hpp"

namespace wigner {

const char* to_string(Direction d) { return d == Direction::l_to_r ? "l_to_r" : "r_to_l"; }

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

[[noreturn]] void diverged(double x) {
  std::ostringstream os;
  os << "non-finite values while marching, reached x=" << x;
  throw DivergenceError(os.str(), x);
}

}  // namespace

std::vector<GridFunction> march_ivp(const KernelTable& table, const GridFunction& f0,
                                    Parity parity, Direction direction, double sign) {
  const VelocityGrid& g = table.velocity_grid();
  const SpaceGrid& sg = table.space_grid();
  require_same_grid(g, f0.grid, "march_ivp");
  if (parity != Parity::none) {
    GridFunction tagged = f0;
    tagged.parity = parity;
    validate_parity(tagged, 1e-12);
  }
  const int m_steps = sg.steps;
  const int n = g.size();
  const bool forward = direction == Direction::l_to_r;
  const double h = (forward ? 1.0 : -1.0) * sg.dx();

  std::vector<GridFunction> slices(static_cast<size_t>(sg.size()));
  const int first = forward ? 0 : m_steps;
  slices[static_cast<size_t>(first)] = GridFunction(g, f0.values, parity);

  std::vector<double> x(f0.values);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto rhs = [&](int station, const std::vector<double>& in, std::vector<double>& out) {
    apply_B(table, station, in, out);
    if (sign != 1.0)
      for (double& o : out) o *= sign;
  };

  for (int step = 0; step < m_steps; ++step) {
    const int node = forward ? step : m_steps - step;
    const int next = forward ? node + 1 : node - 1;
    const int s0 = KernelTable::station_of_node(node);
    const int sm = forward ? s0 + 1 : s0 - 1;
    const int s1 = KernelTable::station_of_node(next);

    rhs(s0, x, k1);
    for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    rhs(sm, tmp, k2);
    for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    rhs(sm, tmp, k3);
    for (int i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    rhs(s1, tmp, k4);
    for (int i = 0; i < n; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    if (!all_finite(x)) diverged(sg.node(next));
    slices[static_cast<size_t>(next)] = GridFunction(g, x, parity);
  }
  return slices;
}

double PropagatorMatrix::condition_number() const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0.0;
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

nlohmann::json PropagatorMatrix::sidecar() const {
  return {{"parity", to_string(parity)},
          {"direction", to_string(direction)},
          {"sign", sign},
          {"grid_regularized", grid_regularized()},
          {"velocity_grid", {{"K", vgrid.half_count}, {"dv", vgrid.spacing}}},
          {"space_grid", {{"l", sgrid.length}, {"M", sgrid.steps}}},
          {"scheme", {{"name", "rk4"}, {"dx", sgrid.dx()}, {"half_step_kernel", true}}},
          {"rows", matrix.rows()},
          {"cols", matrix.cols()},
          {"condition_number", condition_number()}};
}

PropagatorMatrix build_propagator(const KernelTable& table, Parity parity, Direction direction,
                                  double sign) {
  if (parity == Parity::none) throw ContractError("build_propagator: parity must be even or odd");
  const VelocityGrid& g = table.velocity_grid();
  const SpaceGrid& sg = table.space_grid();
  const int k_half = g.half_count;
  const bool forward = direction == Direction::l_to_r;
  const double h = (forward ? 1.0 : -1.0) * sg.dx();

  PropagatorMatrix p;
  p.parity = parity;
  p.direction = direction;
  p.vgrid = g;
  p.sgrid = sg;
  p.sign = sign;
  p.matrix = Eigen::MatrixXd::Identity(k_half, k_half);

  const int threads = std::max(1, std::min(omp_get_max_threads(), k_half));
  const int chunk = (k_half + threads - 1) / threads;
  double failed_at = std::numeric_limits<double>::quiet_NaN();

#pragma omp parallel for schedule(static) num_threads(threads)
  for (int t = 0; t < threads; ++t) {
    const int c0 = t * chunk;
    const int cols = std::min(chunk, k_half - c0);
    if (cols <= 0) continue;
    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(k_half, k_half).middleCols(c0, cols);
    Eigen::MatrixXd k1, k2, k3, k4;
    for (int step = 0; step < sg.steps; ++step) {
      const int node = forward ? step : sg.steps - step;
      const int s0 = KernelTable::station_of_node(node);
      const int sm = forward ? s0 + 1 : s0 - 1;
      const int s1 = forward ? s0 + 2 : s0 - 2;
      const Eigen::MatrixXd b0 = sign * reduced_B(table, s0, parity);
      const Eigen::MatrixXd bm = sign * reduced_B(table, sm, parity);
      const Eigen::MatrixXd b1 = sign * reduced_B(table, s1, parity);
      k1.noalias() = b0 * x;
      k2.noalias() = bm * (x + 0.5 * h * k1);
      k3.noalias() = bm * (x + 0.5 * h * k2);
      k4.noalias() = b1 * (x + h * k3);
      x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!all_finite(x)) {
#pragma omp critical
        failed_at = sg.node(forward ? node + 1 : node - 1);
        break;
      }
    }
    p.matrix.middleCols(c0, cols) = x;
  }
  if (!std::isnan(failed_at)) diverged(failed_at);
  return p;
}

namespace serial {

PropagatorMatrix build_propagator(const KernelTable& table, Parity parity, Direction direction,
                                  double sign) {
  if (parity == Parity::none) throw ContractError("build_propagator: parity must be even or odd");
  const VelocityGrid& g = table.velocity_grid();
  const int k_half = g.half_count;
  PropagatorMatrix p;
  p.parity = parity;
  p.direction = direction;
  p.vgrid = g;
  p.sgrid = table.space_grid();
  p.sign = sign;
  p.matrix.resize(k_half, k_half);
  const int end = direction == Direction::l_to_r ? table.space_grid().steps : 0;
  for (int j = 0; j < k_half; ++j) {
    std::vector<double> unit(static_cast<size_t>(k_half), 0.0);
    unit[static_cast<size_t>(j)] = 1.0;
    const GridFunction basis = from_positive(g, unit, parity);
    const auto slices = march_ivp(table, basis, parity, direction, sign);
    const auto pos = inflow_restrict(slices[static_cast<size_t>(end)], Side::plus);
    for (int i = 0; i < k_half; ++i) p.matrix(i, j) = pos[static_cast<size_t>(i)];
  }
  return p;
}

}  // namespace serial

}  // namespace wigner
