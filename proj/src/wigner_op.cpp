#include "wigner/wigner_op.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wigner/error.hpp"

namespace wigner {

namespace {

void check_station(const KernelTable& table, int station, const char* where) {
  if (station < 0 || station >= table.station_count())
    throw ContractError(std::string(where) + ": station out of range");
}

void check_input(const KernelTable& table, int station, const VelocityGrid& g, const char* where) {
  check_station(table, station, where);
  require_same_grid(table.velocity_grid(), g, where);
}

// t[m + 2K - 1] = Vw(x, m dv), m in [-(2K-1), 2K-1].
std::vector<double> toeplitz_row(const KernelTable& table, int station) {
  const int n = table.velocity_grid().size();
  std::vector<double> t(static_cast<size_t>(2 * n - 1));
  for (int m = -(n - 1); m <= n - 1; ++m) t[static_cast<size_t>(m + n - 1)] = table.offset(station, m);
  return t;
}

}  // namespace

void apply_theta(const KernelTable& table, int station, std::span<const double> f,
                 std::span<double> out) {
  check_station(table, station, "apply_theta");
  const VelocityGrid& g = table.velocity_grid();
  const int n = g.size();
  if (static_cast<int>(f.size()) != n || static_cast<int>(out.size()) != n)
    throw ContractError("apply_theta: vector length does not match the grid");
  const std::vector<double> t = toeplitz_row(table, station);
  const double* t0 = t.data() + (n - 1);  // t0[m] = Vw(m dv)
  const double dv = g.spacing;
  const int K = g.half_count;
  // Work on the even and odd parts over positive nodes and mirror the result, so an
  // input of exact parity gives an output of exact parity even under cancellation.
  std::vector<double> e(static_cast<size_t>(K)), o(static_cast<size_t>(K));
  for (int k = 0; k < K; ++k) {
    const double p = f[static_cast<size_t>(K + k)], m = f[static_cast<size_t>(K - 1 - k)];
    e[static_cast<size_t>(k)] = 0.5 * (p + m);
    o[static_cast<size_t>(k)] = 0.5 * (p - m);
  }
#pragma omp parallel for schedule(static)
  for (int j = 0; j < K; ++j) {
    double se = 0.0, so = 0.0;
    for (int k = 0; k < K; ++k) {
      const double minus = t0[j - k], plus = t0[j + k + 1];
      se += (minus + plus) * e[static_cast<size_t>(k)];
      so += (minus - plus) * o[static_cast<size_t>(k)];
    }
    out[static_cast<size_t>(K + j)] = dv * (se + so);
    out[static_cast<size_t>(K - 1 - j)] = dv * (so - se);
  }
}

GridFunction apply_theta(const KernelTable& table, int station, const GridFunction& f) {
  check_input(table, station, f.grid, "apply_theta");
  GridFunction out(f.grid);
  apply_theta(table, station, f.values, out.values);
  if (f.parity == Parity::even) out.parity = Parity::odd;
  if (f.parity == Parity::odd) out.parity = Parity::even;
  return out;
}

void apply_B(const KernelTable& table, int station, std::span<const double> f,
             std::span<double> out) {
  apply_theta(table, station, f, out);
  const VelocityGrid& g = table.velocity_grid();
  for (int j = 0; j < g.size(); ++j) out[static_cast<size_t>(j)] /= g.node(j);
}

GridFunction apply_B(const KernelTable& table, int station, const GridFunction& f) {
  check_input(table, station, f.grid, "apply_B");
  GridFunction out(f.grid, f.parity);
  apply_B(table, station, f.values, out.values);
  return out;
}

GridFunction apply_A(const KernelTable& table, int station, const GridFunction& f) {
  check_input(table, station, f.grid, "apply_A");
  const VelocityGrid& g = f.grid;
  GridFunction out(g, f.parity);
  apply_theta(table, station, f.values, out.values);
  // c = dv · Σ_k Vw(x, 0 - v_k) f(v_k)
  double c = 0.0;
  for (int k = 0; k < g.size(); ++k) c -= table.at_node(station, k) * f[k];
  c *= g.spacing;
  for (int j = 0; j < g.size(); ++j) out[j] = (out[j] - c) / g.node(j);
  return out;
}

namespace serial {

GridFunction apply_theta(const KernelTable& table, int station, const GridFunction& f) {
  check_input(table, station, f.grid, "serial::apply_theta");
  const int n = f.grid.size();
  GridFunction out(f.grid);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += table.offset(station, j - k) * f[k];
    out[j] = f.grid.spacing * acc;
  }
  if (f.parity == Parity::even) out.parity = Parity::odd;
  if (f.parity == Parity::odd) out.parity = Parity::even;
  return out;
}

GridFunction apply_B(const KernelTable& table, int station, const GridFunction& f) {
  GridFunction out = serial::apply_theta(table, station, f);
  for (int j = 0; j < f.grid.size(); ++j) out[j] /= f.grid.node(j);
  out.parity = f.parity;
  return out;
}

}  // namespace serial

Eigen::MatrixXd theta_matrix(const KernelTable& table, int station) {
  check_station(table, station, "theta_matrix");
  const VelocityGrid& g = table.velocity_grid();
  const int n = g.size();
  Eigen::MatrixXd t(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) t(j, k) = g.spacing * table.offset(station, j - k);
  return t;
}

Eigen::MatrixXd reduced_B(const KernelTable& table, int station, Parity parity) {
  check_station(table, station, "reduced_B");
  if (parity == Parity::none) throw ContractError("reduced_B: parity must be even or odd");
  const VelocityGrid& g = table.velocity_grid();
  const int k_half = g.half_count;
  const double s = parity == Parity::even ? 1.0 : -1.0;
  Eigen::MatrixXd b(k_half, k_half);
  for (int k = 0; k < k_half; ++k) {
    for (int j = 0; j < k_half; ++j) {
      b(j, k) = g.spacing * (table.offset(station, j - k) + s * table.offset(station, j + k + 1)) /
                g.positive_node(j);
    }
  }
  return b;
}

double subspace_norm(const KernelTable& table, int station, Parity parity) {
  const Eigen::MatrixXd b = reduced_B(table, station, parity);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

namespace {

GridFunction random_envelope_polynomial(const VelocityGrid& grid, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> degree(0, 4);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> width(0.4, 1.0);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  const int d = degree(rng);
  std::vector<double> c(static_cast<size_t>(d + 1));
  for (double& ci : c) ci = coeff(rng);
  const double w = width(rng);
  const double u = shift(rng);
  return GridFunction::sample(grid, [&](double v) {
    double p = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * v + *it;
    const double z = (v - u) / w;
    return p * std::exp(-0.5 * z * z);
  });
}

}  // namespace

GridFunction random_even_function(const VelocityGrid& grid, std::mt19937_64& rng) {
  for (;;) {
    GridFunction f = parity_project(random_envelope_polynomial(grid, rng), Parity::even);
    if (l2_norm(f) > 1e-6) return f;
  }
}

GridFunction random_odd_function(const VelocityGrid& grid, std::mt19937_64& rng) {
  for (;;) {
    GridFunction f = parity_project(random_envelope_polynomial(grid, rng), Parity::odd);
    if (l2_norm(f) > 1e-6) return f;
  }
}

nlohmann::json BoundReport::to_json() const {
  return {{"x", x},         {"bound", bound},   {"max_ratio", max_ratio}, {"trials", trials},
          {"seed", seed},   {"tolerance", tolerance}, {"pass", pass}};
}

BoundReport operator_bound_check(const KernelTable& table, int station, int trials,
                                 std::uint64_t seed, double tolerance) {
  check_station(table, station, "operator_bound_check");
  if (trials < 1) throw ContractError("operator_bound_check: trials must be >= 1");
  BoundReport r;
  r.x = table.station_x(station);
  r.bound = std::sqrt(8.0) * kernel_h1_norm(table, station);
  r.trials = trials;
  r.seed = seed;
  r.tolerance = tolerance;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const GridFunction f = random_even_function(table.velocity_grid(), rng);
    const GridFunction af = apply_A(table, station, f);
    r.max_ratio = std::max(r.max_ratio, l2_norm(af) / l2_norm(f));
  }
  r.pass = r.max_ratio <= r.bound * (1.0 + tolerance);
  return r;
}

}  // namespace wigner
