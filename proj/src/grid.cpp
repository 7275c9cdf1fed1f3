#include "wigner/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wigner/error.hpp"

namespace wigner {

VelocityGrid::VelocityGrid(int k, double dv) : half_count(k), spacing(dv) {
  if (k < 1) throw ContractError("VelocityGrid: half_count must be >= 1");
  if (!(dv > 0.0) || !std::isfinite(dv)) throw ContractError("VelocityGrid: spacing must be > 0");
}

std::vector<double> VelocityGrid::nodes() const {
  std::vector<double> out(static_cast<size_t>(size()));
  for (int i = 0; i < size(); ++i) out[static_cast<size_t>(i)] = node(i);
  return out;
}

SpaceGrid::SpaceGrid(double l, int m) : length(l), steps(m) {
  if (!(l > 0.0) || !std::isfinite(l)) throw ContractError("SpaceGrid: length must be > 0");
  if (m < 1) throw ContractError("SpaceGrid: steps must be >= 1");
}

const char* to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::none: return "none";
  }
  return "none";
}

GridFunction::GridFunction(const VelocityGrid& g, std::vector<double> vals, Parity p)
    : grid(g), values(std::move(vals)), parity(p) {
  if (static_cast<int>(values.size()) != g.size()) {
    std::ostringstream os;
    os << "GridFunction: expected " << g.size() << " values, got " << values.size();
    throw ContractError(os.str());
  }
}

GridFunction GridFunction::sample(const VelocityGrid& g, const std::function<double(double)>& fn,
                                  Parity p) {
  GridFunction f(g, p);
  for (int i = 0; i < g.size(); ++i) f[i] = fn(g.node(i));
  return f;
}

double parity_defect(std::span<const double> values, Parity p) {
  if (p == Parity::none) return 0.0;
  const int n = static_cast<int>(values.size());
  const double s = p == Parity::even ? 1.0 : -1.0;
  double scale = 0.0;
  double defect = 0.0;
  for (int i = 0; i < n; ++i) {
    scale = std::max(scale, std::abs(values[static_cast<size_t>(i)]));
    defect = std::max(defect, std::abs(values[static_cast<size_t>(i)] -
                                       s * values[static_cast<size_t>(n - 1 - i)]));
  }
  if (scale == 0.0) return 0.0;
  return defect / scale;
}

void validate_parity(const GridFunction& f, double tol) {
  const double d = parity_defect(f.values, f.parity);
  if (d > tol) {
    std::ostringstream os;
    os << "grid function tagged " << to_string(f.parity) << " has relative parity defect " << d;
    throw ContractError(os.str());
  }
}

GridFunction parity_project(const GridFunction& f, Parity which) {
  if (which == Parity::none) throw ContractError("parity_project: which must be even or odd");
  GridFunction out(f.grid, which);
  const int n = f.size();
  const double s = which == Parity::even ? 1.0 : -1.0;
  for (int i = 0; i < n; ++i) out[i] = 0.5 * (f[i] + s * f[n - 1 - i]);
  return out;
}

std::vector<double> inflow_restrict(const GridFunction& f, Side side) {
  const int k = f.grid.half_count;
  auto first = f.values.begin() + (side == Side::plus ? k : 0);
  return {first, first + k};
}

GridFunction inflow_combine(const VelocityGrid& g, std::span<const double> minus,
                            std::span<const double> plus) {
  const auto k = static_cast<size_t>(g.half_count);
  if (minus.size() != k || plus.size() != k)
    throw ContractError("inflow_combine: half vectors must have length K");
  GridFunction f(g);
  std::copy(minus.begin(), minus.end(), f.values.begin());
  std::copy(plus.begin(), plus.end(), f.values.begin() + static_cast<std::ptrdiff_t>(k));
  return f;
}

double velocity_moment(const VelocityGrid& g, std::span<const double> values, int n) {
  if (n < 0) throw ContractError("velocity_moment: n must be >= 0");
  double sum = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double v = g.node(i);
    double p = 1.0;
    for (int e = 0; e < n; ++e) p *= v;
    sum += p * values[static_cast<size_t>(i)];
  }
  return g.spacing * sum;
}

double velocity_moment(const GridFunction& f, int n) { return velocity_moment(f.grid, f.values, n); }

double l2_norm(const VelocityGrid& g, std::span<const double> values) {
  double sum = 0.0;
  for (double x : values) sum += x * x;
  return std::sqrt(g.spacing * sum);
}

double l2_norm(const GridFunction& f) { return l2_norm(f.grid, f.values); }

GridFunction from_positive(const VelocityGrid& g, std::span<const double> positive, Parity p) {
  const int k = g.half_count;
  if (static_cast<int>(positive.size()) != k)
    throw ContractError("from_positive: expected K positive-node values");
  if (p == Parity::none) throw ContractError("from_positive: parity must be even or odd");
  const double s = p == Parity::even ? 1.0 : -1.0;
  GridFunction f(g, p);
  for (int j = 0; j < k; ++j) {
    f[k + j] = positive[static_cast<size_t>(j)];
    f[k - 1 - j] = s * positive[static_cast<size_t>(j)];
  }
  return f;
}

void require_same_grid(const VelocityGrid& a, const VelocityGrid& b, const char* where) {
  if (!(a == b)) {
    std::ostringstream os;
    os << where << ": velocity grid mismatch (K=" << a.half_count << ", dv=" << a.spacing
       << " vs K=" << b.half_count << ", dv=" << b.spacing << ")";
    throw ContractError(os.str());
  }
}

}  // namespace wigner
