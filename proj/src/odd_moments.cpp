#include "wigner/odd_moments.hpp"

#include <cmath>
#include <sstream>

#include "wigner/error.hpp"

namespace wigner {

MomentVector odd_moments(const GridFunction& f, int order, double x) {
  if (order < 1) throw ContractError("odd_moments: order must be >= 1");
  std::vector<double> vals(static_cast<size_t>(order));
  for (int m = 0; m < order; ++m) vals[static_cast<size_t>(m)] = velocity_moment(f, 2 * m + 1);
  return {std::move(vals), x};
}

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Cumulative integral of g sampled at uniform spacing h (signed), I[0] = 0.
// Even nodes: composite Simpson. Odd nodes: the three-point rule
// (5 g_{p-1} + 8 g_p - g_{p+1}) h / 12 on the last half panel. The pairing makes
// the rule mirror-symmetric, so an odd integrand on a symmetric interval
// integrates to zero to round-off.
std::vector<double> cumulative_simpson(const std::vector<double>& g, double h) {
  const size_t n = g.size();
  std::vector<double> out(n, 0.0);
  // Kahan-compensated running sum over the Simpson panels
  double sum = 0.0, carry = 0.0;
  for (size_t p = 2; p < n; p += 2) {
    const double y = h / 3.0 * (g[p - 2] + 4.0 * g[p - 1] + g[p]) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    out[p] = sum;
  }
  for (size_t p = 1; p < n; p += 2) {
    if (p + 1 < n) {
      out[p] = out[p - 1] + h / 12.0 * (5.0 * g[p - 1] + 8.0 * g[p] - g[p + 1]);
    } else {
      out[p] = out[p - 1] + 0.5 * h * (g[p - 1] + g[p]);
    }
  }
  return out;
}

}  // namespace

std::vector<MomentVector> solve_hierarchy(const PotentialSpec& spec, const SpaceGrid& sgrid,
                                          const MomentVector& start, Direction direction,
                                          int refinement) {
  const int order = start.order;
  if (order < 1 || static_cast<int>(start.values.size()) != order)
    throw ContractError("solve_hierarchy: start vector must hold N >= 1 odd moments");
  if (refinement < 2 || refinement % 2 != 0)
    throw ContractError("solve_hierarchy: refinement must be even and >= 2");
  const int needed = 2 * order - 3;
  if (needed > spec.max_derivative()) {
    std::ostringstream os;
    os << "solve_hierarchy: N=" << order << " needs kernel moments up to order " << needed
       << ", the " << to_string(spec.family) << " potential provides " << spec.max_derivative();
    throw CapabilityError(os.str());
  }

  const bool forward = direction == Direction::l_to_r;
  const int sub = sgrid.steps * refinement;
  const double h = (forward ? 1.0 : -1.0) * sgrid.dx() / refinement;
  const double x0 = forward ? sgrid.left() : sgrid.right();
  auto sub_x = [&](int p) { return p == sub ? (forward ? sgrid.right() : sgrid.left()) : x0 + p * h; };

  // vwk[p][(k-1)/2] = Vw_k(z_p), k = 1, 3, ..., 2N-3
  std::vector<std::vector<double>> vwk(static_cast<size_t>(sub + 1));
  if (needed >= 1) {
    for (int p = 0; p <= sub; ++p) vwk[static_cast<size_t>(p)] = kernel_moments(spec, sub_x(p), needed);
  }

  // levels[l][p] = J_{2l+1}(z_p)
  std::vector<std::vector<double>> levels(static_cast<size_t>(order));
  levels[0].assign(static_cast<size_t>(sub + 1), start.values[0]);
  std::vector<double> g(static_cast<size_t>(sub + 1));
  for (int l = 1; l < order; ++l) {
    const int n = 2 * l + 1;
    for (int p = 0; p <= sub; ++p) {
      double acc = 0.0;
      for (int k = 1; k <= n - 2; k += 2) {
        const int lower = (n - 1 - k - 1) / 2;  // index of J_{n-1-k}
        acc += binomial(n - 1, k) * vwk[static_cast<size_t>(p)][static_cast<size_t>((k - 1) / 2)] *
               levels[static_cast<size_t>(lower)][static_cast<size_t>(p)];
      }
      g[static_cast<size_t>(p)] = acc;
    }
    std::vector<double> integral = cumulative_simpson(g, h);
    for (double& v : integral) v += start.values[static_cast<size_t>(l)];
    levels[static_cast<size_t>(l)] = std::move(integral);
  }

  std::vector<MomentVector> out(static_cast<size_t>(sgrid.size()));
  for (int i = 0; i <= sgrid.steps; ++i) {
    const int p = i * refinement;
    const int node = forward ? i : sgrid.steps - i;
    std::vector<double> vals(static_cast<size_t>(order));
    for (int l = 0; l < order; ++l) vals[static_cast<size_t>(l)] = levels[static_cast<size_t>(l)][static_cast<size_t>(p)];
    out[static_cast<size_t>(node)] = MomentVector(std::move(vals), sgrid.node(node));
  }
  return out;
}

Eigen::MatrixXd build_moment_Q(const PotentialSpec& spec, const SpaceGrid& sgrid, int order,
                               Direction direction, int refinement) {
  if (order < 1) throw ContractError("build_moment_Q: order must be >= 1");
  Eigen::MatrixXd q(order, order);
  const int far = direction == Direction::l_to_r ? sgrid.steps : 0;
  const double x_start = direction == Direction::l_to_r ? sgrid.left() : sgrid.right();
  for (int m = 0; m < order; ++m) {
    std::vector<double> unit(static_cast<size_t>(order), 0.0);
    unit[static_cast<size_t>(m)] = 1.0;
    const auto traj = solve_hierarchy(spec, sgrid, MomentVector(unit, x_start), direction, refinement);
    const auto& end = traj[static_cast<size_t>(far)].values;
    for (int r = 0; r < order; ++r) q(r, m) = end[static_cast<size_t>(r)];
  }
  return q;
}

namespace {

// Probabilists' Hermite polynomial He_n(v).
double hermite_he(int n, double v) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = v;
  for (int k = 1; k < n; ++k) {
    const double next = v * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

Reconstruction reconstruct_odd(const MomentVector& moments, const VelocityGrid& vgrid,
                               double max_condition) {
  const int order = moments.order;
  if (order < 1) throw ContractError("reconstruct_odd: N must be >= 1");
  std::vector<GridFunction> basis;
  basis.reserve(static_cast<size_t>(order));
  for (int m = 1; m <= order; ++m) {
    basis.push_back(GridFunction::sample(
        vgrid, [m](double v) { return hermite_he(2 * m - 1, v) * std::exp(-0.5 * v * v); },
        Parity::odd));
  }
  Eigen::MatrixXd g(order, order);
  Eigen::VectorXd rhs(order);
  for (int n = 0; n < order; ++n) {
    for (int m = 0; m < order; ++m) g(n, m) = velocity_moment(basis[static_cast<size_t>(m)], 2 * n + 1);
    rhs(n) = moments.values[static_cast<size_t>(n)];
  }
  // Row equilibration: moment magnitudes grow roughly like (2n-1)!!.
  for (int n = 0; n < order; ++n) {
    const double s = g.row(n).cwiseAbs().maxCoeff();
    if (s > 0.0) {
      g.row(n) /= s;
      rhs(n) /= s;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cond = sv(order - 1) > 0.0 ? sv(0) / sv(order - 1)
                                           : std::numeric_limits<double>::infinity();
  if (!(cond <= max_condition)) {
    std::ostringstream os;
    os << "moment reconstruction with N=" << order << " has condition number " << cond
       << "; use fewer moments";
    throw IllPosedError(os.str(), cond);
  }
  Reconstruction r;
  r.coefficients = svd.solve(rhs);
  r.condition_number = cond;
  r.function = GridFunction(vgrid, Parity::odd);
  for (int m = 0; m < order; ++m) {
    for (int i = 0; i < vgrid.size(); ++i)
      r.function[i] += r.coefficients(m) * basis[static_cast<size_t>(m)][i];
  }
  return r;
}

}  // namespace wigner
