#include "wigner/oracle.hpp"

#include <cmath>
#include <sstream>

#include "wigner/error.hpp"
#include "wigner/wigner_op.hpp"

namespace wigner {

const char* to_string(UpwindScheme s) {
  return s == UpwindScheme::first_order ? "upwind-first-order" : "upwind-box";
}

namespace {

struct Blocks {
  Eigen::MatrixXd lower;  // coupling to i-1 (v > 0 rows)
  Eigen::MatrixXd diag;
  Eigen::MatrixXd upper;  // coupling to i+1 (v < 0 rows)
  Eigen::VectorXd rhs;
};

// Block row i of the upwind system. theta[-1], theta[0], theta[+1] are Θ at
// x_{i-1}, x_i, x_{i+1} (only those that exist are read).
Blocks block_row(const BoundaryData& bd, const SpaceGrid& sg, int i, UpwindScheme scheme,
                 const Eigen::MatrixXd* theta_prev, const Eigen::MatrixXd& theta,
                 const Eigen::MatrixXd* theta_next) {
  const VelocityGrid& g = bd.grid;
  const int n = g.size();
  const int k = g.half_count;
  const double inv_dx = 1.0 / sg.dx();
  const double w = scheme == UpwindScheme::box ? 0.5 : 1.0;
  Blocks b{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n),
           Eigen::VectorXd::Zero(n)};
  for (int j = 0; j < n; ++j) {
    const double v = g.node(j);
    const double c = std::abs(v) * inv_dx;
    if (v > 0.0) {
      if (i == 0) {
        b.diag(j, j) = 1.0;
        b.rhs(j) = bd.f_L[static_cast<size_t>(j - k)];
        continue;
      }
      b.diag.row(j) = -w * theta.row(j);
      b.diag(j, j) += c;
      b.lower(j, j) = -c;
      if (w < 1.0) b.lower.row(j) -= (1.0 - w) * theta_prev->row(j);
    } else {
      if (i == sg.steps) {
        b.diag(j, j) = 1.0;
        b.rhs(j) = bd.f_R[static_cast<size_t>(j)];
        continue;
      }
      b.diag.row(j) = -w * theta.row(j);
      b.diag(j, j) += c;
      b.upper(j, j) = -c;
      if (w < 1.0) b.upper.row(j) -= (1.0 - w) * theta_next->row(j);
    }
  }
  return b;
}

}  // namespace

SolutionField solve_direct(const KernelTable& table, const BoundaryData& bd, UpwindScheme scheme) {
  bd.validate();
  require_same_grid(table.velocity_grid(), bd.grid, "solve_direct");
  const SpaceGrid& sg = table.space_grid();
  const int m = sg.steps;
  const int n = bd.grid.size();

  std::vector<Eigen::MatrixXd> theta(static_cast<size_t>(m + 1));
#pragma omp parallel for schedule(static)
  for (int i = 0; i <= m; ++i) theta[static_cast<size_t>(i)] = theta_matrix(table, KernelTable::station_of_node(i));

  auto row = [&](int i) {
    const Eigen::MatrixXd* prev = i > 0 ? &theta[static_cast<size_t>(i - 1)] : nullptr;
    const Eigen::MatrixXd* next = i < m ? &theta[static_cast<size_t>(i + 1)] : nullptr;
    return block_row(bd, sg, i, scheme, prev, theta[static_cast<size_t>(i)], next);
  };

  // Forward elimination: D'_i = D_i - L_i D'^{-1}_{i-1} U_{i-1}.
  std::vector<Eigen::MatrixXd> gain(static_cast<size_t>(m));  // D'^{-1}_i U_i
  std::vector<Eigen::VectorXd> y(static_cast<size_t>(m + 1));  // D'^{-1}_i b'_i
  Blocks cur = row(0);
  Eigen::MatrixXd dprime = cur.diag;
  Eigen::VectorXd bprime = cur.rhs;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  auto factor = [&](int i) {
    lu.compute(dprime);
    const double det_scale = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(det_scale > 0.0) || !std::isfinite(det_scale)) {
      std::ostringstream os;
      os << "direct solver: singular diagonal block at x=" << sg.node(i);
      throw NumericalError(os.str(), det_scale);
    }
  };
  for (int i = 0; i < m; ++i) {
    factor(i);
    gain[static_cast<size_t>(i)] = lu.solve(cur.upper);
    y[static_cast<size_t>(i)] = lu.solve(bprime);
    Blocks nxt = row(i + 1);
    dprime = nxt.diag - nxt.lower * gain[static_cast<size_t>(i)];
    bprime = nxt.rhs - nxt.lower * y[static_cast<size_t>(i)];
    cur = std::move(nxt);
  }
  factor(m);
  y[static_cast<size_t>(m)] = lu.solve(bprime);

  std::vector<Eigen::VectorXd> x(static_cast<size_t>(m + 1));
  x[static_cast<size_t>(m)] = y[static_cast<size_t>(m)];
  for (int i = m - 1; i >= 0; --i)
    x[static_cast<size_t>(i)] = y[static_cast<size_t>(i)] - gain[static_cast<size_t>(i)] * x[static_cast<size_t>(i + 1)];

  // Relative residual of the assembled system.
  std::vector<double> res2(static_cast<size_t>(m + 1)), rhs2(static_cast<size_t>(m + 1));
#pragma omp parallel for schedule(static)
  for (int i = 0; i <= m; ++i) {
    const Blocks b = row(i);
    Eigen::VectorXd r = b.diag * x[static_cast<size_t>(i)] - b.rhs;
    if (i > 0) r += b.lower * x[static_cast<size_t>(i - 1)];
    if (i < m) r += b.upper * x[static_cast<size_t>(i + 1)];
    res2[static_cast<size_t>(i)] = r.squaredNorm();
    rhs2[static_cast<size_t>(i)] = b.rhs.squaredNorm();
  }
  double rs = 0.0, bs = 0.0;
  for (int i = 0; i <= m; ++i) {
    rs += res2[static_cast<size_t>(i)];
    bs += rhs2[static_cast<size_t>(i)];
  }

  SolutionField field;
  field.sgrid = sg;
  field.vgrid = bd.grid;
  field.slices.reserve(static_cast<size_t>(m + 1));
  for (int i = 0; i <= m; ++i) {
    const Eigen::VectorXd& xi = x[static_cast<size_t>(i)];
    if (!xi.allFinite()) {
      std::ostringstream os;
      os << "direct solver produced non-finite values at x=" << sg.node(i);
      throw NumericalError(os.str());
    }
    field.slices.emplace_back(bd.grid, std::vector<double>(xi.data(), xi.data() + n));
  }
  field.provenance.mode = SolveMode::direct;
  field.provenance.scheme = to_string(scheme);
  field.provenance.assembly_condition = 0.0;
  field.provenance.solver_residual = bs > 0.0 ? std::sqrt(rs / bs) : std::sqrt(rs);
  compute_diagnostics(table, bd, field, 1e-6);
  return field;
}

nlohmann::json FieldComparison::to_json() const {
  return {{"global_relative", global_relative},
          {"slice_relative", slice_relative},
          {"max_j0_difference", max_j0_difference},
          {"max_j1_difference", max_j1_difference},
          {"j0_difference", j0_difference},
          {"j1_difference", j1_difference}};
}

FieldComparison compare_fields(const SolutionField& a, const SolutionField& b) {
  if (!(a.sgrid == b.sgrid)) throw ContractError("compare_fields: space grid mismatch");
  require_same_grid(a.vgrid, b.vgrid, "compare_fields");
  if (a.slices.size() != b.slices.size()) throw ContractError("compare_fields: slice count mismatch");
  FieldComparison c;
  double diff2 = 0.0, a2 = 0.0, b2 = 0.0;
  for (size_t i = 0; i < a.slices.size(); ++i) {
    const auto& fa = a.slices[i];
    const auto& fb = b.slices[i];
    double d = 0.0, na = 0.0, nb = 0.0;
    for (int j = 0; j < fa.size(); ++j) {
      d += (fa[j] - fb[j]) * (fa[j] - fb[j]);
      na += fa[j] * fa[j];
      nb += fb[j] * fb[j];
    }
    const double denom = std::sqrt(std::max(na, nb));
    c.slice_relative.push_back(denom > 0.0 ? std::sqrt(d) / denom : std::sqrt(d));
    diff2 += d;
    a2 += na;
    b2 += nb;
    const double j0 = std::abs(velocity_moment(fa, 0) - velocity_moment(fb, 0));
    const double j1 = std::abs(velocity_moment(fa, 1) - velocity_moment(fb, 1));
    c.j0_difference.push_back(j0);
    c.j1_difference.push_back(j1);
    c.max_j0_difference = std::max(c.max_j0_difference, j0);
    c.max_j1_difference = std::max(c.max_j1_difference, j1);
  }
  const double denom = std::sqrt(std::max(a2, b2));
  c.global_relative = denom > 0.0 ? std::sqrt(diff2) / denom : std::sqrt(diff2);
  return c;
}

}  // namespace wigner
