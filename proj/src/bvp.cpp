#include "wigner/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wigner/error.hpp"
#include "wigner/wigner_op.hpp"

namespace wigner {

void BoundaryData::validate() const {
  const auto k = static_cast<size_t>(grid.half_count);
  if (f_L.size() != k || f_R.size() != k)
    throw ContractError("BoundaryData: f_L and f_R must each have K values");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(f_L) || !finite(f_R)) throw ContractError("BoundaryData: non-finite inflow value");
}

const char* to_string(SolveMode m) {
  switch (m) {
    case SolveMode::general: return "general";
    case SolveMode::symmetric_shortcut: return "symmetric_shortcut";
    case SolveMode::direct: return "direct";
  }
  return "general";
}

nlohmann::json Provenance::to_json() const {
  return {{"mode", to_string(mode)},
          {"scheme", scheme},
          {"inflow_left", inflow_left},
          {"inflow_right", inflow_right},
          {"inflow_relative", inflow_relative},
          {"inflow_flagged", inflow_flagged},
          {"current_drift", current_drift},
          {"orthogonality_residual", orthogonality_residual},
          {"assembly_condition", assembly_condition},
          {"solver_residual", solver_residual}};
}

namespace {

// g_j = f_R(-v_j): f_R is stored ascending, so -v_j sits at index K-1-j.
std::vector<double> mirrored_right_inflow(const BoundaryData& bd) {
  const int k = bd.grid.half_count;
  std::vector<double> g(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) g[static_cast<size_t>(j)] = bd.f_R[static_cast<size_t>(k - 1 - j)];
  return g;
}

BoundaryParts parts_from_even(const BoundaryData& bd, const Eigen::VectorXd& e, double cond) {
  const int k = bd.grid.half_count;
  std::vector<double> ev(e.data(), e.data() + k);
  std::vector<double> od(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) od[static_cast<size_t>(j)] = bd.f_L[static_cast<size_t>(j)] - ev[static_cast<size_t>(j)];
  return {from_positive(bd.grid, ev, Parity::even), from_positive(bd.grid, od, Parity::odd), cond};
}

}  // namespace

BoundaryParts assemble_boundary(const BoundaryData& bd, const PropagatorMatrix& R_lr,
                                const PropagatorMatrix& Q_rl, double max_condition) {
  bd.validate();
  if (R_lr.parity != Parity::even || R_lr.direction != Direction::l_to_r)
    throw ContractError("assemble_boundary: R must be the even l_to_r propagator");
  if (Q_rl.parity != Parity::odd || Q_rl.direction != Direction::r_to_l)
    throw ContractError("assemble_boundary: Q must be the odd r_to_l propagator");
  require_same_grid(bd.grid, R_lr.vgrid, "assemble_boundary");
  require_same_grid(bd.grid, Q_rl.vgrid, "assemble_boundary");
  if (!(R_lr.sgrid == Q_rl.sgrid)) throw ContractError("assemble_boundary: space grid mismatch");

  const int k = bd.grid.half_count;
  const Eigen::MatrixXd system = Q_rl.matrix * R_lr.matrix + Eigen::MatrixXd::Identity(k, k);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system);
  const auto& sv = svd.singularValues();
  const double cond = sv(k - 1) > 0.0 ? sv(0) / sv(k - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= max_condition)) {
    std::ostringstream os;
    os << "boundary assembly matrix (Q_rl R_lr + I) is singular or ill-conditioned, cond=" << cond;
    throw AssemblyError(os.str(), cond);
  }
  const std::vector<double> g = mirrored_right_inflow(bd);
  const Eigen::Map<const Eigen::VectorXd> gv(g.data(), k);
  const Eigen::Map<const Eigen::VectorXd> fl(bd.f_L.data(), k);
  const Eigen::VectorXd rhs = Q_rl.matrix * gv + fl;
  const Eigen::VectorXd e = system.partialPivLu().solve(rhs);
  return parts_from_even(bd, e, cond);
}

BoundaryParts assemble_symmetric(const BoundaryData& bd) {
  bd.validate();
  const int k = bd.grid.half_count;
  const std::vector<double> g = mirrored_right_inflow(bd);
  Eigen::VectorXd e(k);
  for (int j = 0; j < k; ++j) e(j) = 0.5 * (bd.f_L[static_cast<size_t>(j)] + g[static_cast<size_t>(j)]);
  return parts_from_even(bd, e, 1.0);
}

double orthogonality_residual(const KernelTable& table, int station, const GridFunction& f) {
  require_same_grid(table.velocity_grid(), f.grid, "orthogonality_residual");
  double acc = 0.0;
  for (int j = 0; j < f.size(); ++j) acc += table.at_node(station, j) * f[j];
  return f.grid.spacing * acc;
}

void compute_diagnostics(const KernelTable& table, const BoundaryData& bd, SolutionField& field,
                         double inflow_tolerance) {
  const VelocityGrid& g = bd.grid;
  Provenance& p = field.provenance;
  const auto left = inflow_restrict(field.slices.front(), Side::plus);
  const auto right = inflow_restrict(field.slices.back(), Side::minus);
  std::vector<double> dl(left.size()), dr(right.size());
  for (size_t j = 0; j < left.size(); ++j) {
    dl[j] = left[j] - bd.f_L[j];
    dr[j] = right[j] - bd.f_R[j];
  }
  p.inflow_left = l2_norm(g, dl);
  p.inflow_right = l2_norm(g, dr);
  const double scale = std::max(l2_norm(g, bd.f_L), l2_norm(g, bd.f_R));
  const double worst = std::max(p.inflow_left, p.inflow_right);
  p.inflow_relative = scale > 0.0 ? worst / scale : worst;
  p.inflow_flagged = p.mode == SolveMode::general && p.inflow_relative > inflow_tolerance;

  const double j1_0 = velocity_moment(field.slices.front(), 1);
  p.current_drift = 0.0;
  for (const auto& s : field.slices)
    p.current_drift = std::max(p.current_drift, std::abs(velocity_moment(s, 1) - j1_0));

  field.orthogonality.assign(field.slices.size(), 0.0);
  p.orthogonality_residual = 0.0;
  for (size_t i = 0; i < field.slices.size(); ++i) {
    const GridFunction odd = field.odd_part.empty() ? parity_project(field.slices[i], Parity::odd)
                                                    : field.odd_part[i];
    const double r = orthogonality_residual(table, KernelTable::station_of_node(static_cast<int>(i)), odd);
    field.orthogonality[i] = r;
    p.orthogonality_residual = std::max(p.orthogonality_residual, std::abs(r));
  }
}

namespace {

SolutionField march_parts(const KernelTable& table, const BoundaryData& bd, const BoundaryParts& parts,
                          SolveMode mode, const BvpOptions& options) {
  SolutionField field;
  field.sgrid = table.space_grid();
  field.vgrid = bd.grid;
  field.even_part = march_ivp(table, parts.even0, Parity::even, Direction::l_to_r);
  field.odd_part = march_ivp(table, parts.odd0, Parity::odd, Direction::l_to_r);
  field.slices.reserve(field.even_part.size());
  for (size_t i = 0; i < field.even_part.size(); ++i) {
    GridFunction s(bd.grid);
    for (int j = 0; j < s.size(); ++j) s[j] = field.even_part[i][j] + field.odd_part[i][j];
    field.slices.push_back(std::move(s));
  }
  field.provenance.mode = mode;
  field.provenance.scheme = "rk4";
  field.provenance.assembly_condition = parts.condition;
  compute_diagnostics(table, bd, field, options.inflow_tolerance);
  return field;
}

}  // namespace

SolutionField solve_bvp(const KernelTable& table, const BoundaryData& bd, SolveMode mode,
                        const BvpOptions& options) {
  bd.validate();
  require_same_grid(table.velocity_grid(), bd.grid, "solve_bvp");
  if (mode == SolveMode::direct)
    throw ContractError("solve_bvp: direct mode belongs to the oracle (solve_direct)");
  if (mode == SolveMode::symmetric_shortcut) {
    const double half = 0.5 * table.space_grid().length;
    if (!is_even_potential(table.potential(), half))
      throw ContractError("solve_bvp: symmetric_shortcut requires a potential even in x");
    return march_parts(table, bd, assemble_symmetric(bd), mode, options);
  }
  const PropagatorMatrix r_lr = build_propagator(table, Parity::even, Direction::l_to_r);
  const PropagatorMatrix q_rl = build_propagator(table, Parity::odd, Direction::r_to_l);
  return solve_bvp(table, bd, r_lr, q_rl, options);
}

SolutionField solve_bvp(const KernelTable& table, const BoundaryData& bd,
                        const PropagatorMatrix& R_lr, const PropagatorMatrix& Q_rl,
                        const BvpOptions& options) {
  bd.validate();
  require_same_grid(table.velocity_grid(), bd.grid, "solve_bvp");
  if (!(R_lr.sgrid == table.space_grid()))
    throw ContractError("solve_bvp: propagators were built on a different space grid");
  const BoundaryParts parts = assemble_boundary(bd, R_lr, Q_rl, options.max_condition);
  return march_parts(table, bd, parts, SolveMode::general, options);
}

nlohmann::json SignReport::to_json() const {
  auto entry = [](const Entry& e) {
    return nlohmann::json{{"sign", e.sign},
                          {"inflow_right", e.inflow_right},
                          {"inflow_relative", e.inflow_relative},
                          {"condition", e.condition}};
  };
  return {{"governing", entry(governing)},
          {"flipped", entry(flipped)},
          {"consistent_sign", consistent_sign},
          {"residual_gap", std::abs(flipped.inflow_relative - governing.inflow_relative)}};
}

SignReport check_sign_convention(const KernelTable& table, const BoundaryData& bd,
                                 double inflow_tolerance) {
  bd.validate();
  const VelocityGrid& g = bd.grid;
  const double scale = std::max({l2_norm(g, bd.f_L), l2_norm(g, bd.f_R), 1e-300});
  auto evaluate = [&](double sign) {
    SignReport::Entry e;
    e.sign = sign;
    const PropagatorMatrix r = build_propagator(table, Parity::even, Direction::l_to_r, sign);
    const PropagatorMatrix q = build_propagator(table, Parity::odd, Direction::r_to_l, sign);
    const BoundaryParts parts = assemble_boundary(bd, r, q, std::numeric_limits<double>::infinity());
    e.condition = parts.condition;
    GridFunction f0(g);
    for (int j = 0; j < g.size(); ++j) f0[j] = parts.even0[j] + parts.odd0[j];
    const auto slices = march_ivp(table, f0, Parity::none, Direction::l_to_r, 1.0);
    const auto right = inflow_restrict(slices.back(), Side::minus);
    std::vector<double> d(right.size());
    for (size_t j = 0; j < d.size(); ++j) d[j] = right[j] - bd.f_R[j];
    e.inflow_right = l2_norm(g, d);
    e.inflow_relative = e.inflow_right / scale;
    return e;
  };
  SignReport rep;
  rep.governing = evaluate(1.0);
  rep.flipped = evaluate(-1.0);
  const bool plus_ok = rep.governing.inflow_relative <= inflow_tolerance;
  const bool minus_ok = rep.flipped.inflow_relative <= inflow_tolerance;
  rep.consistent_sign = plus_ok && minus_ok ? "both" : plus_ok ? "df/dx = +B f" : minus_ok ? "df/dx = -B f" : "neither";
  return rep;
}

}  // namespace wigner
