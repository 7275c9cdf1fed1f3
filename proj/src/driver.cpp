#include "wigner/driver.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "wigner/bvp.hpp"
#include "wigner/error.hpp"
#include "wigner/io.hpp"
#include "wigner/kernel_table.hpp"
#include "wigner/odd_moments.hpp"
#include "wigner/oracle.hpp"
#include "wigner/propagation.hpp"
#include "wigner/wigner_op.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace wigner {

fs::path resolve_output_dir(const RunConfig& cfg) {
  const fs::path out(cfg.output_dir);
  const char* root = std::getenv("WIGNER_OUTPUT_ROOT");
  if (root && *root && out.is_relative()) return fs::path(root) / out;
  return out;
}

namespace {

// Largest N the potential's derivatives allow in the hierarchy (needs V^(2N-3)).
int hierarchy_order(const RunConfig& cfg, const PotentialSpec& spec) {
  return std::max(1, std::min(cfg.moment_order, (spec.max_derivative() + 3) / 2));
}

std::vector<std::string> moment_header(int order) {
  std::vector<std::string> h{"x"};
  for (int m = 0; m < order; ++m) h.push_back("J" + std::to_string(2 * m + 1));
  return h;
}

std::vector<std::vector<double>> moment_rows(const SpaceGrid& sg, const std::vector<GridFunction>& slices,
                                             int order) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < sg.size(); ++i) {
    std::vector<double> r{sg.node(i)};
    for (int m = 0; m < order; ++m) r.push_back(velocity_moment(slices[static_cast<size_t>(i)], 2 * m + 1));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<int> probe_nodes(const SpaceGrid& sg) {
  const int m = sg.steps;
  std::vector<int> n{0, m / 4, m / 2, (3 * m) / 4, m};
  n.erase(std::unique(n.begin(), n.end()), n.end());
  return n;
}

json traces(const SolutionField& f) {
  json j0 = json::array(), j1 = json::array();
  for (const auto& s : f.slices) {
    j0.push_back(velocity_moment(s, 0));
    j1.push_back(velocity_moment(s, 1));
  }
  return {{"J0", j0}, {"J1", j1}};
}

// Moment action of the grid odd propagator against the moment-space Q, both r_to_l.
// Column m: reconstruct the m-th unit moment vector as a grid function at +l/2,
// propagate with the grid matrix, take its odd moments at -l/2.
json grid_vs_moment_q(const PropagatorMatrix& q_grid, const Eigen::MatrixXd& q_moment) {
  const int n = static_cast<int>(q_moment.rows());
  const VelocityGrid& g = q_grid.vgrid;
  Eigen::MatrixXd induced(n, n);
  double worst_cond = 0.0;
  try {
    for (int m = 0; m < n; ++m) {
      std::vector<double> unit(static_cast<size_t>(n), 0.0);
      unit[static_cast<size_t>(m)] = 1.0;
      const Reconstruction rec = reconstruct_odd(MomentVector(unit, q_grid.sgrid.right()), g);
      worst_cond = std::max(worst_cond, rec.condition_number);
      const auto pos = inflow_restrict(rec.function, Side::plus);
      const Eigen::Map<const Eigen::VectorXd> pv(pos.data(), g.half_count);
      const Eigen::VectorXd out = q_grid.matrix * pv;
      const GridFunction f = from_positive(g, std::span<const double>(out.data(), static_cast<size_t>(out.size())),
                                           Parity::odd);
      const MomentVector mv = odd_moments(f, n);
      for (int r = 0; r < n; ++r) induced(r, m) = mv.values[static_cast<size_t>(r)];
    }
  } catch (const IllPosedError& e) {
    return {{"order", n}, {"relative_discrepancy", nullptr}, {"note", e.what()}};
  }
  return {{"order", n},
          {"relative_discrepancy", (induced - q_moment).norm() / q_moment.norm()},
          {"reconstruction_condition", worst_cond}};
}

void write_propagator(const fs::path& dir, const std::string& stem, const PropagatorMatrix& p,
                      std::vector<std::string>& files) {
  write_matrix_csv(dir / (stem + ".csv"), p.matrix);
  write_json(dir / (stem + ".json"), p.sidecar());
  files.push_back(stem + ".csv");
  files.push_back(stem + ".json");
}

json build_info() {
  json b{{"version", kVersion},
         {"compiler", __VERSION__},
         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION)}};
#ifdef _OPENMP
  b["openmp"] = _OPENMP;
  b["threads"] = omp_get_max_threads();
#endif
  return b;
}

}  // namespace

RunSummary run(const RunConfig& cfg) {
  RunSummary summary;
  summary.warnings = validate_config(cfg);
  const PotentialSpec spec = make_potential(cfg);
  const VelocityGrid vg = make_velocity_grid(cfg);
  const SpaceGrid sg = make_space_grid(cfg);
  const BoundaryData bd = make_boundary(cfg, vg);
  const int n_h = hierarchy_order(cfg, spec);
  if (n_h < cfg.moment_order)
    summary.warnings.push_back("moment order reduced to N=" + std::to_string(n_h) + " by the potential's smoothness");

  const fs::path dir = resolve_output_dir(cfg);
  fs::create_directories(dir);
  summary.output_dir = dir;
  auto& files = summary.files;

  const KernelTable table(spec, vg, sg, std::max(1, 2 * n_h - 3));
  BvpOptions opts{cfg.inflow_tolerance, cfg.max_condition};
  json diag;
  diag["mode"] = to_string(cfg.mode);
  diag["warnings"] = summary.warnings;

  const bool pipeline = cfg.mode != RunMode::oracle;
  SolutionField field;
  if (pipeline) {
    if (cfg.mode == RunMode::symmetric_shortcut) {
      field = solve_bvp(table, bd, SolveMode::symmetric_shortcut, opts);
    } else {
      const PropagatorMatrix r_lr = build_propagator(table, Parity::even, Direction::l_to_r);
      const PropagatorMatrix q_rl = build_propagator(table, Parity::odd, Direction::r_to_l);
      write_propagator(dir, "propagator_R_lr", r_lr, files);
      write_propagator(dir, "propagator_Q_rl", q_rl, files);
      diag["condition_numbers"] = {{"R_lr", r_lr.condition_number()}, {"Q_rl", q_rl.condition_number()}};
      field = solve_bvp(table, bd, r_lr, q_rl, opts);

      const Eigen::MatrixXd qm_rl = build_moment_Q(spec, sg, n_h, Direction::r_to_l);
      diag["grid_vs_moment_Q"] = grid_vs_moment_q(q_rl, qm_rl.topLeftCorner(std::min(n_h, 4), std::min(n_h, 4)));
    }
    diag["condition_numbers"]["assembly"] = field.provenance.assembly_condition;
    diag["provenance"] = field.provenance.to_json();
    diag["orthogonality"] = field.orthogonality;

    write_field_csv(dir / "field.csv", sg, field.slices);
    files.push_back("field.csv");
    write_columns_csv(dir / "moments.csv", moment_header(cfg.moment_order),
                      moment_rows(sg, field.slices, cfg.moment_order));
    files.push_back("moments.csv");

    // Hierarchy trajectory from the odd part's moments at -l/2, against the grid moments.
    const MomentVector start = odd_moments(field.odd_part.front(), n_h, sg.left());
    const auto traj = solve_hierarchy(spec, sg, start, Direction::l_to_r);
    std::vector<std::vector<double>> rows;
    double worst = 0.0;
    for (int i = 0; i < sg.size(); ++i) {
      std::vector<double> r{sg.node(i)};
      const auto& mv = traj[static_cast<size_t>(i)];
      r.insert(r.end(), mv.values.begin(), mv.values.end());
      rows.push_back(std::move(r));
      for (int m = 0; m < std::min(n_h, 3); ++m) {
        const double grid = velocity_moment(field.odd_part[static_cast<size_t>(i)], 2 * m + 1);
        const double ref = mv.values[static_cast<size_t>(m)];
        worst = std::max(worst, std::abs(grid - ref) / std::max(std::abs(ref), 1e-300));
      }
    }
    write_columns_csv(dir / "hierarchy.csv", moment_header(n_h), rows);
    files.push_back("hierarchy.csv");
    diag["hierarchy_vs_grid_relative"] = worst;

    const Eigen::MatrixXd qm_lr = build_moment_Q(spec, sg, n_h, Direction::l_to_r);
    write_matrix_csv(dir / "Q_moment_lr.csv", qm_lr);
    write_json(dir / "Q_moment_lr.json", {{"order", n_h},
                                          {"direction", "l_to_r"},
                                          {"space_grid", {{"length", sg.length}, {"steps", sg.steps}}},
                                          {"scheme", "cumulative-simpson"},
                                          {"refinement", kHierarchyRefinement},
                                          {"identity_deviation",
                                           (qm_lr - Eigen::MatrixXd::Identity(n_h, n_h)).cwiseAbs().maxCoeff()}});
    files.push_back("Q_moment_lr.csv");
    files.push_back("Q_moment_lr.json");
  }

  if (cfg.mode == RunMode::oracle || cfg.mode == RunMode::compare) {
    const SolutionField direct = solve_direct(table, bd, cfg.oracle_scheme);
    const std::string name = cfg.mode == RunMode::oracle ? "field.csv" : "field_oracle.csv";
    write_field_csv(dir / name, sg, direct.slices);
    files.push_back(name);
    if (cfg.mode == RunMode::oracle) {
      write_columns_csv(dir / "moments.csv", moment_header(cfg.moment_order),
                        moment_rows(sg, direct.slices, cfg.moment_order));
      files.push_back("moments.csv");
      diag["provenance"] = direct.provenance.to_json();
      field = direct;
    } else {
      diag["oracle_provenance"] = direct.provenance.to_json();
      const FieldComparison cmp = compare_fields(field, direct);
      write_json(dir / "comparison.json", cmp.to_json());
      files.push_back("comparison.json");
      diag["oracle_global_relative"] = cmp.global_relative;
    }
  }
  diag["traces"] = traces(field);

  json bounds = json::array(), norms = json::array();
  for (int node : probe_nodes(sg)) {
    const int st = KernelTable::station_of_node(node);
    bounds.push_back(operator_bound_check(table, st, cfg.bound_trials, cfg.seed + static_cast<std::uint64_t>(node),
                                          cfg.bound_slack)
                         .to_json());
    norms.push_back({{"x", sg.node(node)},
                     {"even", subspace_norm(table, st, Parity::even)},
                     {"odd", subspace_norm(table, st, Parity::odd)}});
  }
  diag["operator_bound"] = bounds;
  diag["B_subspace_norms"] = norms;
  diag["kernel"] = {{"truncation_residual", table.truncation_residual()}, {"dv_method", table.dv_method()}};
  diag["velocity_truncation"] = {
      {"v_max", vg.v_max()},
      {"field_edge_max", [&] {
         double e = 0.0;
         for (const auto& s : field.slices) e = std::max({e, std::abs(s[0]), std::abs(s[s.size() - 1])});
         return e;
       }()}};
  if (cfg.sign_check && pipeline) diag["sign_convention"] = check_sign_convention(table, bd, cfg.inflow_tolerance).to_json();

  write_json(dir / "diagnostics.json", diag);
  files.push_back("diagnostics.json");
  {
    std::ofstream ini(dir / "config.ini");
    ini << cfg.to_ini();
  }
  files.push_back("config.ini");
  write_json(dir / "manifest.json", {{"config", cfg.to_json()},
                                     {"rerun", "wigner_cli run config.ini"},
                                     {"build", build_info()},
                                     {"files", files}});
  summary.diagnostics = std::move(diag);
  return summary;
}

namespace {

// 4-point Lagrange interpolation of samples y at nodes (j + 1/2) h, j = 0..n-1, at u > 0.
double lagrange4(const std::vector<double>& y, double h, double u) {
  const int n = static_cast<int>(y.size());
  int j0 = static_cast<int>(std::floor(u / h - 0.5)) - 1;
  j0 = std::clamp(j0, 0, std::max(0, n - 4));
  const int cnt = std::min(4, n);
  double acc = 0.0;
  for (int a = 0; a < cnt; ++a) {
    const double ua = (j0 + a + 0.5) * h;
    double w = 1.0;
    for (int b = 0; b < cnt; ++b) {
      if (b == a) continue;
      const double ub = (j0 + b + 0.5) * h;
      w *= (u - ub) / (ua - ub);
    }
    acc += w * y[static_cast<size_t>(j0 + a)];
  }
  return acc;
}

// Response f - (inflow extension), sampled on the coarse grids. Rows: coarse x nodes.
std::vector<std::vector<double>> coarse_response(const SolutionField& f, const BoundaryData& bd,
                                                 const SpaceGrid& coarse_x, const VelocityGrid& coarse_v,
                                                 int factor) {
  const VelocityGrid& g = f.vgrid;
  const int k = g.half_count;
  const int kc = coarse_v.half_count;
  std::vector<std::vector<double>> out;
  for (int i = 0; i < coarse_x.size(); ++i) {
    const GridFunction& s = f.slices[static_cast<size_t>(i * factor)];
    std::vector<double> plus(static_cast<size_t>(k)), minus(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
      plus[static_cast<size_t>(j)] = s[k + j] - bd.f_L[static_cast<size_t>(j)];
      minus[static_cast<size_t>(j)] = s[k - 1 - j] - bd.f_R[static_cast<size_t>(k - 1 - j)];
    }
    std::vector<double> row(static_cast<size_t>(2 * kc));
    for (int j = 0; j < kc; ++j) {
      const double u = coarse_v.positive_node(j);
      row[static_cast<size_t>(kc + j)] = factor == 1 ? plus[static_cast<size_t>(j)] : lagrange4(plus, g.spacing, u);
      row[static_cast<size_t>(kc - 1 - j)] =
          factor == 1 ? minus[static_cast<size_t>(j)] : lagrange4(minus, g.spacing, u);
    }
    out.push_back(std::move(row));
  }
  return out;
}

double field_norm(const std::vector<GridFunction>& slices) {
  double s = 0.0;
  for (const auto& f : slices)
    for (double v : f.values) s += v * v;
  return std::sqrt(s);
}

json study(const std::vector<std::vector<std::vector<double>>>& responses, double scale) {
  json diffs = json::array(), orders = json::array();
  std::vector<double> d;
  for (size_t l = 1; l < responses.size(); ++l) {
    double s = 0.0;
    for (size_t i = 0; i < responses[l].size(); ++i)
      for (size_t j = 0; j < responses[l][i].size(); ++j) {
        const double e = responses[l][i][j] - responses[l - 1][i][j];
        s += e * e;
      }
    d.push_back(scale > 0.0 ? std::sqrt(s) / scale : std::sqrt(s));
    diffs.push_back(d.back());
  }
  for (size_t l = 1; l < d.size(); ++l) {
    if (d[l] > 0.0 && d[l - 1] > 0.0) orders.push_back(std::log2(d[l - 1] / d[l]));
    else orders.push_back(nullptr);
  }
  return {{"differences", diffs}, {"observed_orders", orders}};
}

}  // namespace

json refine_study(const RunConfig& cfg, const RefineOptions& options) {
  if (options.levels < 2) throw ValidationError("levels", "refine needs at least 2 levels");
  validate_config(cfg);
  if (!analytic_inflow(cfg))
    throw ValidationError("boundary", "refine needs analytic inflow (maxwellian or zero), not files");
  const PotentialSpec spec = make_potential(cfg);
  const SpaceGrid coarse_x = make_space_grid(cfg);
  const VelocityGrid coarse_v = make_velocity_grid(cfg);
  const SolveMode mode = cfg.mode == RunMode::symmetric_shortcut ? SolveMode::symmetric_shortcut : SolveMode::general;
  const BvpOptions opts{cfg.inflow_tolerance, cfg.max_condition};

  std::vector<std::vector<std::vector<double>>> pipe, orc;
  double pipe_scale = 0.0, orc_scale = 0.0;
  json levels = json::array();
  for (int l = 0; l < options.levels; ++l) {
    const int factor = 1 << l;
    RunConfig c = cfg;
    c.steps = cfg.steps * factor;
    c.half_count = cfg.half_count * factor;
    c.spacing = cfg.spacing / factor;
    const VelocityGrid vg = make_velocity_grid(c);
    const SpaceGrid sg = make_space_grid(c);
    const BoundaryData bd = make_boundary(c, vg);
    const KernelTable table(spec, vg, sg);
    const SolutionField f = solve_bvp(table, bd, mode, opts);
    pipe.push_back(coarse_response(f, bd, coarse_x, coarse_v, factor));
    if (l == 0) pipe_scale = field_norm(f.slices);
    json lev{{"steps", c.steps},
             {"half_count", c.half_count},
             {"spacing", c.spacing},
             {"pipeline_inflow_relative", f.provenance.inflow_relative},
             {"pipeline_current_drift", f.provenance.current_drift}};
    if (options.include_oracle) {
      const SolutionField d = solve_direct(table, bd, cfg.oracle_scheme);
      orc.push_back(coarse_response(d, bd, coarse_x, coarse_v, factor));
      if (l == 0) orc_scale = field_norm(d.slices);
      lev["oracle_current_drift"] = d.provenance.current_drift;
      lev["pipeline_vs_oracle"] = compare_fields(f, d).global_relative;
    }
    levels.push_back(std::move(lev));
  }
  json report{{"levels", levels}, {"pipeline", study(pipe, pipe_scale)}};
  if (options.include_oracle) {
    report["oracle"] = study(orc, orc_scale);
    report["oracle"]["scheme"] = to_string(cfg.oracle_scheme);
  }
  report["config"] = cfg.to_json();
  const fs::path dir = resolve_output_dir(cfg);
  fs::create_directories(dir);
  write_json(dir / "refine.json", report);
  return report;
}

}  // namespace wigner
