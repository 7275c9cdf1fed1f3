// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <Eigen/SVD>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "wigner/bvp.hpp"
#include "wigner/config.hpp"
#include "wigner/driver.hpp"
#include "wigner/kernel_table.hpp"
#include "wigner/odd_moments.hpp"
#include "wigner/oracle.hpp"
#include "wigner/propagation.hpp"
#include "wigner/wigner_op.hpp"

using namespace wigner;
namespace fs = std::filesystem;
using boost::math::quadrature::gauss_kronrod;

namespace {

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct Setup {
  RunConfig cfg;
  PotentialSpec spec;
  VelocityGrid vg;
  SpaceGrid sg;
  BoundaryData bd;
};

// Gaussian-barrier preset, optionally with both resolutions scaled by 2^level.
Setup barrier(int level = 0) {
  Setup s;
  s.cfg = preset_config("gaussian-barrier");
  s.cfg.steps <<= level;
  s.cfg.half_count <<= level;
  s.cfg.spacing /= static_cast<double>(1 << level);
  s.spec = make_potential(s.cfg);
  s.vg = make_velocity_grid(s.cfg);
  s.sg = make_space_grid(s.cfg);
  s.bd = make_boundary(s.cfg, s.vg);
  return s;
}

SolutionField pipeline(const KernelTable& t, const BoundaryData& bd) {
  return solve_bvp(t, bd, build_propagator(t, Parity::even, Direction::l_to_r),
                   build_propagator(t, Parity::odd, Direction::r_to_l));
}

double spectral_norm(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

void ac1() {
  const VelocityGrid g(64, 0.15);
  const KernelTable z(PotentialSpec::zero(), g, SpaceGrid(10.0, 200));
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BoundaryData bd{g, std::vector<double>(64), std::vector<double>(64)};
  for (double& v : bd.f_L) v = u(rng);
  for (double& v : bd.f_R) v = u(rng);
  const auto f = pipeline(z, bd);
  double err = 0.0;
  for (const auto& s : f.slices) {
    for (int j = 0; j < 64; ++j) {
      err = std::max(err, std::abs(s[64 + j] - bd.f_L[static_cast<size_t>(j)]));
      err = std::max(err, std::abs(s[j] - bd.f_R[static_cast<size_t>(j)]));
    }
  }
  report("AC-1", err <= 1e-12, "free streaming: max |f - inflow extension| = " + fmt(err) + " (tol 1e-12)");
}

void ac2() {
  const Setup s = barrier();
  const KernelTable t(s.spec, s.vg, s.sg);
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int station = static_cast<int>(rng() % static_cast<std::uint64_t>(t.station_count()));
    const auto e = random_even_function(s.vg, rng);
    const auto o = random_odd_function(s.vg, rng);
    const auto be = apply_B(t, station, e);
    const auto bo = apply_B(t, station, o);
    worst = std::max(worst, l2_norm(parity_project(be, Parity::odd)) / l2_norm(be));
    worst = std::max(worst, l2_norm(parity_project(bo, Parity::even)) / l2_norm(bo));
  }
  double march = 0.0;
  for (Direction d : {Direction::l_to_r, Direction::r_to_l}) {
    for (const auto& sl : march_ivp(t, random_even_function(s.vg, rng), Parity::even, d))
      march = std::max(march, parity_defect(sl.values, Parity::even));
    for (const auto& sl : march_ivp(t, random_odd_function(s.vg, rng), Parity::odd, d))
      march = std::max(march, parity_defect(sl.values, Parity::odd));
  }
  report("AC-2", worst <= 1e-12 && march <= 1e-11,
         "parity: max ||P(B f)||/||B f|| = " + fmt(worst) + " (tol 1e-12), march defect = " + fmt(march) +
             " (tol 1e-11)");
}

void ac3() {
  const Setup s = barrier();
  const KernelTable t(s.spec, s.vg, s.sg);
  const int m = s.sg.steps;
  bool pass = true;
  std::string detail;
  for (int node : {0, m / 4, m / 2, (3 * m) / 4, m}) {
    const auto r = operator_bound_check(t, KernelTable::station_of_node(node), 100,
                                        s.cfg.seed + static_cast<std::uint64_t>(node), 0.05);
    pass = pass && r.pass;
    detail += " x=" + fmt(r.x) + ": " + fmt(r.max_ratio) + "/" + fmt(r.bound);
  }
  report("AC-3", pass, "max ||A f||/||f|| vs sqrt(8)||Vw||_H1 (slack 1.05):" + detail);
}

void ac4() {
  const Setup s = barrier();
  const KernelTable t(s.spec, s.vg, s.sg);
  const auto f = pipeline(t, s.bd);
  const double j1 = velocity_moment(f.slices.front(), 1);
  const double tol = 1e-8 * (1.0 + std::abs(j1));
  report("AC-4", f.provenance.current_drift <= tol,
         "current drift = " + fmt(f.provenance.current_drift) + " (tol " + fmt(tol) + ", J1 = " + fmt(j1) + ")");
}

// max over x of |J_n(grid) - J_n(hierarchy)| / max_x |J_n|, n = 1, 3, 5.
std::vector<double> hierarchy_mismatch(int level) {
  const Setup s = barrier(level);
  const KernelTable t(s.spec, s.vg, s.sg);
  const auto f0 = GridFunction::sample(s.vg, [](double v) { return v * std::exp(-v * v / 2.0); }, Parity::odd);
  const auto slices = march_ivp(t, f0, Parity::odd, Direction::l_to_r);
  const auto traj = solve_hierarchy(s.spec, s.sg, odd_moments(slices.front(), 3, s.sg.left()), Direction::l_to_r);
  std::vector<double> out;
  for (int m = 0; m < 3; ++m) {
    double diff = 0.0, scale = 0.0;
    for (size_t i = 0; i < slices.size(); ++i) {
      const double ref = traj[i].values[static_cast<size_t>(m)];
      diff = std::max(diff, std::abs(velocity_moment(slices[i], 2 * m + 1) - ref));
      scale = std::max(scale, std::abs(ref));
    }
    out.push_back(diff / scale);
  }
  return out;
}

void ac5() {
  const auto coarse = hierarchy_mismatch(0);
  const auto fine = hierarchy_mismatch(1);
  std::string detail;
  for (int m = 0; m < 3; ++m)
    detail += " J" + std::to_string(2 * m + 1) + ": " + fmt(coarse[static_cast<size_t>(m)]) + " -> " +
              fmt(fine[static_cast<size_t>(m)]);
  // J1 is conserved by both sides, so its mismatch is round-off; the refinement
  // requirement is applied to the mismatch over n = 1, 3, 5 taken together.
  const double c = *std::max_element(coarse.begin(), coarse.end());
  const double f = *std::max_element(fine.begin(), fine.end());
  bool pass = c <= 1e-4 && f * 2.0 <= c;
  detail += "; max " + fmt(c) + " -> " + fmt(f);
  const Setup s = barrier();
  const auto traj = solve_hierarchy(s.spec, s.sg, MomentVector({1.0, 0.0}, s.sg.left()), Direction::l_to_r);
  double closed = 0.0;
  for (int i = 0; i < s.sg.size(); ++i) {
    const double x = s.sg.node(i);
    const double j3 = 2.0 * (eval_potential(s.spec, s.sg.left()) - eval_potential(s.spec, x));
    closed = std::max(closed, std::abs(traj[static_cast<size_t>(i)].J(3) - j3));
  }
  pass = pass && closed <= 1e-10;
  report("AC-5", pass,
         "grid vs hierarchy (tol 1e-4, shrink >= 2x):" + detail + "; J3 closed form " + fmt(closed) + " (tol 1e-10)");
}

void ac6() {
  const Setup s = barrier();
  double q_dev = 0.0;
  for (Direction d : {Direction::l_to_r, Direction::r_to_l}) {
    const auto q = build_moment_Q(s.spec, s.sg, s.cfg.moment_order, d);
    q_dev = std::max(q_dev, (q - Eigen::MatrixXd::Identity(q.rows(), q.cols())).cwiseAbs().maxCoeff());
  }
  double r_dev[2];
  for (int level : {0, 1}) {
    const Setup sl = barrier(level);
    const KernelTable t(sl.spec, sl.vg, sl.sg);
    const auto r = build_propagator(t, Parity::even, Direction::l_to_r);
    r_dev[level] = spectral_norm(r.matrix - Eigen::MatrixXd::Identity(r.matrix.rows(), r.matrix.cols()));
  }
  const KernelTable t(s.spec, s.vg, s.sg);
  const auto f = pipeline(t, s.bd);
  double moments = 0.0;
  for (int n = 1; n <= 7; n += 2) {
    const double a = velocity_moment(f.slices.front(), n);
    const double b = velocity_moment(f.slices.back(), n);
    moments = std::max(moments, std::abs(a - b) / std::abs(a));
  }
  const bool pass = q_dev <= 1e-10 && r_dev[0] <= 1e-4 && r_dev[1] < r_dev[0] && moments <= 1e-6;
  report("AC-6", pass,
         "|Q - I| = " + fmt(q_dev) + " (tol 1e-10), ||R_lr - I|| = " + fmt(r_dev[0]) + " -> " + fmt(r_dev[1]) +
             " (tol 1e-4, decreasing), boundary J_n mismatch = " + fmt(moments) + " (tol 1e-6)");
}

void ac7() {
  double gap[2];
  for (int level : {0, 1}) {
    const Setup s = barrier(level);
    const KernelTable t(s.spec, s.vg, s.sg);
    gap[level] = compare_fields(pipeline(t, s.bd), solve_direct(t, s.bd)).global_relative;
  }
  report("AC-7", gap[0] <= 0.05 && gap[0] >= 1.5 * gap[1],
         "pipeline vs box-upwind oracle: " + fmt(gap[0]) + " -> " + fmt(gap[1]) + " (tol 5e-2, shrink >= 1.5x)");
}

double kernel_by_quadrature(const PotentialSpec& spec, double x, double v) {
  auto f = [&](double y) { return eval_DV(spec, x, y) * std::sin(v * y); };
  return -gauss_kronrod<double, 61>::integrate(f, 0.0, spec.y_max, 25, 1e-14) / std::numbers::pi;
}

void ac8() {
  const auto spec = PotentialSpec::gaussian(1.0, 1.0);
  double probe = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = -4.0 + 8.0 * i / 19.0;
    for (int j = 0; j < 20; ++j) {
      const double v = -6.0 + 12.0 * j / 19.0;
      probe = std::max(probe, std::abs(eval_kernel(spec, x, v) - kernel_by_quadrature(spec, x, v)));
    }
  }
  double moment = 0.0;
  for (double x : {-2.0, -0.7, 0.0, 0.4, 1.5}) {
    auto f = [&](double v) { return v * eval_kernel(spec, x, v); };
    const double quad = 2.0 * gauss_kronrod<double, 61>::integrate(f, 0.0, 12.0, 25, 1e-14);
    moment = std::max(moment, std::abs(quad + eval_potential(spec, x, 1)));
    moment = std::max(moment, std::abs(kernel_moments(spec, x, 1)[0] + eval_potential(spec, x, 1)));
  }
  report("AC-8", probe <= 1e-8 && moment <= 1e-8,
         "closed form vs quadrature on 20x20 probe = " + fmt(probe) + ", Vw_1 + V' = " + fmt(moment) +
             " (tol 1e-8)");
}

void ac9(const fs::path& scratch) {
  const VelocityGrid g(64, 0.15);
  const KernelTable z(PotentialSpec::zero(), g, SpaceGrid(10.0, 200));
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BoundaryData bd{g, std::vector<double>(64), std::vector<double>(64)};
  for (double& v : bd.f_L) v = u(rng);
  for (double& v : bd.f_R) v = u(rng);
  const auto parts = assemble_boundary(bd, build_propagator(z, Parity::even, Direction::l_to_r),
                                       build_propagator(z, Parity::odd, Direction::r_to_l));
  double avg = 0.0;
  for (int j = 0; j < 64; ++j) {
    const double gp = bd.f_L[static_cast<size_t>(j)];
    const double gm = bd.f_R[static_cast<size_t>(63 - j)];
    avg = std::max(avg, std::abs(parts.even0[64 + j] - 0.5 * (gp + gm)));
    avg = std::max(avg, std::abs(parts.odd0[64 + j] - 0.5 * (gp - gm)));
  }

  double inflow = 0.0;
  for (const char* preset : {"gaussian-barrier", "shifted-barrier"}) {
    RunConfig c = preset_config(preset);
    const KernelTable t(make_potential(c), make_velocity_grid(c), make_space_grid(c));
    inflow = std::max(inflow, pipeline(t, make_boundary(c, t.velocity_grid())).provenance.inflow_relative);
  }

  bool reported = true;
  for (RunMode mode : {RunMode::general, RunMode::symmetric_shortcut, RunMode::compare}) {
    RunConfig c = preset_config("gaussian-barrier");
    c.steps = 40;
    c.half_count = 24;
    c.spacing = 0.4;
    c.bound_trials = 5;
    c.mode = mode;
    c.output_dir = (scratch / (std::string("ac9_") + to_string(mode))).string();
    const auto s = run(c);
    reported = reported && s.diagnostics.contains("condition_numbers") &&
               s.diagnostics["condition_numbers"].contains("assembly");
  }
  report("AC-9", avg <= 1e-15 && inflow <= 1e-6 && reported,
         "zero-potential averages = " + fmt(avg) + " (round-off), general inflow residual = " + fmt(inflow) +
             " (tol 1e-6), assembly condition reported: " + (reported ? "yes" : "no"));
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void ac10(const fs::path& scratch) {
  RunConfig c = preset_config("shifted-barrier");
  c.mode = RunMode::compare;
  c.output_dir = (scratch / "ac10_a").string();
  const auto a = run(c);
  c.output_dir = (scratch / "ac10_b").string();
  const auto b = run(c);
  int compared = 0, differing = 0;
  for (const auto& name : a.files) {
    if (fs::path(name).extension() != ".csv") continue;
    ++compared;
    if (read_file(a.output_dir / name) != read_file(b.output_dir / name)) ++differing;
  }
  report("AC-10", compared > 0 && differing == 0,
         std::to_string(compared) + " CSV files compared, " + std::to_string(differing) + " differ");
}

}  // namespace

int main() {
  const fs::path scratch = fs::temp_directory_path() / "wigner_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  const std::pair<const char*, void (*)()> plain[] = {{"AC-1", ac1}, {"AC-2", ac2}, {"AC-3", ac3}, {"AC-4", ac4},
                                                      {"AC-5", ac5}, {"AC-6", ac6}, {"AC-7", ac7}, {"AC-8", ac8}};
  for (const auto& [id, fn] : plain) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, std::string("threw: ") + e.what());
    }
  }
  try {
    ac9(scratch);
  } catch (const std::exception& e) {
    report("AC-9", false, std::string("threw: ") + e.what());
  }
  try {
    ac10(scratch);
  } catch (const std::exception& e) {
    report("AC-10", false, std::string("threw: ") + e.what());
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
