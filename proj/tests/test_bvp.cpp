#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "wigner/bvp.hpp"
#include "wigner/error.hpp"

using namespace wigner;

namespace {

std::vector<double> random_half(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> h(static_cast<size_t>(k));
  for (double& v : h) v = u(rng);
  return h;
}

std::vector<double> maxwellian_plus(const VelocityGrid& g) {
  std::vector<double> h(static_cast<size_t>(g.half_count));
  for (int j = 0; j < g.half_count; ++j) {
    const double v = g.positive_node(j);
    h[static_cast<size_t>(j)] = std::exp(-v * v / 2.0) / std::sqrt(2.0 * M_PI);
  }
  return h;
}

PropagatorMatrix scaled_identity(const KernelTable& t, Parity p, Direction d, double s) {
  PropagatorMatrix m;
  m.parity = p;
  m.direction = d;
  m.vgrid = t.velocity_grid();
  m.sgrid = t.space_grid();
  m.matrix = s * Eigen::MatrixXd::Identity(t.velocity_grid().half_count, t.velocity_grid().half_count);
  return m;
}

}  // namespace

TEST_CASE("zero-potential assembly is the inflow average") {
  const VelocityGrid g(32, 0.3);
  const KernelTable z(PotentialSpec::zero(), g, SpaceGrid(10.0, 20));
  std::mt19937_64 rng(2);
  const BoundaryData bd{g, random_half(32, rng), random_half(32, rng)};
  const auto r = build_propagator(z, Parity::even, Direction::l_to_r);
  const auto q = build_propagator(z, Parity::odd, Direction::r_to_l);
  const auto parts = assemble_boundary(bd, r, q);
  CHECK(parts.even0.parity == Parity::even);
  CHECK(parts.odd0.parity == Parity::odd);
  for (int j = 0; j < 32; ++j) {
    const double gp = bd.f_L[static_cast<size_t>(j)];
    const double gm = bd.f_R[static_cast<size_t>(31 - j)];  // f_R(-v_j)
    CHECK(parts.even0[32 + j] == 0.5 * (gp + gm));
    CHECK(std::abs(parts.odd0[32 + j] - 0.5 * (gp - gm)) <= 1e-15);
  }
  const auto sym = assemble_symmetric(bd);
  CHECK(sym.even0.values == parts.even0.values);

  // mirror-symmetric inflow has no odd part
  BoundaryData mirror{g, bd.f_L, std::vector<double>(bd.f_L.rbegin(), bd.f_L.rend())};
  for (double v : assemble_boundary(mirror, r, q).odd0.values) CHECK(v == 0.0);
}

TEST_CASE("general assembly reduces to the symmetric shortcut for an even potential") {
  const VelocityGrid g(64, 0.15);
  const KernelTable t(PotentialSpec::gaussian(1.0, 1.0), g, SpaceGrid(10.0, 200));
  const BoundaryData bd{g, maxwellian_plus(g), std::vector<double>(64, 0.0)};
  const auto general = assemble_boundary(bd, build_propagator(t, Parity::even, Direction::l_to_r),
                                         build_propagator(t, Parity::odd, Direction::r_to_l));
  const auto sym = assemble_symmetric(bd);
  auto diff = [&](const GridFunction& a, const GridFunction& b) {
    double s = 0.0;
    for (int j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return std::sqrt(g.spacing * s);
  };
  CHECK(diff(general.even0, sym.even0) <= 1e-5);
  CHECK(diff(general.odd0, sym.odd0) <= 1e-5);
}

TEST_CASE("singular assembly fails loudly") {
  const VelocityGrid g(8, 0.5);
  const KernelTable t(PotentialSpec::zero(), g, SpaceGrid(4.0, 4));
  const BoundaryData bd{g, std::vector<double>(8, 1.0), std::vector<double>(8, 0.0)};
  const auto r = scaled_identity(t, Parity::even, Direction::l_to_r, 1.0);
  const auto q = scaled_identity(t, Parity::odd, Direction::r_to_l, -1.0);
  CHECK_THROWS_AS(assemble_boundary(bd, r, q), AssemblyError);
  const auto q_bad = scaled_identity(t, Parity::even, Direction::r_to_l, 1.0);
  CHECK_THROWS_AS(assemble_boundary(bd, r, q_bad), ContractError);
  const BoundaryData short_bd{g, std::vector<double>(7, 1.0), std::vector<double>(8, 0.0)};
  CHECK_THROWS_AS(short_bd.validate(), ContractError);
}

TEST_CASE("free streaming is reproduced exactly") {
  const VelocityGrid g(32, 0.3);
  const KernelTable z(PotentialSpec::zero(), g, SpaceGrid(10.0, 40));
  std::mt19937_64 rng(8);
  const BoundaryData bd{g, random_half(32, rng), random_half(32, rng)};
  for (SolveMode m : {SolveMode::general, SolveMode::symmetric_shortcut}) {
    const auto f = solve_bvp(z, bd, m);
    CHECK(f.slices.size() == 41);
    for (const auto& s : f.slices) {
      for (int j = 0; j < 32; ++j) {
        CHECK(std::abs(s[32 + j] - bd.f_L[static_cast<size_t>(j)]) <= 1e-12);
        CHECK(std::abs(s[j] - bd.f_R[static_cast<size_t>(j)]) <= 1e-12);
      }
    }
    CHECK(f.provenance.orthogonality_residual == 0.0);
    CHECK(f.provenance.current_drift <= 1e-14);
  }
  const BoundaryData none{g, std::vector<double>(32, 0.0), std::vector<double>(32, 0.0)};
  const KernelTable t(PotentialSpec::gaussian(1.0, 1.0), g, SpaceGrid(10.0, 40));
  for (const auto& s : solve_bvp(t, none, SolveMode::general).slices)
    for (double v : s.values) CHECK(v == 0.0);
}

TEST_CASE("gaussian barrier: inflow, current, parity split, superposition") {
  const VelocityGrid g(48, 0.2);
  const KernelTable t(PotentialSpec::gaussian(1.0, 1.0, 0.6), g, SpaceGrid(10.0, 160));
  const BoundaryData left{g, maxwellian_plus(g), std::vector<double>(48, 0.0)};
  const auto f = solve_bvp(t, left, SolveMode::general);
  CHECK(f.provenance.inflow_relative <= 1e-6);
  CHECK_FALSE(f.provenance.inflow_flagged);
  const double j1 = velocity_moment(f.slices.front(), 1);
  CHECK(f.provenance.current_drift <= 1e-8 * (1 + std::abs(j1)));
  CHECK(f.provenance.assembly_condition >= 1.0);
  for (size_t i = 0; i < f.slices.size(); i += 16) {
    CHECK(testing_support::max_abs_diff(parity_project(f.slices[i], Parity::even), f.even_part[i]) <= 1e-11);
    CHECK(testing_support::max_abs_diff(parity_project(f.slices[i], Parity::odd), f.odd_part[i]) <= 1e-11);
  }
  CHECK(f.orthogonality.size() == f.slices.size());

  std::mt19937_64 rng(12);
  const BoundaryData right{g, std::vector<double>(48, 0.0), random_half(48, rng)};
  BoundaryData both{g, left.f_L, right.f_R};
  for (int j = 0; j < 48; ++j) both.f_L[static_cast<size_t>(j)] *= 2.0;
  const auto fr = solve_bvp(t, right, SolveMode::general);
  const auto fb = solve_bvp(t, both, SolveMode::general);
  for (size_t i = 0; i < fb.slices.size(); i += 16) {
    GridFunction lin(g);
    for (int j = 0; j < g.size(); ++j) lin[j] = 2.0 * f.slices[i][j] + fr.slices[i][j];
    CHECK(testing_support::rel_l2_diff(fb.slices[i], lin) <= 1e-11);
  }
}

TEST_CASE("symmetric shortcut needs an even potential") {
  const VelocityGrid g(16, 0.4);
  const KernelTable t(PotentialSpec::gaussian(1.0, 1.0, 1.3), g, SpaceGrid(10.0, 20));
  const BoundaryData bd{g, std::vector<double>(16, 1.0), std::vector<double>(16, 0.0)};
  CHECK_THROWS_AS(solve_bvp(t, bd, SolveMode::symmetric_shortcut), ContractError);
  CHECK_THROWS_AS(solve_bvp(t, bd, SolveMode::direct), ContractError);
}

TEST_CASE("sign convention check") {
  const VelocityGrid g(48, 0.2);
  const BoundaryData bd{g, maxwellian_plus(g), std::vector<double>(48, 0.0)};
  const KernelTable z(PotentialSpec::zero(), g, SpaceGrid(10.0, 40));
  const auto zr = check_sign_convention(z, bd);
  CHECK(zr.consistent_sign == "both");
  CHECK(zr.governing.inflow_relative == zr.flipped.inflow_relative);

  const KernelTable t(PotentialSpec::gaussian(1.0, 1.0, 1.3), g, SpaceGrid(10.0, 160));
  const auto r = check_sign_convention(t, bd);
  MESSAGE("governing " << r.governing.inflow_relative << " flipped " << r.flipped.inflow_relative);
  CHECK(r.governing.inflow_relative <= 1e-6);
  CHECK(r.flipped.inflow_relative > 1e-6);
  CHECK(r.consistent_sign == "df/dx = +B f");
  CHECK(r.to_json().contains("residual_gap"));
}
