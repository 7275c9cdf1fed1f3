#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "wigner/error.hpp"
#include "wigner/wigner_op.hpp"

using namespace wigner;

namespace {

// x-nodes -2..2 with dx = 1: station 6 sits at x = 1, station 4 at x = 0.
const KernelTable& gaussian_table() {
  static const KernelTable t(PotentialSpec::gaussian(1.0, 1.0), VelocityGrid(64, 0.15), SpaceGrid(4.0, 4));
  return t;
}

const KernelTable& zero_table() {
  static const KernelTable t(PotentialSpec::zero(), VelocityGrid(64, 0.15), SpaceGrid(4.0, 4));
  return t;
}

constexpr int kAtOne = 6;

}  // namespace

TEST_CASE("operators vanish for the zero potential and zero input") {
  const auto& z = zero_table();
  const auto f = testing_support::gaussian_bump(z.velocity_grid(), 0.4);
  for (double v : apply_theta(z, 3, f).values) CHECK(v == 0.0);
  for (double v : apply_B(z, 3, f).values) CHECK(v == 0.0);
  for (double v : apply_A(z, 3, f).values) CHECK(v == 0.0);
  const GridFunction zero(gaussian_table().velocity_grid());
  for (double v : apply_theta(gaussian_table(), kAtOne, zero).values) CHECK(v == 0.0);
}

TEST_CASE("Θ flips parity, B and A preserve it") {
  const auto& t = gaussian_table();
  const VelocityGrid& g = t.velocity_grid();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto e = random_even_function(g, rng);
    const auto o = random_odd_function(g, rng);
    const auto te = apply_theta(t, kAtOne, e);
    CHECK(te.parity == Parity::odd);
    CHECK(l2_norm(parity_project(te, Parity::even)) <= 1e-12 * l2_norm(te));
    const auto be = apply_B(t, kAtOne, e);
    CHECK(l2_norm(parity_project(be, Parity::odd)) <= 1e-12 * l2_norm(be));
    const auto bo = apply_B(t, kAtOne, o);
    CHECK(l2_norm(parity_project(bo, Parity::even)) <= 1e-12 * l2_norm(bo));
  }
}

TEST_CASE("fast Θ matches the direct double sum") {
  const auto& t = gaussian_table();
  const VelocityGrid& g = t.velocity_grid();
  std::mt19937_64 rng(5);
  for (int s : {1, 5, kAtOne}) {
    auto f = random_even_function(g, rng);
    const auto o = random_odd_function(g, rng);
    for (int j = 0; j < g.size(); ++j) f[j] += o[j];
    f.parity = Parity::none;
    const auto fast = apply_theta(t, s, f);
    const auto slow = serial::apply_theta(t, s, f);
    // independent oracle straight from the closed-form kernel
    GridFunction direct(g);
    for (int j = 0; j < g.size(); ++j) {
      double acc = 0.0;
      for (int k = 0; k < g.size(); ++k) acc += eval_kernel(t.potential(), t.station_x(s), g.node(j) - g.node(k)) * f[k];
      direct[j] = g.spacing * acc;
    }
    double scale = 0.0;
    for (double v : direct.values) scale = std::max(scale, std::abs(v));
    CHECK(testing_support::max_abs_diff(fast, slow) <= 1e-13 * scale);
    CHECK(testing_support::max_abs_diff(fast, direct) <= 1e-13 * scale);
    CHECK(testing_support::max_abs_diff(serial::apply_B(t, s, f), apply_B(t, s, f)) <= 1e-12 * scale / (0.5 * g.spacing));
  }
}

TEST_CASE("A equals B on even functions") {
  const auto& t = gaussian_table();
  const auto f = GridFunction::sample(t.velocity_grid(), [](double v) { return std::exp(-v * v); }, Parity::even);
  const auto a = apply_A(t, kAtOne, f);
  const auto b = apply_B(t, kAtOne, f);
  double scale = 0.0;
  for (double v : b.values) scale = std::max(scale, std::abs(v));
  CHECK(testing_support::max_abs_diff(a, b) <= 1e-12 * scale);
}

TEST_CASE("A and B differ by the rank-one term on odd functions") {
  const auto& t = gaussian_table();
  const VelocityGrid& g = t.velocity_grid();
  const auto f = GridFunction::sample(g, [](double v) { return v * std::exp(-v * v); }, Parity::odd);
  const double x = t.station_x(kAtOne);
  double c = 0.0;
  for (int k = 0; k < g.size(); ++k) c += eval_kernel(t.potential(), x, -g.node(k)) * f[k];
  c *= g.spacing;
  CHECK(std::abs(c) > 1e-3);
  const auto a = apply_A(t, kAtOne, f);
  const auto b = apply_B(t, kAtOne, f);
  for (int j = 0; j < g.size(); ++j) CHECK(std::abs((b[j] - a[j]) - c / g.node(j)) <= 1e-13 * std::abs(c / g.node(j)) + 1e-15);
}

TEST_CASE("Θ output has zero mean and B is linear") {
  const auto& t = gaussian_table();
  const VelocityGrid& g = t.velocity_grid();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    GridFunction f(g), h(g);
    for (int j = 0; j < g.size(); ++j) {
      f[j] = u(rng) * std::exp(-0.5 * g.node(j) * g.node(j));
      h[j] = u(rng);
    }
    const auto tf = apply_theta(t, kAtOne, f);
    double mean = 0.0, scale = 0.0;
    for (double v : tf.values) {
      mean += g.spacing * v;
      scale += g.spacing * std::abs(v);
    }
    CHECK(std::abs(mean) <= 1e-12 * scale);

    const double alpha = u(rng), beta = u(rng);
    GridFunction comb(g);
    for (int j = 0; j < g.size(); ++j) comb[j] = alpha * f[j] + beta * h[j];
    const auto lhs = apply_B(t, kAtOne, comb);
    const auto bf = apply_B(t, kAtOne, f);
    const auto bh = apply_B(t, kAtOne, h);
    GridFunction rhs(g);
    for (int j = 0; j < g.size(); ++j) rhs[j] = alpha * bf[j] + beta * bh[j];
    CHECK(testing_support::rel_l2_diff(lhs, rhs) <= 1e-13);
  }
}

TEST_CASE("reduced parity operators match the full operator") {
  const auto& t = gaussian_table();
  const VelocityGrid& g = t.velocity_grid();
  std::mt19937_64 rng(23);
  for (Parity p : {Parity::even, Parity::odd}) {
    const auto f = p == Parity::even ? random_even_function(g, rng) : random_odd_function(g, rng);
    const auto full = apply_B(t, kAtOne, f);
    const auto pos = inflow_restrict(f, Side::plus);
    const Eigen::VectorXd red = reduced_B(t, kAtOne, p) * Eigen::Map<const Eigen::VectorXd>(pos.data(), g.half_count);
    for (int j = 0; j < g.half_count; ++j) CHECK(std::abs(red(j) - full[g.half_count + j]) <= 1e-12 * (1 + std::abs(full[g.half_count + j])));
  }
  CHECK(subspace_norm(zero_table(), 2, Parity::odd) == 0.0);
  CHECK(subspace_norm(t, kAtOne, Parity::even) > 0.0);
  CHECK_THROWS_AS(reduced_B(t, 0, Parity::none), ContractError);
}

TEST_CASE("operator bound check") {
  const auto zr = operator_bound_check(zero_table(), 2, 10, 1);
  CHECK(zr.max_ratio == 0.0);
  CHECK(zr.bound == 0.0);
  CHECK(zr.pass);
  const auto at0 = operator_bound_check(gaussian_table(), 4, 10, 1);
  CHECK(at0.max_ratio == 0.0);
  CHECK(at0.pass);

  const KernelTable fine(PotentialSpec::gaussian(1.0, 1.0), VelocityGrid(128, 0.1), SpaceGrid(4.0, 4));
  const auto r = operator_bound_check(fine, kAtOne, 100, 42);
  CHECK(r.x == 1.0);
  CHECK(r.max_ratio > 0.0);
  CHECK(r.max_ratio <= r.bound * 1.05);
  CHECK(r.pass);
  const auto again = operator_bound_check(fine, kAtOne, 100, 42);
  CHECK(again.max_ratio == r.max_ratio);
  const auto j = r.to_json();
  for (const char* key : {"x", "bound", "max_ratio", "trials", "seed", "pass"}) CHECK(j.contains(key));
}

TEST_CASE("contract errors") {
  const auto& t = gaussian_table();
  const auto f = testing_support::gaussian_bump(VelocityGrid(32, 0.15), 0.0);
  CHECK_THROWS_AS(apply_theta(t, 0, f), ContractError);
  CHECK_THROWS_AS(apply_B(t, 0, f), ContractError);
  CHECK_THROWS_AS(apply_A(t, 0, f), ContractError);
  const auto ok = testing_support::gaussian_bump(t.velocity_grid(), 0.0);
  CHECK_THROWS_AS(apply_theta(t, t.station_count(), ok), ContractError);
  CHECK_THROWS_AS(apply_theta(t, -1, ok), ContractError);
}
