#pragma once

#include <memory>
#include <string>
#include <vector>

namespace wigner {

/// Natural cubic spline through strictly increasing samples (x_i, y_i).
/// Derivatives up to order 3 exist (the third is piecewise constant).
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x, int deriv_order = 0) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

  static constexpr int max_derivative = 3;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

enum class PotentialFamily { zero, gaussian, tabulated };

const char* to_string(PotentialFamily f);

/// Analytic or tabulated description of V(x). Units are dimensionless
/// (hbar = e = m = 1).
///
/// gaussian: V(x) = amplitude · exp(-(x - center)^2 / width_a).
/// tabulated: V(x) = amplitude · spline(x); y_max truncates the kernel's
/// inverse Fourier integral, which needs the table on [x - y_max/2, x + y_max/2].
struct PotentialSpec {
  PotentialFamily family = PotentialFamily::zero;
  double amplitude = 1.0;
  double width_a = 1.0;
  double center = 0.0;
  std::shared_ptr<const CubicSpline> table;
  double y_max = 40.0;
  double quadrature_tol = 1e-10;
  std::string table_path;  // provenance only

  static PotentialSpec zero();
  static PotentialSpec gaussian(double amplitude, double width_a, double center = 0.0);
  static PotentialSpec tabulated(std::vector<double> x, std::vector<double> v,
                                 double amplitude = 1.0, double y_max = 40.0);

  /// Highest derivative of V that eval_potential can deliver.
  int max_derivative() const;
};

/// Throws ContractError on an invalid spec (width_a <= 0, missing table, ...).
void validate(const PotentialSpec& spec);

/// V^(deriv_order)(x).
double eval_potential(const PotentialSpec& spec, double x, int deriv_order = 0);

/// D_V(x, y) = V(x + y/2) - V(x - y/2).
double eval_DV(const PotentialSpec& spec, double x, double y);

/// Wigner kernel Vw(x, v) = i F^{-1}_{y->v}[D_V(x, y)], with the 1/(2π) on the
/// inverse transform. Real and odd in v. Closed form for the gaussian family,
/// adaptive Gauss-Kronrod quadrature of -(1/π)∫_0^{y_max} D_V(x,y) sin(vy) dy
/// for tabulated potentials.
double eval_kernel(const PotentialSpec& spec, double x, double v);

/// Vw(x, q·h) for q = 0..count-1. Same values as eval_kernel; for tabulated
/// potentials one Gauss-Legendre rule aligned with the spline knots serves every
/// sample, which is much cheaper than a quadrature per sample.
std::vector<double> kernel_row(const PotentialSpec& spec, double x, double h, size_t count);

/// ∂_v Vw(x, v); analytic for zero/gaussian only (CapabilityError otherwise).
double eval_kernel_dv(const PotentialSpec& spec, double x, double v);

/// [Vw_1(x), Vw_3(x), ..., Vw_max_order(x)] from Vw_n = i^(n+1) V^(n)(x) / 2^(n-1).
/// Even-order moments vanish identically and are not returned.
std::vector<double> kernel_moments(const PotentialSpec& spec, double x, int max_order);

/// True when max over sampled x in [0, half_width] of |V(x) - V(-x)| is below
/// tol times the potential scale.
bool is_even_potential(const PotentialSpec& spec, double half_width, double tol = 1e-12);

/// Reads a two-column (x, V) CSV with '#' comments into a tabulated spec.
PotentialSpec load_tabulated_potential(const std::string& path, double amplitude = 1.0,
                                       double y_max = 40.0);

}  // namespace wigner
