#include "wigner/potential.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wigner/error.hpp"
#include "wigner/io.hpp"

namespace wigner {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n != y_.size()) throw ContractError("CubicSpline: x and y lengths differ");
  if (n < 4) throw ContractError("CubicSpline: need at least 4 samples");
  for (size_t i = 0; i + 1 < n; ++i) {
    if (!(x_[i + 1] > x_[i])) throw ContractError("CubicSpline: x must be strictly increasing");
  }
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]))
      throw ContractError("CubicSpline: non-finite sample");
  }

  // Natural end conditions m_0 = m_{n-1} = 0; Thomas algorithm on the interior.
  m_.assign(n, 0.0);
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    if (i > 1) {
      const double w = h0 / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
  }
  for (size_t i = n - 2; i >= 1; --i) {
    m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
  }
}

double CubicSpline::operator()(double x, int order) const {
  if (order < 0 || order > max_derivative) {
    std::ostringstream os;
    os << "CubicSpline: derivative order " << order << " exceeds " << max_derivative;
    throw CapabilityError(os.str());
  }
  const double span = x_.back() - x_.front();
  const double slack = 1e-12 * span;
  if (x < x_.front() - slack || x > x_.back() + slack || !std::isfinite(x)) {
    std::ostringstream os;
    os << "tabulated potential evaluated at x=" << x << " outside [" << x_.front() << ", "
       << x_.back() << "]";
    throw DomainError(os.str());
  }
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  size_t i = it == x_.begin() ? 0 : static_cast<size_t>(it - x_.begin()) - 1;
  i = std::min(i, x_.size() - 2);
  const double h = x_[i + 1] - x_[i];
  const double t = x - x_[i];
  const double mi = m_[i];
  const double mj = m_[i + 1];
  const double b = (y_[i + 1] - y_[i]) / h - h * (2.0 * mi + mj) / 6.0;
  const double c3 = (mj - mi) / (6.0 * h);
  switch (order) {
    case 0: return y_[i] + t * (b + t * (0.5 * mi + t * c3));
    case 1: return b + t * (mi + 3.0 * c3 * t);
    case 2: return mi + 6.0 * c3 * t;
    default: return 6.0 * c3;
  }
}

const char* to_string(PotentialFamily f) {
  switch (f) {
    case PotentialFamily::zero: return "zero";
    case PotentialFamily::gaussian: return "gaussian";
    case PotentialFamily::tabulated: return "tabulated";
  }
  return "zero";
}

PotentialSpec PotentialSpec::zero() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::gaussian(double amplitude, double width_a, double center) {
  PotentialSpec s;
  s.family = PotentialFamily::gaussian;
  s.amplitude = amplitude;
  s.width_a = width_a;
  s.center = center;
  validate(s);
  return s;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> x, std::vector<double> v,
                                       double amplitude, double y_max) {
  PotentialSpec s;
  s.family = PotentialFamily::tabulated;
  s.amplitude = amplitude;
  s.y_max = y_max;
  s.table = std::make_shared<const CubicSpline>(std::move(x), std::move(v));
  validate(s);
  return s;
}

int PotentialSpec::max_derivative() const {
  // Gaussian derivatives come from a stable Hermite recurrence; 64 is far past
  // anything the moment hierarchy can use in double precision.
  return family == PotentialFamily::tabulated ? CubicSpline::max_derivative : 64;
}

void validate(const PotentialSpec& spec) {
  if (!std::isfinite(spec.amplitude)) throw ContractError("potential: amplitude must be finite");
  switch (spec.family) {
    case PotentialFamily::zero: break;
    case PotentialFamily::gaussian:
      if (!(spec.width_a > 0.0) || !std::isfinite(spec.width_a))
        throw ContractError("potential: width_a must be > 0 for the gaussian family");
      if (!std::isfinite(spec.center)) throw ContractError("potential: center must be finite");
      break;
    case PotentialFamily::tabulated:
      if (!spec.table) throw ContractError("potential: tabulated family needs samples");
      if (!(spec.y_max > 0.0)) throw ContractError("potential: y_max must be > 0");
      break;
  }
}

namespace {

// d^n/du^n exp(-u^2) = (-1)^n H_n(u) exp(-u^2), physicists' Hermite H_n.
double gaussian_derivative(double amplitude, double width_a, double center, double x, int n) {
  const double u = (x - center) / std::sqrt(width_a);
  double h_prev = 1.0;
  double h = 2.0 * u;
  if (n == 0) {
    h = 1.0;
  } else {
    for (int k = 1; k < n; ++k) {
      const double next = 2.0 * u * h - 2.0 * k * h_prev;
      h_prev = h;
      h = next;
    }
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return amplitude * sign * h * std::exp(-u * u) * std::pow(width_a, -0.5 * n);
}

void require_kernel_window(const PotentialSpec& spec, double x) {
  const double half = 0.5 * spec.y_max;
  if (x - half < spec.table->x_min() || x + half > spec.table->x_max()) {
    std::ostringstream os;
    os << "kernel at x=" << x << " needs the table on [" << x - half << ", " << x + half
       << "] but it covers [" << spec.table->x_min() << ", " << spec.table->x_max() << "]";
    throw DomainError(os.str());
  }
}

double tabulated_kernel(const PotentialSpec& spec, double x, double v) {
  if (v == 0.0) return 0.0;
  require_kernel_window(spec, x);
  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [&](double y) { return eval_DV(spec, x, y) * std::sin(v * y); };
  double err = 0.0;
  double l1 = 0.0;
  const double val =
      gauss_kronrod<double, 31>::integrate(integrand, 0.0, spec.y_max, 20, spec.quadrature_tol,
                                           &err, &l1);
  if (err > spec.quadrature_tol * std::max(l1, 1.0)) {
    std::ostringstream os;
    os << "kernel quadrature did not converge at x=" << x << ", v=" << v
       << " (error estimate " << err << ")";
    throw NumericalError(os.str(), err);
  }
  return -val / std::numbers::pi;
}

// -(1/π)∫_0^{y_max} D_V(x,y) sin(q h y) dy for q < count. D_V is piecewise cubic
// in y with breaks where x ± y/2 crosses a knot; 8-point Gauss-Legendre on each
// piece, with pieces short enough that the sine's phase moves by at most 2.

std::vector<double> tabulated_row(const PotentialSpec& spec, double x, double h, size_t count) {
  require_kernel_window(spec, x);
  const double y_max = spec.y_max;
  std::vector<double> breaks{0.0, y_max};
  for (double k : spec.table->knots()) {
    for (double y : {2.0 * (k - x), 2.0 * (x - k)})
      if (y > 0.0 && y < y_max) breaks.push_back(y);
  }
  // keep pieces short enough for the sine at the largest sampled velocity
  const double v_top = h * static_cast<double>(count);
  const double max_piece = v_top > 0.0 ? std::min(0.25, 2.0 / v_top) : 0.25;
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  using rule = boost::math::quadrature::gauss<double, 8>;
  const auto& abs = rule::abscissa();
  const auto& wts = rule::weights();
  std::vector<double> ys, ws;
  for (size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double lo = breaks[b], hi = breaks[b + 1];
    if (hi - lo <= 1e-14 * y_max) continue;
    const int parts = static_cast<int>(std::ceil((hi - lo) / max_piece));
    const double w = (hi - lo) / parts;
    for (int p = 0; p < parts; ++p) {
      const double mid = lo + (p + 0.5) * w;
      for (size_t n = 0; n < abs.size(); ++n) {
        for (double sgn : {-1.0, 1.0}) {
          ys.push_back(mid + sgn * 0.5 * w * abs[n]);
          ws.push_back(0.5 * w * wts[n]);
        }
      }
    }
  }
  std::vector<double> dv(ys.size());
  for (size_t n = 0; n < ys.size(); ++n) dv[n] = ws[n] * eval_DV(spec, x, ys[n]);
  std::vector<double> row(count, 0.0);
  for (size_t q = 1; q < count; ++q) {
    const double v = static_cast<double>(q) * h;
    double acc = 0.0;
    for (size_t n = 0; n < ys.size(); ++n) acc += dv[n] * std::sin(v * ys[n]);
    row[q] = -acc / std::numbers::pi;
  }
  return row;
}

}  // namespace

std::vector<double> kernel_row(const PotentialSpec& spec, double x, double h, size_t count) {
  if (spec.family == PotentialFamily::tabulated) return tabulated_row(spec, x, h, count);
  std::vector<double> row(count, 0.0);
  for (size_t q = 1; q < count; ++q) row[q] = eval_kernel(spec, x, static_cast<double>(q) * h);
  return row;
}

double eval_potential(const PotentialSpec& spec, double x, int deriv_order) {
  if (deriv_order < 0) throw ContractError("eval_potential: deriv_order must be >= 0");
  if (deriv_order > spec.max_derivative()) {
    std::ostringstream os;
    os << "eval_potential: derivative order " << deriv_order << " unavailable for "
       << to_string(spec.family) << " potential (max " << spec.max_derivative() << ")";
    throw CapabilityError(os.str());
  }
  switch (spec.family) {
    case PotentialFamily::zero: return 0.0;
    case PotentialFamily::gaussian:
      return gaussian_derivative(spec.amplitude, spec.width_a, spec.center, x, deriv_order);
    case PotentialFamily::tabulated: return spec.amplitude * (*spec.table)(x, deriv_order);
  }
  return 0.0;
}

double eval_DV(const PotentialSpec& spec, double x, double y) {
  return eval_potential(spec, x + 0.5 * y) - eval_potential(spec, x - 0.5 * y);
}

double eval_kernel(const PotentialSpec& spec, double x, double v) {
  switch (spec.family) {
    case PotentialFamily::zero: return 0.0;
    case PotentialFamily::gaussian: {
      const double a = spec.width_a;
      return spec.amplitude * 2.0 * std::sqrt(a / std::numbers::pi) * std::exp(-a * v * v) *
             std::sin(2.0 * (x - spec.center) * v);
    }
    case PotentialFamily::tabulated: return tabulated_kernel(spec, x, v);
  }
  return 0.0;
}

double eval_kernel_dv(const PotentialSpec& spec, double x, double v) {
  switch (spec.family) {
    case PotentialFamily::zero: return 0.0;
    case PotentialFamily::gaussian: {
      const double a = spec.width_a;
      const double s = x - spec.center;
      return spec.amplitude * 2.0 * std::sqrt(a / std::numbers::pi) * std::exp(-a * v * v) *
             (2.0 * s * std::cos(2.0 * s * v) - 2.0 * a * v * std::sin(2.0 * s * v));
    }
    case PotentialFamily::tabulated:
      throw CapabilityError("eval_kernel_dv: no analytic velocity derivative for tabulated potentials");
  }
  return 0.0;
}

std::vector<double> kernel_moments(const PotentialSpec& spec, double x, int max_order) {
  if (max_order < 1 || max_order % 2 == 0)
    throw ContractError("kernel_moments: max_order must be odd and >= 1");
  if (max_order > spec.max_derivative()) {
    std::ostringstream os;
    os << "kernel_moments: order " << max_order << " needs V^(" << max_order << "), but the "
       << to_string(spec.family) << " potential provides derivatives up to "
       << spec.max_derivative();
    throw CapabilityError(os.str());
  }
  std::vector<double> out;
  out.reserve(static_cast<size_t>((max_order + 1) / 2));
  for (int n = 1; n <= max_order; n += 2) {
    // i^(n+1) is real for odd n: (-1)^((n+1)/2).
    const double phase = ((n + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    out.push_back(phase * eval_potential(spec, x, n) / std::ldexp(1.0, n - 1));
  }
  return out;
}

bool is_even_potential(const PotentialSpec& spec, double half_width, double tol) {
  constexpr int samples = 201;
  double scale = 0.0;
  double defect = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = half_width * i / (samples - 1);
    const double a = eval_potential(spec, x);
    const double b = eval_potential(spec, -x);
    scale = std::max({scale, std::abs(a), std::abs(b)});
    defect = std::max(defect, std::abs(a - b));
  }
  return defect <= tol * std::max(scale, 1e-300) || defect == 0.0;
}

PotentialSpec load_tabulated_potential(const std::string& path, double amplitude, double y_max) {
  auto [x, v] = read_two_column_csv(path);
  PotentialSpec s = PotentialSpec::tabulated(std::move(x), std::move(v), amplitude, y_max);
  s.table_path = path;
  return s;
}

}  // namespace wigner
