#include "fracdyn/special_functions.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace fracdyn {

namespace {

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

void require_positive(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("gamma requires a finite argument x > 0, got " + std::to_string(x));
  }
}

// Returns the Lanczos series sum and t = x + g + 1/2 for x >= 1/2 (x already shifted by -1).
double lanczos_sum(double xm1) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    a += kLanczos[i] / (xm1 + static_cast<double>(i));
  }
  return a;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// |z|^(1/m) below which the alternating series is summed directly.
constexpr double kSeriesReach = 8.0;

// Absolute accuracy demanded of the quadrature path.
constexpr double kQuadratureTolerance = 1e-11;

}  // namespace

double gamma_fn(double x) {
  require_positive(x);
  if (x < 0.5) {
    // Reflection keeps the Lanczos sum in its accurate range.
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  const double a = lanczos_sum(xm1);
  // Split the power so t^(x - 1/2) does not overflow before e^-t damps it.
  const double half_pow = std::pow(t, 0.5 * (xm1 + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_pow * (half_pow * std::exp(-t)) * a;
}

double log_gamma(double x) {
  require_positive(x);
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(xm1));
}

namespace detail {

double mittag_leffler_series(double m, double z, const MittagLefflerOptions& options, double* max_term) {
  if (z == 0.0) {
    if (max_term != nullptr) *max_term = 1.0;
    return 1.0;
  }
  const double log_abs_z = std::log(std::fabs(z));
  const bool alternating = z < 0.0;
  double sum = 0.0;
  double largest = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < options.max_terms; ++k) {
    const double kd = static_cast<double>(k);
    const double magnitude = std::exp(kd * log_abs_z - log_gamma(m * kd + 1.0));
    if (!std::isfinite(magnitude)) {
      break;
    }
    sum += (alternating && (k % 2 == 1)) ? -magnitude : magnitude;
    largest = std::fmax(largest, magnitude);
    const double ratio = magnitude / previous;
    // Terms are log-concave in k, so once they decrease the tail is bounded geometrically.
    if (k > 0 && ratio < 1.0 && magnitude <= options.tolerance * (1.0 - ratio)) {
      if (max_term != nullptr) *max_term = largest;
      return sum;
    }
    previous = magnitude;
  }
  throw NonConvergenceError("Mittag-Leffler series for m=" + std::to_string(m) + ", z=" + std::to_string(z) +
                            " did not converge within " + std::to_string(options.max_terms) + " terms");
}

double mittag_leffler_negative_integral(double m, double x, const MittagLefflerOptions& options) {
  const double phi = std::numbers::pi * m;
  const double sin_phi = std::sin(phi);
  const double cos_phi = std::cos(phi);
  const double inv_m = 1.0 / m;

  auto kernel = [=](double v) {
    const double decay = std::exp(-std::pow(x * v, inv_m));
    return decay / (v * v + 2.0 * v * cos_phi + 1.0);
  };

  // exp(-46) ~ 1e-20; the remaining tail is negligible against the prefactor.
  const double upper = std::pow(46.0, m) / x;

  // Breakpoints around the near-pole of the kernel at v = -cos(m pi) (only for m > 1/2).
  std::array<double, 5> cuts{};
  std::size_t n_cuts = 0;
  cuts[n_cuts++] = 0.0;
  if (m > 0.5) {
    const double centre = -cos_phi;
    const double width = sin_phi;
    for (double b : {centre - 4.0 * width, centre, centre + 4.0 * width}) {
      if (b > cuts[n_cuts - 1] && b < upper) cuts[n_cuts++] = b;
    }
  }
  cuts[n_cuts++] = upper;

  // Tanh-sinh copes with the v^(1/m - 1) derivative singularity of the kernel at v = 0.
  // The integrand is positive and the integral is O(1), so a relative target on each piece
  // bounds the absolute error of the sum.
  const double target = std::fmax(options.tolerance, kQuadratureTolerance);
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < n_cuts; ++i) {
    double error = 0.0;
    total += integrator.integrate(kernel, cuts[i], cuts[i + 1], 1e-13, &error);
    total_error += error;
  }
  const double prefactor = sin_phi / phi;
  if (prefactor * total_error > target) {
    throw NonConvergenceError("Mittag-Leffler quadrature for m=" + short_number(m) + ", z=-" + short_number(x) +
                              " has error estimate " + short_number(prefactor * total_error) + " above " +
                              short_number(target));
  }
  return prefactor * total;
}

}  // namespace detail

double mittag_leffler(FractionalOrder order, double z, const MittagLefflerOptions& options) {
  const double m = order.value();
  if (!std::isfinite(z)) {
    throw DomainError("Mittag-Leffler argument must be finite");
  }
  if (order.is_integer()) {
    return std::exp(z);
  }
  if (z >= 0.0) {
    return detail::mittag_leffler_series(m, z, options);
  }
  const double x = -z;
  if (std::pow(x, 1.0 / m) <= kSeriesReach) {
    double largest = 0.0;
    const double value = detail::mittag_leffler_series(m, z, options, &largest);
    // Accept the series only if rounding in the partial sums stays below ~1e-11.
    if (largest * 16.0 * std::numeric_limits<double>::epsilon() <= 1e-11) {
      return value;
    }
  }
  return detail::mittag_leffler_negative_integral(m, x, options);
}

}  // namespace fracdyn
