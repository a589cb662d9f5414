#include "ddlab/families.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

namespace ddlab::families {

namespace {
constexpr double kNoiseFloor = 1e-16;
}  // namespace

SeriesFunction affine(Complex alpha, Complex beta, DomainSet domain) {
  return SeriesFunction::taylor({beta, alpha}, domain);
}

SeriesFunction monomial(std::size_t power, Complex scale, DomainSet domain) {
  std::vector<Complex> c(power + 1, Complex{});
  c[power] = scale;
  return SeriesFunction::taylor(std::move(c), domain);
}

SeriesFunction counterexample_interval() {
  return SeriesFunction::taylor({0.5, 0.0, 0.5}, DomainSet(DomainKind::interval_01));
}

SeriesFunction gadget_disc(double c) {
  return affine(1.0 / (1.0 + c), c / (1.0 + c), DomainSet(DomainKind::closed_unit_disc));
}

Complex wermer_value(double c, Complex z) { return std::exp(c * (z * z - 1.0) / z); }

SeriesFunction wermer_circle(double c, std::size_t degree) {
  const std::size_t m = std::bit_ceil(std::max<std::size_t>(16 * (degree + 1), 64));
  const auto pts = circle_points(m);
  std::vector<Complex> values(m);
  for (std::size_t j = 0; j < m; ++j) values[j] = wermer_value(c, pts[j]);
  const auto raw = fourier_coefficients(values, degree);

  // Coefficients at the rounding floor of the transform are noise, and
  // high-order derivatives amplify them by |k|^n.
  std::vector<Complex> coeffs(raw.coefficients().begin(), raw.coefficients().end());
  double peak = 0.0;
  for (const auto& v : coeffs) peak = std::max(peak, std::abs(v));
  for (auto& v : coeffs) {
    if (std::abs(v) < kNoiseFloor * peak) v = 0.0;
  }
  return SeriesFunction::laurent(raw.min_exponent(), std::move(coeffs), raw.domain());
}

SeriesFunction gadget_circle(double a, std::size_t degree) { return wermer_circle(1.0 / (2.0 * a), degree); }

SeriesFunction truncated_exp(std::size_t degree, DomainSet domain) {
  std::vector<Complex> c(degree + 1);
  double term = 1.0;
  for (std::size_t k = 0; k <= degree; ++k) {
    if (k > 0) term /= static_cast<double>(k);
    c[k] = term;
  }
  return SeriesFunction::taylor(std::move(c), domain);
}

}  // namespace ddlab::families
