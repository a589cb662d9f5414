#include "ddlab/calculus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "ddlab/weights.hpp"

namespace ddlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t next_pow2(std::size_t n) { return std::bit_ceil(std::max<std::size_t>(n, 1)); }

// Product truncated to exponents <= max_degree (taylor only).
std::vector<Complex> truncated_product(std::span<const Complex> a, std::span<const Complex> b,
                                       std::size_t max_degree) {
  const std::size_t len = std::min(a.size() + b.size() - 1, max_degree + 1);
  std::vector<Complex> out(len, Complex{});
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    if (a[i] == Complex{}) continue;
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

std::vector<std::vector<double>> pascal(std::size_t n) {
  std::vector<std::vector<double>> c(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    c[i].assign(i + 1, 1.0);
    for (std::size_t j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

}  // namespace

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::interval_01: return "interval";
    case DomainKind::closed_unit_disc: return "disc";
    case DomainKind::unit_circle: return "circle";
  }
  return "interval";
}

std::string_view to_string(Basis basis) {
  return basis == Basis::taylor_at_0 ? "taylor" : "laurent";
}

// ---------------------------------------------------------------------------
// DomainSet

DomainSet::DomainSet(DomainKind kind, double boundary_margin)
    : kind_(kind), boundary_margin_(boundary_margin) {
  if (!(boundary_margin > 0.0)) {
    throw LabError(ErrorKind::invalid_argument, "boundary_margin must be positive");
  }
}

bool DomainSet::in_interior(Complex z, double margin) const {
  return has_interior() && std::abs(z) < 1.0 - margin;
}

bool DomainSet::contains(Complex z, double tol) const {
  switch (kind_) {
    case DomainKind::interval_01:
      return std::abs(z.imag()) <= tol && z.real() >= -tol && z.real() <= 1.0 + tol;
    case DomainKind::closed_unit_disc: return std::abs(z) <= 1.0 + tol;
    case DomainKind::unit_circle: return std::abs(std::abs(z) - 1.0) <= tol;
  }
  return false;
}

double DomainSet::distance_to_boundary(Complex z) const {
  if (kind_ == DomainKind::interval_01) {
    const double x = std::clamp(z.real(), 0.0, 1.0);
    return std::abs(z - Complex(x, 0.0));
  }
  return std::abs(std::abs(z) - 1.0);
}

std::vector<Complex> DomainSet::sup_grid(std::size_t k) const {
  if (k < 2) throw LabError(ErrorKind::invalid_argument, "sup_grid needs at least two points");
  std::vector<Complex> pts(k);
  if (kind_ == DomainKind::interval_01) {
    for (std::size_t j = 0; j < k; ++j) {
      const double t = std::numbers::pi * static_cast<double>(j) / static_cast<double>(k - 1);
      pts[j] = Complex(0.5 * (1.0 - std::cos(t)), 0.0);
    }
    pts.front() = Complex(0.0, 0.0);
    pts.back() = Complex(1.0, 0.0);
    return pts;
  }
  return circle_points(k);
}

double DomainSet::sup_grid_gap(std::size_t k) const {
  if (kind_ == DomainKind::interval_01) {
    const auto pts = sup_grid(k);
    double gap = 0.0;
    for (std::size_t j = 1; j < k; ++j) gap = std::max(gap, pts[j].real() - pts[j - 1].real());
    return gap;
  }
  return kTwoPi / static_cast<double>(k);
}

std::vector<Complex> DomainSet::sample(std::size_t k) const {
  if (kind_ != DomainKind::closed_unit_disc) return sup_grid(std::max<std::size_t>(k, 2));
  if (k < 4) throw LabError(ErrorKind::invalid_argument, "disc sample needs at least four points");
  const std::size_t on_boundary = (k + 1) / 2;
  std::vector<Complex> pts = circle_points(on_boundary);
  pts.reserve(k);
  std::size_t rest = k - on_boundary;
  pts.emplace_back(0.0, 0.0);
  --rest;
  if (rest == 0) return pts;
  const std::size_t rings = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(rest / 4.0)));
  const std::size_t per_ring = rest / rings;
  for (std::size_t r = 1; r <= rings; ++r) {
    const double radius = static_cast<double>(r) / static_cast<double>(rings + 1);
    const std::size_t count = r == rings ? rest - per_ring * (rings - 1) : per_ring;
    for (std::size_t j = 0; j < count; ++j) {
      pts.push_back(std::polar(radius, kTwoPi * static_cast<double>(j) / static_cast<double>(count)));
    }
  }
  return pts;
}

// ---------------------------------------------------------------------------
// SeriesFunction

SeriesFunction::SeriesFunction(Basis basis, int min_exponent, std::vector<Complex> coefficients,
                               DomainSet domain)
    : basis_(basis), min_exponent_(min_exponent), coefficients_(std::move(coefficients)), domain_(domain) {
  if (coefficients_.empty()) coefficients_.push_back(Complex{});
  if (basis_ == Basis::laurent && domain_.kind() != DomainKind::unit_circle) {
    throw LabError(ErrorKind::basis_mismatch, "laurent series are only defined on the unit circle");
  }
  if (basis_ == Basis::taylor_at_0 && min_exponent_ != 0) {
    throw LabError(ErrorKind::invalid_argument, "taylor series start at exponent 0");
  }
}

SeriesFunction SeriesFunction::taylor(std::vector<Complex> coefficients, DomainSet domain) {
  return SeriesFunction(Basis::taylor_at_0, 0, std::move(coefficients), domain);
}

SeriesFunction SeriesFunction::laurent(int min_exponent, std::vector<Complex> coefficients,
                                       DomainSet domain) {
  return SeriesFunction(Basis::laurent, min_exponent, std::move(coefficients), domain);
}

SeriesFunction SeriesFunction::zero(Basis basis, DomainSet domain) {
  return SeriesFunction(basis, 0, {Complex{}}, domain);
}

Complex SeriesFunction::coefficient(int k) const {
  const int idx = k - min_exponent_;
  if (idx < 0 || idx >= static_cast<int>(coefficients_.size())) return Complex{};
  return coefficients_[static_cast<std::size_t>(idx)];
}

Complex SeriesFunction::evaluate(Complex z) const {
  const int lo = min_exponent_;
  const int hi = max_exponent();
  Complex pos{};
  const int start = std::max(lo, 0);
  for (int k = hi; k >= start; --k) pos = pos * z + coefficient(k);
  for (int k = 0; k < start; ++k) pos *= z;
  if (lo >= 0) return pos;
  const Complex w = 1.0 / z;
  Complex neg{};
  for (int k = lo; k <= -1; ++k) neg = neg * w + coefficient(k);
  return pos + neg * w;
}

SeriesFunction SeriesFunction::with_domain(DomainSet domain) const {
  return SeriesFunction(basis_, min_exponent_, coefficients_, domain);
}

SeriesFunction SeriesFunction::scaled(Complex factor) const {
  auto c = coefficients_;
  for (auto& v : c) v *= factor;
  return SeriesFunction(basis_, min_exponent_, std::move(c), domain_);
}

SeriesFunction multiply(const SeriesFunction& a, const SeriesFunction& b) {
  if (a.domain() != b.domain()) {
    throw LabError(ErrorKind::invalid_argument, "multiply: series live on different domains");
  }
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  std::vector<Complex> out(ca.size() + cb.size() - 1, Complex{});
  for (std::size_t i = 0; i < ca.size(); ++i) {
    for (std::size_t j = 0; j < cb.size(); ++j) out[i + j] += ca[i] * cb[j];
  }
  if (a.basis() == Basis::taylor_at_0 && b.basis() == Basis::taylor_at_0) {
    return SeriesFunction::taylor(std::move(out), a.domain());
  }
  return SeriesFunction::laurent(a.min_exponent() + b.min_exponent(), std::move(out), a.domain());
}

namespace {

SeriesFunction differentiate_once(const SeriesFunction& f) {
  if (f.basis() == Basis::taylor_at_0) {
    const int d = f.degree();
    if (d < 1) return SeriesFunction::zero(Basis::taylor_at_0, f.domain());
    std::vector<Complex> out(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) out[static_cast<std::size_t>(k)] = f.coefficient(k + 1) * static_cast<double>(k + 1);
    return SeriesFunction::taylor(std::move(out), f.domain());
  }
  const int lo = f.min_exponent() < 0 ? f.min_exponent() - 1 : 0;
  const int hi = std::max(f.max_exponent() - 1, lo);
  std::vector<Complex> out(static_cast<std::size_t>(hi - lo + 1));
  for (int k = lo; k <= hi; ++k) out[static_cast<std::size_t>(k - lo)] = f.coefficient(k + 1) * static_cast<double>(k + 1);
  return SeriesFunction::laurent(lo, std::move(out), f.domain());
}

}  // namespace

SeriesFunction differentiate(const SeriesFunction& f, std::size_t n) {
  if (n == 0) return f;
  if (f.basis() == Basis::taylor_at_0 && static_cast<int>(n) > f.degree()) {
    return SeriesFunction::zero(Basis::taylor_at_0, f.domain());
  }
  SeriesFunction out = differentiate_once(f);
  for (std::size_t i = 1; i < n; ++i) out = differentiate_once(out);
  return out;
}

// ---------------------------------------------------------------------------
// Sup norms

SupBracket sup_bracket_from_samples(const DomainSet& x, std::size_t k_samples,
                                    std::span<const Complex> grid, std::span<const Complex> values,
                                    std::span<const Complex> first, std::span<const Complex> second) {
  SupBracket out;
  double lip = 0.0;
  double curv = 0.0;
  const bool along_circle = x.kind() != DomainKind::interval_01;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double v = std::abs(values[j]);
    // Ties within 1e-12 keep the earliest grid point as the witness.
    if (j == 0 || v > out.lower * (1.0 + 1e-12)) {
      out.lower = v;
      out.argmax = grid[j];
    } else {
      out.lower = std::max(out.lower, v);
    }
    lip = std::max(lip, std::abs(first[j]));
    if (along_circle) {
      // d^2/dtheta^2 g(e^{i theta}) = -(z g' + z^2 g'')
      const Complex z = grid[j];
      curv = std::max(curv, std::abs(z * first[j] + z * z * second[j]));
    } else {
      curv = std::max(curv, std::abs(second[j]));
    }
  }
  const double h = x.sup_grid_gap(k_samples);
  out.upper = out.lower + std::min(lip * h, curv * h * h / 8.0);
  return out;
}

SupBracket sup_norm(const SeriesFunction& f, const DomainSet& x, std::size_t k_samples) {
  if (k_samples < 64) throw LabError(ErrorKind::invalid_argument, "sup_norm needs k_samples >= 64");
  const auto grid = x.sup_grid(k_samples);
  const auto d1 = differentiate(f, 1);
  const auto d2 = differentiate(f, 2);
  std::vector<Complex> v(grid.size()), v1(grid.size()), v2(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    v[j] = f(grid[j]);
    v1[j] = d1(grid[j]);
    v2[j] = d2(grid[j]);
  }
  return sup_bracket_from_samples(x, k_samples, grid, v, v1, v2);
}

// ---------------------------------------------------------------------------
// Composition

SeriesFunction compose_series(const SeriesFunction& f, const SeriesFunction& phi, std::size_t out_degree) {
  if (f.basis() == Basis::taylor_at_0 && phi.basis() == Basis::taylor_at_0) {
    const auto pc = phi.coefficients();
    std::vector<Complex> acc{f.coefficient(f.degree())};
    for (int k = f.degree() - 1; k >= 0; --k) {
      acc = truncated_product(acc, pc, out_degree);
      acc[0] += f.coefficient(k);
    }
    return SeriesFunction::taylor(std::move(acc), phi.domain());
  }
  if (phi.domain().kind() != DomainKind::unit_circle) {
    throw LabError(ErrorKind::basis_mismatch,
                   "compose_series: a laurent outer function needs a circle self-map as inner function");
  }
  const std::size_t m = next_pow2(std::max<std::size_t>(8 * (out_degree + 1), 64));
  const auto pts = circle_points(m);
  std::vector<Complex> values(m);
  for (std::size_t j = 0; j < m; ++j) values[j] = f(phi(pts[j]));
  return fourier_coefficients(values, out_degree);
}

// ---------------------------------------------------------------------------
// Faa di Bruno

std::vector<std::vector<Complex>> bell_polynomial_table(std::span<const Complex> x, std::size_t order) {
  if (x.size() < order + 1) {
    throw LabError(ErrorKind::insufficient_derivatives,
                   "bell_polynomial_table: need inner derivatives up to order " + std::to_string(order));
  }
  const auto binom = pascal(order);
  std::vector<std::vector<Complex>> b(order + 1);
  for (std::size_t n = 0; n <= order; ++n) b[n].assign(n + 1, Complex{});
  b[0][0] = 1.0;
  for (std::size_t n = 1; n <= order; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      Complex s{};
      for (std::size_t i = 1; i + k <= n + 1; ++i) {
        const auto& prev = b[n - i];
        if (k - 1 < prev.size()) s += binom[n - 1][i - 1] * x[i] * prev[k - 1];
      }
      b[n][k] = s;
    }
  }
  return b;
}

std::vector<Complex> faa_di_bruno_all(std::span<const Complex> f_derivs,
                                      std::span<const Complex> phi_derivs, std::size_t n) {
  if (f_derivs.size() < n + 1 || phi_derivs.size() < n + 1) {
    throw LabError(ErrorKind::insufficient_derivatives,
                   "faa_di_bruno: derivative arrays must cover orders 0.." + std::to_string(n));
  }
  const auto bell = bell_polynomial_table(phi_derivs, n);
  std::vector<Complex> out(n + 1);
  out[0] = f_derivs[0];
  for (std::size_t m = 1; m <= n; ++m) {
    Complex s{};
    for (std::size_t k = 1; k <= m; ++k) s += f_derivs[k] * bell[m][k];
    out[m] = s;
  }
  return out;
}

Complex faa_di_bruno(std::span<const Complex> f_derivs, std::span<const Complex> phi_derivs, std::size_t n) {
  if (n == 0) throw LabError(ErrorKind::invalid_argument, "faa_di_bruno: order must be >= 1");
  return faa_di_bruno_all(f_derivs, phi_derivs, n)[n];
}

// ---------------------------------------------------------------------------
// Analyticity index

AnalyticityIndex analyticity_index(const SeriesFunction& phi, const DomainSet& x, std::size_t k_max,
                                   std::size_t k_samples) {
  if (k_max < 1 || k_max > 170) {
    throw LabError(ErrorKind::invalid_argument, "analyticity_index: need 1 <= k_max <= 170");
  }
  AnalyticityIndex out;
  auto d = phi;
  for (std::size_t k = 1; k <= k_max; ++k) {
    d = differentiate(d, 1);
    const double sup = sup_norm(d, x, k_samples).upper;
    const double b = sup > 0.0 ? std::exp((std::log(sup) - log_factorial(k)) / static_cast<double>(k)) : 0.0;
    out.values.push_back(b);
    out.finite = out.finite && std::isfinite(b);
    out.max = std::max(out.max, b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fourier

std::vector<Complex> circle_points(std::size_t count) {
  std::vector<Complex> pts(count);
  for (std::size_t j = 0; j < count; ++j) {
    pts[j] = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(count));
  }
  pts[0] = Complex(1.0, 0.0);
  return pts;
}

std::vector<Complex> fourier_transform(std::span<const Complex> values) {
  const std::size_t m = values.size();
  if (m < 2 || !std::has_single_bit(m)) {
    throw LabError(ErrorKind::invalid_argument, "fourier_transform: sample count must be a power of two");
  }
  std::vector<Complex> in(values.begin(), values.end());
  std::vector<Complex> raw;
  Eigen::FFT<double> fft;
  fft.fwd(raw, in);
  std::vector<Complex> out(m);
  const long half = static_cast<long>(m / 2);
  for (long k = -half + 1; k <= half; ++k) {
    const auto idx = static_cast<std::size_t>((k + static_cast<long>(m)) % static_cast<long>(m));
    out[static_cast<std::size_t>(k + half - 1)] = raw[idx] / static_cast<double>(m);
  }
  return out;
}

SeriesFunction fourier_coefficients(std::span<const Complex> values, std::size_t d, double tail_tol) {
  const std::size_t m = values.size();
  if (m < 4 * d + 4) {
    throw LabError(ErrorKind::invalid_argument, "fourier_coefficients: need 2^m >= 4d + 4 samples");
  }
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw LabError(ErrorKind::invalid_argument, "fourier_coefficients: non-finite sample");
    }
  }
  const auto all = fourier_transform(values);
  const long half = static_cast<long>(m / 2);
  const long dd = static_cast<long>(d);
  std::vector<Complex> coeffs(2 * d + 1);
  double tail = 0.0;
  for (long k = -half + 1; k <= half; ++k) {
    const Complex c = all[static_cast<std::size_t>(k + half - 1)];
    if (k >= -dd && k <= dd) {
      coeffs[static_cast<std::size_t>(k + dd)] = c;
    } else {
      tail = std::max(tail, std::abs(c));
    }
  }
  if (!(tail < tail_tol)) {
    throw LabError(ErrorKind::tail_too_large,
                   "fourier_coefficients: discarded coefficient of modulus " + std::to_string(tail) +
                       " exceeds tail tolerance; increase the degree");
  }
  return SeriesFunction::laurent(-static_cast<int>(d), std::move(coeffs), DomainSet(DomainKind::unit_circle));
}

// ---------------------------------------------------------------------------
// MapBetween

MapBetween::MapBetween(SeriesFunction phi, DomainSet target, double containment_tol, std::size_t k_samples)
    : phi_(std::move(phi)), derivative_(differentiate(phi_, 1)), target_(target) {
  for (const auto& z : phi_.domain().sample(k_samples)) {
    const Complex w = phi_(z);
    if (!target_.contains(w, containment_tol)) {
      throw LabError(ErrorKind::containment,
                     "map image leaves the target set at z = (" + std::to_string(z.real()) + ", " +
                         std::to_string(z.imag()) + ")");
    }
  }
}

}  // namespace ddlab
