#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "ddlab/error.hpp"

namespace ddlab {

enum class DomainKind { interval_01, closed_unit_disc, unit_circle };

std::string_view to_string(DomainKind kind);

/// One of the three model sets [0,1], the closed unit disc and the unit circle.
class DomainSet {
 public:
  explicit DomainSet(DomainKind kind, double boundary_margin = 1e-6);

  DomainKind kind() const { return kind_; }
  double boundary_margin() const { return boundary_margin_; }

  /// Plane interior. Only the disc has one.
  bool has_interior() const { return kind_ == DomainKind::closed_unit_disc; }
  bool in_interior(Complex z, double margin) const;
  bool contains(Complex z, double tol) const;
  /// Euclidean distance from z to the plane boundary of the set. For the
  /// interval and the circle every point of the set is a boundary point.
  double distance_to_boundary(Complex z) const;

  /// k deterministic points of the set. The disc grid puts half of the
  /// points on the unit circle (starting at angle 0) and spreads the rest
  /// over interior rings plus the centre.
  std::vector<Complex> sample(std::size_t k) const;

  /// Grid used for sup norms: Chebyshev-Lobatto points on [0,1], or k uniform
  /// angles on the unit circle (for the disc, by the maximum principle).
  std::vector<Complex> sup_grid(std::size_t k) const;
  /// Largest parameter gap of `sup_grid(k)` (x for the interval, angle otherwise).
  double sup_grid_gap(std::size_t k) const;

  bool operator==(const DomainSet&) const = default;

 private:
  DomainKind kind_;
  double boundary_margin_;
};

enum class Basis { taylor_at_0, laurent };

std::string_view to_string(Basis basis);

/// Truncated series sum_{k=lo}^{hi} c_k z^k. Taylor series have lo = 0;
/// Laurent series live on the unit circle only.
class SeriesFunction {
 public:
  static SeriesFunction taylor(std::vector<Complex> coefficients, DomainSet domain);
  static SeriesFunction laurent(int min_exponent, std::vector<Complex> coefficients, DomainSet domain);
  static SeriesFunction zero(Basis basis, DomainSet domain);

  Basis basis() const { return basis_; }
  const DomainSet& domain() const { return domain_; }
  int min_exponent() const { return min_exponent_; }
  int max_exponent() const { return min_exponent_ + static_cast<int>(coefficients_.size()) - 1; }
  /// Highest exponent for taylor series.
  int degree() const { return max_exponent(); }
  std::span<const Complex> coefficients() const { return coefficients_; }
  /// Coefficient of z^k; zero outside the stored range.
  Complex coefficient(int k) const;

  Complex evaluate(Complex z) const;
  Complex operator()(Complex z) const { return evaluate(z); }

  SeriesFunction with_domain(DomainSet domain) const;
  SeriesFunction scaled(Complex factor) const;

 private:
  SeriesFunction(Basis basis, int min_exponent, std::vector<Complex> coefficients, DomainSet domain);

  Basis basis_;
  int min_exponent_;
  std::vector<Complex> coefficients_;
  DomainSet domain_;
};

/// Product of two series in the same basis; Laurent ranges add.
SeriesFunction multiply(const SeriesFunction& a, const SeriesFunction& b);

/// n-th complex derivative. Over-differentiating a polynomial gives zero.
SeriesFunction differentiate(const SeriesFunction& f, std::size_t n);

struct SupBracket {
  double lower = 0.0;
  double upper = 0.0;
  Complex argmax{};
};

/// Bracket [lower, upper] for the sup of |f| over X from `k_samples` grid
/// points. lower is the sampled max. upper adds min(L h, L2 h^2 / 8), with
/// L, L2 the sampled maxima of the first and second derivative along the grid
/// curve and h the largest grid gap. Heuristic, not interval arithmetic.
SupBracket sup_norm(const SeriesFunction& f, const DomainSet& x, std::size_t k_samples);

/// Same bracket from precomputed values of g, g' and g'' on `x.sup_grid(k)`.
SupBracket sup_bracket_from_samples(const DomainSet& x, std::size_t k_samples,
                                    std::span<const Complex> grid,
                                    std::span<const Complex> values,
                                    std::span<const Complex> first,
                                    std::span<const Complex> second);

inline constexpr double kTailTol = 1e-10;

/// f o phi truncated to `out_degree`. taylor o taylor uses Horner composition
/// and is exact for polynomials. When phi lives on the unit circle the result
/// is the Laurent series of the sampled composition (degrees -out..out).
SeriesFunction compose_series(const SeriesFunction& f, const SeriesFunction& phi,
                              std::size_t out_degree);

/// Exponential partial Bell polynomials B_{n,k}(x_1, ..., x_{n-k+1}) for all
/// 0 <= k <= n <= order; `x[j]` holds x_j (x[0] is ignored).
std::vector<std::vector<Complex>> bell_polynomial_table(std::span<const Complex> x, std::size_t order);

/// (f o phi)^(n)(a) from f^(k)(phi(a)) and phi^(k)(a), k = 0..n, via
/// sum_k f^(k) B_{n,k}(phi', phi'', ...).
Complex faa_di_bruno(std::span<const Complex> f_derivs, std::span<const Complex> phi_derivs,
                     std::size_t n);

/// All derivatives (f o phi)^(m)(a), m = 0..n, sharing one Bell table.
std::vector<Complex> faa_di_bruno_all(std::span<const Complex> f_derivs,
                                      std::span<const Complex> phi_derivs, std::size_t n);

struct AnalyticityIndex {
  std::vector<double> values;  // b_k for k = 1..k_max
  double max = 0.0;
  bool finite = true;
};

/// b_k = (||phi^(k)||_inf / k!)^{1/k} using upper sup brackets.
AnalyticityIndex analyticity_index(const SeriesFunction& phi, const DomainSet& x, std::size_t k_max,
                                   std::size_t k_samples = 4096);

/// Uniform angles theta_j = 2 pi j / count on the circle, as points.
std::vector<Complex> circle_points(std::size_t count);

/// Raw DFT coefficients c_k = (1/M) sum_j v_j e^{-i k theta_j}, returned for
/// k = -M/2 + 1 .. M/2 in that order. M must be a power of two.
std::vector<Complex> fourier_transform(std::span<const Complex> values);

/// Laurent series of degree -d..d from samples at 2^m uniform angles. Throws
/// tail_too_large when a discarded coefficient reaches `tail_tol`.
SeriesFunction fourier_coefficients(std::span<const Complex> values, std::size_t d,
                                    double tail_tol = kTailTol);

/// A map phi: source -> target. Construction samples the source and checks
/// that every image lies within `containment_tol` of the target.
class MapBetween {
 public:
  MapBetween(SeriesFunction phi, DomainSet target, double containment_tol = 1e-8,
             std::size_t k_samples = 1024);

  const SeriesFunction& phi() const { return phi_; }
  const SeriesFunction& derivative() const { return derivative_; }
  const DomainSet& source() const { return phi_.domain(); }
  const DomainSet& target() const { return target_; }
  bool self_map() const { return phi_.domain() == target_; }

 private:
  SeriesFunction phi_;
  SeriesFunction derivative_;
  DomainSet target_;
};

inline MapBetween self_map(SeriesFunction phi, double containment_tol = 1e-8) {
  auto target = phi.domain();
  return MapBetween(std::move(phi), target, containment_tol);
}

}  // namespace ddlab
