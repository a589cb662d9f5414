#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ddlab {

/// ln(n!) by direct summation of ln k; prefix sums cached up to 10^4.
double log_factorial(std::size_t n);
double log_binomial(std::size_t n, std::size_t k);

struct FactorialPower {
  double gamma;
};
struct Tabulated {};
struct CustomForm {
  std::string description;
};
using WeightGenerator = std::variant<FactorialPower, Tabulated, CustomForm>;

/// Weight sequence M_0..M_N stored as natural logs. M_0 = 1 is enforced.
class WeightSequence {
 public:
  /// M_n = (n!)^gamma for n < length.
  static WeightSequence factorial_power(double gamma, std::size_t length);
  static WeightSequence tabulated(std::vector<double> log_values);
  static WeightSequence custom(std::string description,
                               const std::function<double(std::size_t)>& log_value,
                               std::size_t length);

  std::span<const double> log_values() const { return log_values_; }
  double log_value(std::size_t n) const { return log_values_.at(n); }
  std::size_t length() const { return log_values_.size(); }
  const WeightGenerator& generator() const { return generator_; }

 private:
  WeightSequence(std::vector<double> log_values, WeightGenerator generator);

  std::vector<double> log_values_;
  WeightGenerator generator_;
};

struct MarginEntry {
  std::size_t n;
  std::size_t m;
  double margin;  // ln M_{n+m} - ln M_n - ln M_m - ln C(n+m, n)
};

struct AdmissibilityReport {
  bool pass = true;
  std::optional<std::pair<std::size_t, std::size_t>> first_failure;
  double min_margin = 0.0;
  std::pair<std::size_t, std::size_t> min_margin_at{0, 0};
  std::vector<MarginEntry> margins;
};

inline constexpr double kAdmissibilitySlack = 1e-9;

/// Checks M_{n+m} >= C(n+m,n) M_n M_m for all n + m <= n_max. Pairs are
/// visited by increasing n + m, then increasing n.
AdmissibilityReport validate_admissibility(const WeightSequence& w, std::size_t n_max);

enum class TrendVerdict {
  non_analytic_trend,
  not_non_analytic,
  bounded_trend,
  divergent_trend,
  inconclusive,
};

std::string_view to_string(TrendVerdict verdict);

/// A finite sequence indexed from `first_index`, with a heuristic verdict.
struct ProfileSequence {
  std::size_t first_index = 1;
  std::vector<double> values;
  TrendVerdict verdict = TrendVerdict::inconclusive;
};

/// a_n = (n!/M_n)^{1/n}, n = 1..n_max. Verdict non_analytic_trend iff the last
/// quartile is strictly decreasing and a_{n_max} < 0.5.
ProfileSequence non_analyticity_profile(const WeightSequence& w, std::size_t n_max);

/// r_n = n^2 M_n / M_{n+1}, n = 1..n_max.
ProfileSequence ratio_profile(const WeightSequence& w, std::size_t n_max);

struct OrderEstimate {
  double estimate = 0.0;      // max over last quartile of ln n! / ln M_n
  double raw_estimate = 0.0;  // max over last quartile of n ln n / ln M_n
  std::size_t first_index = 1;
  std::vector<double> per_n;      // ln n! / ln M_n
  std::vector<double> raw_per_n;  // n ln n / ln M_n
};

/// Order of g(z) = sum z^n / M_n from its coefficients.
OrderEstimate entire_order_estimate(const WeightSequence& w, std::size_t n_max);

/// Start index (into a sequence of `size` entries) of its final quartile;
/// the window always holds at least two entries.
std::size_t final_quartile_start(std::size_t size);

}  // namespace ddlab
