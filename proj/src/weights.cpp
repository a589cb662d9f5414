#include "ddlab/weights.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ddlab/error.hpp"

namespace ddlab {
namespace {

constexpr std::size_t kLogFactorialCache = 10000;

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kLogFactorialCache + 1, 0.0);
    double acc = 0.0;
    for (std::size_t k = 2; k <= kLogFactorialCache; ++k) {
      acc += std::log(static_cast<double>(k));
      t[k] = acc;
    }
    return t;
  }();
  return table;
}

void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw LabError(kind, what);
}

// Strict monotonicity with a relative dead band so that rounding noise on a
// constant sequence does not count as movement.
bool strictly_decreasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1] * (1.0 - 1e-12))) return false;
  }
  return true;
}

bool strictly_increasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1] * (1.0 + 1e-12))) return false;
  }
  return true;
}

}  // namespace

double log_factorial(std::size_t n) {
  if (n <= kLogFactorialCache) return log_factorial_table()[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(std::size_t n, std::size_t k) {
  if (k > n) throw LabError(ErrorKind::invalid_argument, "log_binomial: k > n");
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

std::size_t final_quartile_start(std::size_t size) {
  const std::size_t window = std::max<std::size_t>(2, (size + 3) / 4);
  return size > window ? size - window : 0;
}

WeightSequence::WeightSequence(std::vector<double> log_values, WeightGenerator generator)
    : log_values_(std::move(log_values)), generator_(std::move(generator)) {
  require(log_values_.size() >= 2, ErrorKind::invalid_argument,
          "weight sequence needs at least M_0 and M_1");
  require(log_values_[0] == 0.0, ErrorKind::invalid_argument, "weight sequence must have M_0 = 1");
  for (std::size_t n = 0; n < log_values_.size(); ++n) {
    require(std::isfinite(log_values_[n]), ErrorKind::invalid_argument,
            "weight sequence has a non-finite entry at n = " + std::to_string(n));
  }
}

WeightSequence WeightSequence::factorial_power(double gamma, std::size_t length) {
  require(std::isfinite(gamma), ErrorKind::invalid_argument, "factorial_power: gamma must be finite");
  std::vector<double> logs(length);
  for (std::size_t n = 0; n < length; ++n) logs[n] = gamma * log_factorial(n);
  return WeightSequence(std::move(logs), FactorialPower{gamma});
}

WeightSequence WeightSequence::tabulated(std::vector<double> log_values) {
  return WeightSequence(std::move(log_values), Tabulated{});
}

WeightSequence WeightSequence::custom(std::string description,
                                      const std::function<double(std::size_t)>& log_value,
                                      std::size_t length) {
  std::vector<double> logs(length);
  for (std::size_t n = 0; n < length; ++n) logs[n] = log_value(n);
  return WeightSequence(std::move(logs), CustomForm{std::move(description)});
}

AdmissibilityReport validate_admissibility(const WeightSequence& w, std::size_t n_max) {
  require(2 * n_max <= w.length() - 1, ErrorKind::length_insufficient,
          "validate_admissibility: need 2*n_max <= length-1 (n_max = " + std::to_string(n_max) +
              ", length = " + std::to_string(w.length()) + ")");
  AdmissibilityReport report;
  bool first = true;
  for (std::size_t total = 0; total <= n_max; ++total) {
    for (std::size_t n = 0; n <= total; ++n) {
      const std::size_t m = total - n;
      const double margin = w.log_value(total) - w.log_value(n) - w.log_value(m) -
                            log_binomial(total, n);
      report.margins.push_back({n, m, margin});
      if (first || margin < report.min_margin) {
        report.min_margin = margin;
        report.min_margin_at = {n, m};
        first = false;
      }
      if (margin < -kAdmissibilitySlack && !report.first_failure) {
        report.pass = false;
        report.first_failure = std::make_pair(n, m);
      }
    }
  }
  return report;
}

std::string_view to_string(TrendVerdict verdict) {
  switch (verdict) {
    case TrendVerdict::non_analytic_trend: return "non-analytic trend";
    case TrendVerdict::not_non_analytic: return "not non-analytic";
    case TrendVerdict::bounded_trend: return "bounded trend";
    case TrendVerdict::divergent_trend: return "divergent trend";
    case TrendVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ProfileSequence non_analyticity_profile(const WeightSequence& w, std::size_t n_max) {
  require(n_max >= 1 && n_max <= w.length() - 1, ErrorKind::length_insufficient,
          "non_analyticity_profile: need 1 <= n_max <= length-1");
  ProfileSequence out;
  out.first_index = 1;
  out.values.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    out.values.push_back(std::exp((log_factorial(n) - w.log_value(n)) / static_cast<double>(n)));
  }
  const auto tail = std::span<const double>(out.values).subspan(final_quartile_start(out.values.size()));
  out.verdict = strictly_decreasing(tail) && out.values.back() < 0.5 ? TrendVerdict::non_analytic_trend
                                                                     : TrendVerdict::not_non_analytic;
  return out;
}

ProfileSequence ratio_profile(const WeightSequence& w, std::size_t n_max) {
  require(n_max >= 1 && n_max + 1 <= w.length() - 1, ErrorKind::length_insufficient,
          "ratio_profile: need n_max + 1 <= length-1");
  ProfileSequence out;
  out.first_index = 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    out.values.push_back(
        std::exp(2.0 * std::log(static_cast<double>(n)) + w.log_value(n) - w.log_value(n + 1)));
  }
  const std::span<const double> all(out.values);
  const auto tail = all.subspan(final_quartile_start(all.size()));
  const std::size_t head_len = std::max<std::size_t>(1, all.size() / 4);
  const double head_max = *std::max_element(all.begin(), all.begin() + head_len);
  const auto [tail_min, tail_max] = std::minmax_element(tail.begin(), tail.end());

  // Growth factor 1.5 over the first-quartile maximum: sqrt(n) growth gives ~2.
  if (strictly_increasing(tail) && all.back() > 1.5 * head_max) {
    out.verdict = TrendVerdict::divergent_trend;
  } else if (*tail_max > 0.0 && (*tail_max - *tail_min) < 0.1 * *tail_max) {
    out.verdict = TrendVerdict::bounded_trend;
  } else {
    out.verdict = TrendVerdict::inconclusive;
  }
  return out;
}

OrderEstimate entire_order_estimate(const WeightSequence& w, std::size_t n_max) {
  require(n_max >= 20 && n_max <= w.length() - 1, ErrorKind::length_insufficient,
          "entire_order_estimate: need 20 <= n_max <= length-1");
  OrderEstimate out;
  out.first_index = 1;
  const std::size_t start = final_quartile_start(n_max) + 1;
  for (std::size_t n = start; n <= n_max; ++n) {
    if (!(w.log_value(n) > 0.0)) {
      throw LabError(ErrorKind::degenerate,
                     "entire_order_estimate: M_n <= 1 at n = " + std::to_string(n));
    }
  }
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double lm = w.log_value(n);
    const double nd = static_cast<double>(n);
    out.per_n.push_back(lm > 0.0 ? log_factorial(n) / lm : 0.0);
    out.raw_per_n.push_back(lm > 0.0 ? nd * std::log(nd) / lm : 0.0);
  }
  out.estimate = *std::max_element(out.per_n.begin() + (start - 1), out.per_n.end());
  out.raw_estimate = *std::max_element(out.raw_per_n.begin() + (start - 1), out.raw_per_n.end());
  return out;
}

}  // namespace ddlab
