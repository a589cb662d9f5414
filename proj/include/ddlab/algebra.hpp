#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ddlab/calculus.hpp"
#include "ddlab/weights.hpp"

namespace ddlab {

enum class NormVerdict { convergent_trend, divergent_trend, inconclusive };
enum class DerivativeEngine { series, faa_di_bruno };

std::string_view to_string(NormVerdict verdict);
std::string_view to_string(DerivativeEngine engine);

/// Partial sums of ||f||_D = sum_n ||f^(n)||_inf / M_n.
struct DNormProfile {
  std::vector<double> terms;         // t_n, n = 0..n_max, from upper sup brackets
  std::vector<double> partial_sums;  // running sums of terms
  NormVerdict verdict = NormVerdict::inconclusive;
  DerivativeEngine engine = DerivativeEngine::series;
  std::size_t out_degree = 0;  // composition truncation used, 0 if none

  double norm() const { return partial_sums.back(); }
};

/// Verdict from the term array alone:
///   convergent_trend if some t_n (n >= 1) is exactly zero, or t_{n+1}/t_n < 0.9
///     across the final quartile;
///   divergent_trend if partial sums grow by more than 5% per step across the
///     final quartile;
///   inconclusive otherwise.
NormVerdict norm_verdict(std::span<const double> terms);

DNormProfile profile_from_terms(std::vector<double> terms);

DNormProfile d_norm_profile(const SeriesFunction& f, const WeightSequence& w, const DomainSet& x,
                            std::size_t n_max, std::size_t k_samples = 4096);

/// Profile of f o phi on phi's source. `out_degree` = 0 picks the full
/// polynomial degree (taylor) or 64 (circle maps). A truncation that drops a
/// coefficient of modulus >= kTailTol is a tail_too_large error.
DNormProfile composed_norm_profile(const SeriesFunction& f, const MapBetween& phi, const WeightSequence& w,
                                   std::size_t n_max, std::size_t out_degree = 0,
                                   DerivativeEngine engine = DerivativeEngine::series,
                                   std::size_t k_samples = 4096);

/// ln ||z^n||_D on any of the three model sets (where ||z^j||_inf = 1):
/// sum_k |n (n-1) ... (n-k+1)| / M_k. Negative n (circle only) is an infinite
/// series and must converge inside the weight table.
double log_monomial_norm(int n, const WeightSequence& w);

/// Exploratory: ||phi^j||_D / ||z^j||_D for j = 0..j_max, i.e. how much the
/// composition operator stretches each basis element. Unbounded growth in j
/// witnesses an unbounded operator.
std::vector<double> composition_basis_growth(const MapBetween& phi, const WeightSequence& w, std::size_t j_max,
                                             std::size_t k_samples = 1024);

}  // namespace ddlab
