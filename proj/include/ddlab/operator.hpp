#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ddlab/calculus.hpp"
#include "ddlab/weights.hpp"

namespace ddlab {

inline constexpr double kSpillTol = 1e-6;
inline constexpr std::size_t kMaxDenseSize = 512;

/// Finite section of Tf = f o phi. Taylor basis: z^0..z^{N-1}. Laurent basis:
/// z^{-d}..z^{d} with N = 2d + 1. Column j holds the coefficients of phi^j
/// (j counted from `min_exponent`).
struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  Basis basis = Basis::taylor_at_0;
  int min_exponent = 0;
  bool weighted = false;
  /// Max modulus of the coefficients each column drops outside the window.
  std::vector<double> spill;
  /// ln ||basis_i||_D when weighted.
  std::vector<double> basis_log_norms;

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
  int exponent(std::size_t index) const { return min_exponent + static_cast<int>(index); }
  double max_spill() const;
};

/// Taylor basis needs N >= 4; laurent basis needs N odd and the map on the
/// unit circle. Negative powers of circle maps come from sampling 1/phi.
OperatorMatrix assemble_matrix(const MapBetween& phi, Basis basis, std::size_t n, double spill_tol = kSpillTol);

/// Eigenvalues sorted by descending modulus, ties by descending real, then
/// descending imaginary part. Each one passes a residual check ||(m - lambda) v|| < 1e-8 ||m||_2.
std::vector<Complex> eigenvalues(const OperatorMatrix& m);
std::vector<Complex> eigenvalues(const Eigen::MatrixXcd& m);

enum class CompactnessVerdict { compact_consistent, non_compact_consistent, inconclusive };
std::string_view to_string(CompactnessVerdict verdict);

struct SingularValueProfile {
  std::vector<double> values;  // descending
  CompactnessVerdict verdict = CompactnessVerdict::inconclusive;
};

/// Heuristic: compact-consistent if some sigma_k < 1e-6 sigma_0 with k < N/2;
/// non-compact-consistent if sigma_{N/2} / sigma_0 > 0.1.
SingularValueProfile singular_value_profile(const OperatorMatrix& m);

/// Diagonal similarity W = D T D^{-1}, D = diag(||basis_i||_D), so W acts
/// between unit vectors of the weighted basis. Eigenvalues are unchanged.
OperatorMatrix weighted_normalize(const OperatorMatrix& m, const WeightSequence& w, const DomainSet& x);

struct FixedPointResult {
  Complex x0{};
  Complex derivative_at_fixed_point{};
  std::size_t iterations = 0;
  double residual = 0.0;
  /// Every distinct root found from the seeds, in seed order.
  std::vector<Complex> roots;
  std::optional<std::string> warning;
};

/// 16 seeds spread over the domain.
std::vector<Complex> default_seeds(const DomainSet& x);

/// Fixed-point iteration from each seed (plain, then damped by 1/2), Newton
/// polish on phi(z) - z. Returns the root with the smallest residual; several
/// distinct roots set `warning`, since a compact endomorphism has exactly one.
FixedPointResult find_fixed_point(const MapBetween& phi, const std::vector<Complex>& seeds = {});

struct SpectrumMatch {
  std::size_t computed_index;
  Complex computed;
  Complex predicted;
  double distance;
};

struct SpectrumReport {
  FixedPointResult fixed_point;
  Basis basis = Basis::taylor_at_0;
  std::size_t size = 0;
  double max_spill = 0.0;
  double tol = 0.0;
  /// 1, then phi'(x0)^n for n >= 1 while the power is >= tol (and at least
  /// n = 1..k), then 0.
  std::vector<Complex> predicted;
  std::vector<Complex> computed;
  std::vector<SpectrumMatch> matches;    // computed eigenvalues with modulus > tol
  std::size_t matched_to_zero = 0;       // computed eigenvalues with modulus <= tol
  std::vector<std::size_t> unmatched;    // computed indices above tol with no partner within tol
  double max_matched_distance = 0.0;
  std::vector<double> top_k_distances;   // distances for the k largest computed eigenvalues
  double top_k_max_distance = 0.0;
};

struct SpectrumOptions {
  std::size_t k = 5;
  double tol = 1e-8;
  double spill_tol = kSpillTol;
  /// The caller asserts the endomorphism has been ruled compact (or forces it).
  bool compactness_established = false;
};

/// Compares the truncation spectrum with {phi'(x0)^n} U {0, 1}. Laurent basis
/// for circle maps given as laurent series, taylor otherwise; for laurent N
/// must be odd.
SpectrumReport spectrum_check(const MapBetween& phi, const WeightSequence& w, std::size_t n,
                              const SpectrumOptions& options);

}  // namespace ddlab
