#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ddlab/calculus.hpp"
#include "ddlab/weights.hpp"

namespace ddlab {

enum class ConditionStatus { holds, fails, inconclusive };

enum class Conclusion {
  compact_by_T3,
  compact_by_T5,
  compact_by_T6,
  compact_by_T8,
  compact_by_T9,
  not_compact_by_L7,
  not_endo_by_T10,
  unknown,
};

std::string_view to_string(ConditionStatus status);
std::string_view to_string(Conclusion conclusion);
bool is_compact(Conclusion conclusion);

/// One evaluated condition. `margin` is the numerical slack (negative when
/// the inequality is violated on the grid).
struct ConditionVerdict {
  std::string id;  // T3, T4, T5, T6, T8, T9, T10, L7
  ConditionStatus status = ConditionStatus::inconclusive;
  std::vector<Complex> witnesses;
  double margin = 0.0;
  std::string note;
};

struct InteriorCheck {
  ConditionStatus status = ConditionStatus::fails;
  Complex worst_point{};
  double worst_value = 0.0;
};

/// phi(X) inside int(Y) with margin: max |phi| <= 1 - margin on a disc target.
/// Targets without interior (interval, circle) always fail.
InteriorCheck check_interior_mapping(const MapBetween& phi, double margin, std::size_t k_samples);

struct DerivativeBoundCheck {
  SupBracket bracket;
  ConditionStatus strict = ConditionStatus::fails;  // upper < 1
  ConditionStatus weak = ConditionStatus::fails;    // lower <= 1 + 1e-9
};

DerivativeBoundCheck check_derivative_bound(const MapBetween& phi, std::size_t k_samples);

struct MixedCoverCheck {
  ConditionStatus status = ConditionStatus::fails;
  std::size_t uncovered_count = 0;
  std::vector<Complex> uncovered;  // first 64, in sample order
  double margin = 0.0;
};

/// Every sample has |phi'(z)| < 1 - margin or |phi(z)| < 1 - margin (the
/// second branch only for targets with interior).
MixedCoverCheck check_mixed_cover(const MapBetween& phi, double margin, std::size_t k_samples);

struct Violation {
  Complex point;
  double derivative_modulus;
};

struct NecessityCheck {
  bool applicable = false;  // disc and circle only
  std::size_t scanned = 0;
  /// Largest |phi'| first (ties keep sample order), then the rest in sample order.
  std::vector<Violation> violations;
  double margin = 0.0;
};

/// Scans samples whose image is within boundary_margin of the boundary.
/// strict flags |phi'| >= 1 - 1e-9, weak flags |phi'| > 1 + 1e-9.
NecessityCheck check_boundary_necessity(const MapBetween& phi, bool strict, std::size_t k_samples);

struct ClassifyConfig {
  double margin = 1e-3;
  std::size_t k_samples = 4096;
  std::size_t analyticity_k_max = 20;
  std::size_t ratio_n_max = 50;
};

struct DiagnosisReport {
  std::vector<ConditionVerdict> verdicts;
  Conclusion conclusion = Conclusion::unknown;
  SupBracket derivative_sup;
  AnalyticityIndex analyticity;
  TrendVerdict ratio_verdict = TrendVerdict::inconclusive;

  const ConditionVerdict* find(std::string_view id) const;
};

/// Runs every check that applies to the domain and names the conclusion.
/// A strict necessity violation wins; otherwise the strongest sufficient
/// condition that holds (disc: T3, T5, T8; circle: T9, T6; interval: T5, T6).
DiagnosisReport classify(const MapBetween& phi, const WeightSequence& w, const ClassifyConfig& config = {});

}  // namespace ddlab
