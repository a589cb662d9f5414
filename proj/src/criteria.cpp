#include "ddlab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddlab {
namespace {

constexpr std::size_t kMaxListed = 64;

bool has_interior(const DomainSet& target) { return target.has_interior(); }

}  // namespace

std::string_view to_string(ConditionStatus status) {
  switch (status) {
    case ConditionStatus::holds: return "holds";
    case ConditionStatus::fails: return "fails";
    case ConditionStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(Conclusion conclusion) {
  switch (conclusion) {
    case Conclusion::compact_by_T3: return "compact_by_T3";
    case Conclusion::compact_by_T5: return "compact_by_T5";
    case Conclusion::compact_by_T6: return "compact_by_T6";
    case Conclusion::compact_by_T8: return "compact_by_T8";
    case Conclusion::compact_by_T9: return "compact_by_T9";
    case Conclusion::not_compact_by_L7: return "not_compact_by_L7";
    case Conclusion::not_endo_by_T10: return "not_endo_by_T10";
    case Conclusion::unknown: return "unknown";
  }
  return "unknown";
}

bool is_compact(Conclusion c) {
  return c == Conclusion::compact_by_T3 || c == Conclusion::compact_by_T5 || c == Conclusion::compact_by_T6 ||
         c == Conclusion::compact_by_T8 || c == Conclusion::compact_by_T9;
}

const ConditionVerdict* DiagnosisReport::find(std::string_view id) const {
  const auto it = std::find_if(verdicts.begin(), verdicts.end(), [&](const auto& v) { return v.id == id; });
  return it == verdicts.end() ? nullptr : &*it;
}

InteriorCheck check_interior_mapping(const MapBetween& phi, double margin, std::size_t k_samples) {
  InteriorCheck out;
  const auto pts = phi.source().sample(k_samples);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double v = std::abs(phi.phi()(pts[j]));
    if (j == 0 || v > out.worst_value * (1.0 + 1e-12)) {
      out.worst_value = v;
      out.worst_point = pts[j];
    } else {
      out.worst_value = std::max(out.worst_value, v);
    }
  }
  out.status = has_interior(phi.target()) && out.worst_value <= 1.0 - margin ? ConditionStatus::holds
                                                                           : ConditionStatus::fails;
  return out;
}

DerivativeBoundCheck check_derivative_bound(const MapBetween& phi, std::size_t k_samples) {
  DerivativeBoundCheck out;
  out.bracket = sup_norm(phi.derivative(), phi.source(), k_samples);
  out.strict = out.bracket.upper < 1.0 ? ConditionStatus::holds : ConditionStatus::fails;
  out.weak = out.bracket.lower <= 1.0 + 1e-9 ? ConditionStatus::holds : ConditionStatus::fails;
  return out;
}

MixedCoverCheck check_mixed_cover(const MapBetween& phi, double margin, std::size_t k_samples) {
  MixedCoverCheck out;
  const bool interior = has_interior(phi.target());
  out.margin = std::numeric_limits<double>::infinity();
  for (const auto& z : phi.source().sample(k_samples)) {
    const double slope_slack = 1.0 - margin - std::abs(phi.derivative()(z));
    const double inside_slack = interior ? 1.0 - margin - std::abs(phi.phi()(z)) : -1.0;
    const double slack = std::max(slope_slack, inside_slack);
    out.margin = std::min(out.margin, slack);
    if (!(slack > 0.0)) {
      ++out.uncovered_count;
      if (out.uncovered.size() < kMaxListed) out.uncovered.push_back(z);
    }
  }
  out.status = out.uncovered_count == 0 ? ConditionStatus::holds : ConditionStatus::fails;
  return out;
}

NecessityCheck check_boundary_necessity(const MapBetween& phi, bool strict, std::size_t k_samples) {
  NecessityCheck out;
  const auto& target = phi.target();
  if (target.kind() == DomainKind::interval_01) return out;
  out.applicable = true;
  out.margin = 1.0;
  std::vector<Violation> found;
  std::size_t primary = 0;
  for (const auto& z : phi.source().sample(k_samples)) {
    if (!(target.distance_to_boundary(phi.phi()(z)) < target.boundary_margin())) continue;
    ++out.scanned;
    const double slope = std::abs(phi.derivative()(z));
    out.margin = std::min(out.margin, strict ? (1.0 - 1e-9) - slope : (1.0 + 1e-9) - slope);
    const bool violated = strict ? slope >= 1.0 - 1e-9 : slope > 1.0 + 1e-9;
    if (!violated) continue;
    if (!found.empty() && slope > found[primary].derivative_modulus * (1.0 + 1e-12)) primary = found.size();
    found.push_back({z, slope});
  }
  if (!found.empty()) {
    out.violations.push_back(found[primary]);
    for (std::size_t i = 0; i < found.size(); ++i) {
      if (i != primary) out.violations.push_back(found[i]);
    }
  }
  return out;
}

DiagnosisReport classify(const MapBetween& phi, const WeightSequence& w, const ClassifyConfig& config) {
  DiagnosisReport report;
  const auto kind = phi.target().kind();
  const std::size_t k = config.k_samples;

  report.analyticity = analyticity_index(phi.phi(), phi.source(), config.analyticity_k_max, k);
  const bool analytic = report.analyticity.finite;

  // T3: interior mapping.
  const auto interior = check_interior_mapping(phi, config.margin, k);
  report.verdicts.push_back({"T3", interior.status, {interior.worst_point},
                             1.0 - config.margin - interior.worst_value,
                             phi.target().has_interior() ? "" : "target has empty plane interior"});

  // T5 / T4 / T9: derivative bounds.
  const auto bound = check_derivative_bound(phi, k);
  report.derivative_sup = bound.bracket;
  report.verdicts.push_back({"T5", bound.strict, {bound.bracket.argmax}, 1.0 - bound.bracket.upper,
                             analytic ? "" : "map not analytic on the sampled window"});

  const std::size_t ratio_n = std::min(config.ratio_n_max, w.length() - 2);
  report.ratio_verdict = ratio_profile(w, ratio_n).verdict;
  ConditionVerdict t4{"T4", ConditionStatus::fails, {bound.bracket.argmax}, 1.0 + 1e-9 - bound.bracket.lower,
                      "homomorphism only; never a compactness conclusion"};
  if (bound.weak == ConditionStatus::holds) {
    if (bound.strict == ConditionStatus::holds || report.ratio_verdict == TrendVerdict::bounded_trend) {
      t4.status = ConditionStatus::holds;
      t4.witnesses.clear();
    } else {
      t4.status = ConditionStatus::inconclusive;
      t4.note += "; n^2 M_n / M_{n+1} trend is " + std::string(to_string(report.ratio_verdict));
    }
  }
  report.verdicts.push_back(t4);

  // T6 (and its disc form T8): mixed cover.
  const auto cover = check_mixed_cover(phi, config.margin, k);
  ConditionVerdict t6{"T6", cover.status, cover.uncovered, cover.margin, ""};
  if (cover.status == ConditionStatus::holds) t6.witnesses.clear();
  report.verdicts.push_back(t6);
  if (kind == DomainKind::closed_unit_disc) {
    auto t8 = t6;
    t8.id = "T8";
    report.verdicts.push_back(t8);
  }
  if (kind == DomainKind::unit_circle) {
    ConditionVerdict t9{"T9", bound.strict, {}, 1.0 - bound.bracket.upper, "circle: ||phi'|| < 1"};
    if (bound.strict == ConditionStatus::fails) t9.witnesses.push_back(bound.bracket.argmax);
    report.verdicts.push_back(t9);
  }
  if (interior.status == ConditionStatus::holds) report.verdicts.front().witnesses.clear();
  if (bound.strict == ConditionStatus::holds) report.verdicts[1].witnesses.clear();

  // Necessity: L7 (strict) and T10 (weak).
  bool strict_violation = false;
  bool weak_violation = false;
  if (kind != DomainKind::interval_01) {
    for (bool strict : {true, false}) {
      const auto nec = check_boundary_necessity(phi, strict, k);
      ConditionVerdict v{strict ? "L7" : "T10", ConditionStatus::holds, {}, nec.margin,
                         "scanned " + std::to_string(nec.scanned) + " boundary preimages"};
      if (!nec.violations.empty()) {
        v.status = ConditionStatus::fails;
        for (std::size_t i = 0; i < std::min(nec.violations.size(), kMaxListed); ++i) {
          v.witnesses.push_back(nec.violations[i].point);
        }
        (strict ? strict_violation : weak_violation) = true;
      }
      report.verdicts.push_back(v);
    }
  }

  auto holds = [&](std::string_view id) {
    const auto* v = report.find(id);
    return v != nullptr && v->status == ConditionStatus::holds;
  };

  if (strict_violation) {
    report.conclusion = Conclusion::not_compact_by_L7;
  } else if (weak_violation) {
    report.conclusion = Conclusion::not_endo_by_T10;
  } else if (kind == DomainKind::closed_unit_disc) {
    if (holds("T3")) report.conclusion = Conclusion::compact_by_T3;
    else if (analytic && holds("T5")) report.conclusion = Conclusion::compact_by_T5;
    else if (analytic && holds("T8")) report.conclusion = Conclusion::compact_by_T8;
  } else if (kind == DomainKind::unit_circle) {
    if (analytic && holds("T9")) report.conclusion = Conclusion::compact_by_T9;
    else if (analytic && holds("T6")) report.conclusion = Conclusion::compact_by_T6;
  } else {
    if (analytic && holds("T5")) report.conclusion = Conclusion::compact_by_T5;
    else if (analytic && holds("T6")) report.conclusion = Conclusion::compact_by_T6;
  }
  return report;
}

}  // namespace ddlab
