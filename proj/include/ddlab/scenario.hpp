#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ddlab/calculus.hpp"
#include "ddlab/weights.hpp"

namespace ddlab {

enum class Experiment { classify, spectrum, norm_profile, sweep };

std::string_view to_string(Experiment experiment);

struct WeightSpec {
  std::string kind = "factorial_power";  // factorial_power | tabulated
  double gamma = 1.5;
  std::size_t length = 401;
  std::vector<double> log_values;

  bool operator==(const WeightSpec&) const = default;
};

/// Families: affine, monomial, wermer_circle, counterexample_interval,
/// gadget_disc, gadget_circle, explicit.
struct MapSpec {
  std::string family = "affine";
  Complex alpha{0.5, 0.0};
  Complex beta{0.25, 0.0};
  std::size_t power = 2;
  Complex scale{1.0, 0.0};
  double c = 0.2;
  double gadget_c = 1.0;  // "C" in config
  double gadget_a = 2.0;  // "A" in config
  std::size_t degree = 32;  // laurent truncation of circle families
  std::string basis = "taylor";
  int min_exponent = 0;
  std::vector<Complex> coefficients;

  bool operator==(const MapSpec&) const = default;
};

/// Test function fed through the composition for norm profiles.
struct StressSpec {
  std::string kind = "exp";  // exp | explicit | random_polynomial
  std::size_t degree = 40;
  std::vector<Complex> coefficients;

  bool operator==(const StressSpec&) const = default;
};

struct Knobs {
  std::size_t N = 0;  // 0: 32 for taylor, 65 for laurent
  std::size_t n_max = 25;
  std::size_t samples = 4096;
  double margin = 1e-3;
  double boundary_margin = 1e-6;
  double containment_tol = 1e-8;
  std::size_t spectrum_k = 5;
  double spectrum_tol = 1e-8;
  double spill_tol = 1e-6;
  std::size_t out_degree = 0;
  std::string derivative_engine = "series";
  std::size_t analyticity_k_max = 20;
  std::vector<std::size_t> convergence_sizes;  // empty: N/2, N, 2N (odd sizes for laurent)
  std::size_t basis_growth_max = 40;
  bool dump_matrix = false;

  bool operator==(const Knobs&) const = default;
};

struct SweepSpec {
  std::string parameter = "c";  // c | alpha | beta | C | A | power
  std::vector<double> values;

  bool operator==(const SweepSpec&) const = default;
};

struct Scenario {
  std::string domain = "disc";  // interval | disc | circle
  WeightSpec weight;
  MapSpec map;
  Experiment experiment = Experiment::classify;
  Knobs knobs;
  StressSpec stress;
  SweepSpec sweep;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  bool force = false;

  bool operator==(const Scenario&) const = default;
};

/// Parses a JSON scenario. Unknown keys and type mismatches are config_parse
/// errors naming the field; syntax errors name line and column.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json to_json(const Scenario& scenario);
std::string serialize_scenario(const Scenario& scenario);

DomainKind parse_domain_kind(std::string_view name);
DomainSet make_domain(const Scenario& scenario);
WeightSequence make_weight(const Scenario& scenario);
SeriesFunction make_map_series(const Scenario& scenario);
MapBetween make_map(const Scenario& scenario);
SeriesFunction make_stress(const Scenario& scenario, const DomainSet& domain);
/// Matrix size after applying the 0 = auto rule.
std::size_t effective_size(const Scenario& scenario);
/// Copy of the scenario with the sweep parameter set to `value`.
Scenario with_parameter(const Scenario& scenario, std::string_view parameter, double value);

}  // namespace ddlab
