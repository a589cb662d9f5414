#include "ddlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "ddlab/families.hpp"

namespace ddlab {
namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw LabError(ErrorKind::config_parse, "config field '" + path + "': " + what);
}

// Walks one JSON object, remembering which keys were consumed so that typos
// surface as errors instead of silently falling back to defaults.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) field_error(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json* take(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void get(const std::string& key, double& out) {
    if (const auto* v = take(key)) {
      if (!v->is_number()) field_error(child(key), "expected a number");
      out = v->get<double>();
    }
  }
  void get(const std::string& key, std::size_t& out) {
    if (const auto* v = take(key)) {
      if (!v->is_number_integer() || v->get<long long>() < 0) field_error(child(key), "expected a non-negative integer");
      out = v->get<std::size_t>();
    }
  }
  void get(const std::string& key, int& out) {
    if (const auto* v = take(key)) {
      if (!v->is_number_integer()) field_error(child(key), "expected an integer");
      out = v->get<int>();
    }
  }
  void get(const std::string& key, bool& out) {
    if (const auto* v = take(key)) {
      if (!v->is_boolean()) field_error(child(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void get(const std::string& key, std::string& out) {
    if (const auto* v = take(key)) {
      if (!v->is_string()) field_error(child(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  void get(const std::string& key, Complex& out) {
    if (const auto* v = take(key)) out = complex_from(*v, child(key));
  }
  void get(const std::string& key, std::vector<double>& out) {
    if (const auto* v = take(key)) {
      if (!v->is_array()) field_error(child(key), "expected an array of numbers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) field_error(child(key), "expected an array of numbers");
        out.push_back(e.get<double>());
      }
    }
  }
  void get(const std::string& key, std::vector<std::size_t>& out) {
    if (const auto* v = take(key)) {
      if (!v->is_array()) field_error(child(key), "expected an array of integers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number_integer() || e.get<long long>() < 0) field_error(child(key), "expected an array of integers");
        out.push_back(e.get<std::size_t>());
      }
    }
  }
  void get(const std::string& key, std::vector<Complex>& out) {
    if (const auto* v = take(key)) {
      if (!v->is_array()) field_error(child(key), "expected an array of [re, im] pairs");
      out.clear();
      for (const auto& e : *v) out.push_back(complex_from(e, child(key)));
    }
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) field_error(child(key), "unknown field");
    }
  }

 private:
  static Complex complex_from(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      return {v[0].get<double>(), v[1].get<double>()};
    }
    field_error(path, "expected a number or an [re, im] pair");
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json complex_array(const std::vector<Complex>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(complex_json(z));
  return a;
}

Experiment parse_experiment(const std::string& name) {
  if (name == "classify") return Experiment::classify;
  if (name == "spectrum") return Experiment::spectrum;
  if (name == "norm_profile" || name == "norm") return Experiment::norm_profile;
  if (name == "sweep") return Experiment::sweep;
  field_error("experiment", "expected classify, spectrum, norm_profile or sweep");
}

void require_domain(const Scenario& s, DomainKind kind, const char* family) {
  if (parse_domain_kind(s.domain) != kind) {
    throw LabError(ErrorKind::config_parse, std::string("config field 'map.family': ") + family +
                                                " is defined on the " + std::string(to_string(kind)) +
                                                " only");
  }
}

}  // namespace

std::string_view to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::classify: return "classify";
    case Experiment::spectrum: return "spectrum";
    case Experiment::norm_profile: return "norm_profile";
    case Experiment::sweep: return "sweep";
  }
  return "classify";
}

DomainKind parse_domain_kind(std::string_view name) {
  if (name == "interval") return DomainKind::interval_01;
  if (name == "disc") return DomainKind::closed_unit_disc;
  if (name == "circle") return DomainKind::unit_circle;
  throw LabError(ErrorKind::config_parse, "config field 'domain': expected interval, disc or circle");
}

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw LabError(ErrorKind::config_parse,
                   "config syntax error at line " + std::to_string(line) + ", column " + std::to_string(col));
  }

  Scenario s;
  Fields top(root, "");
  if (!top.has("domain")) field_error("domain", "required");
  if (!top.has("map")) field_error("map", "required");
  top.get("domain", s.domain);
  parse_domain_kind(s.domain);

  if (const auto* w = top.take("weight")) {
    Fields f(*w, "weight");
    f.get("kind", s.weight.kind);
    f.get("gamma", s.weight.gamma);
    f.get("length", s.weight.length);
    f.get("log_values", s.weight.log_values);
    f.finish();
    if (s.weight.kind != "factorial_power" && s.weight.kind != "tabulated") {
      field_error("weight.kind", "expected factorial_power or tabulated");
    }
  }

  {
    Fields f(*top.take("map"), "map");
    f.get("family", s.map.family);
    f.get("alpha", s.map.alpha);
    f.get("beta", s.map.beta);
    f.get("power", s.map.power);
    f.get("scale", s.map.scale);
    f.get("c", s.map.c);
    f.get("C", s.map.gadget_c);
    f.get("A", s.map.gadget_a);
    f.get("degree", s.map.degree);
    f.get("basis", s.map.basis);
    f.get("min_exponent", s.map.min_exponent);
    f.get("coefficients", s.map.coefficients);
    f.finish();
    static const std::set<std::string> families{"affine",      "monomial",      "wermer_circle",
                                                "counterexample_interval", "gadget_disc", "gadget_circle",
                                                "explicit"};
    if (!families.count(s.map.family)) field_error("map.family", "unknown family '" + s.map.family + "'");
    if (s.map.basis != "taylor" && s.map.basis != "laurent") field_error("map.basis", "expected taylor or laurent");
  }

  std::string experiment = std::string(to_string(s.experiment));
  top.get("experiment", experiment);
  s.experiment = parse_experiment(experiment);

  if (const auto* k = top.take("knobs")) {
    Fields f(*k, "knobs");
    f.get("N", s.knobs.N);
    f.get("n_max", s.knobs.n_max);
    f.get("samples", s.knobs.samples);
    f.get("margin", s.knobs.margin);
    f.get("boundary_margin", s.knobs.boundary_margin);
    f.get("containment_tol", s.knobs.containment_tol);
    f.get("spectrum_k", s.knobs.spectrum_k);
    f.get("spectrum_tol", s.knobs.spectrum_tol);
    f.get("spill_tol", s.knobs.spill_tol);
    f.get("out_degree", s.knobs.out_degree);
    f.get("derivative_engine", s.knobs.derivative_engine);
    f.get("analyticity_k_max", s.knobs.analyticity_k_max);
    f.get("convergence_sizes", s.knobs.convergence_sizes);
    f.get("basis_growth_max", s.knobs.basis_growth_max);
    f.get("dump_matrix", s.knobs.dump_matrix);
    f.finish();
    if (s.knobs.derivative_engine != "series" && s.knobs.derivative_engine != "faa_di_bruno") {
      field_error("knobs.derivative_engine", "expected series or faa_di_bruno");
    }
  }

  if (const auto* st = top.take("stress")) {
    Fields f(*st, "stress");
    f.get("kind", s.stress.kind);
    f.get("degree", s.stress.degree);
    f.get("coefficients", s.stress.coefficients);
    f.finish();
    if (s.stress.kind != "exp" && s.stress.kind != "explicit" && s.stress.kind != "random_polynomial") {
      field_error("stress.kind", "expected exp, explicit or random_polynomial");
    }
  }

  if (const auto* sw = top.take("sweep")) {
    Fields f(*sw, "sweep");
    f.get("parameter", s.sweep.parameter);
    f.get("values", s.sweep.values);
    f.finish();
  }

  if (const auto* out = top.take("output")) {
    Fields f(*out, "output");
    f.get("dir", s.output_dir);
    f.finish();
  }
  if (const auto* seed = top.take("seed")) {
    if (!seed->is_number_unsigned()) field_error("seed", "expected a non-negative integer");
    s.seed = seed->get<std::uint64_t>();
  }
  top.get("force", s.force);
  top.finish();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LabError(ErrorKind::io, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

nlohmann::json to_json(const Scenario& s) {
  json j;
  j["domain"] = s.domain;
  j["weight"] = {{"kind", s.weight.kind},
                 {"gamma", s.weight.gamma},
                 {"length", s.weight.length},
                 {"log_values", s.weight.log_values}};
  j["map"] = {{"family", s.map.family},
              {"alpha", complex_json(s.map.alpha)},
              {"beta", complex_json(s.map.beta)},
              {"power", s.map.power},
              {"scale", complex_json(s.map.scale)},
              {"c", s.map.c},
              {"C", s.map.gadget_c},
              {"A", s.map.gadget_a},
              {"degree", s.map.degree},
              {"basis", s.map.basis},
              {"min_exponent", s.map.min_exponent},
              {"coefficients", complex_array(s.map.coefficients)}};
  j["experiment"] = std::string(to_string(s.experiment));
  j["knobs"] = {{"N", s.knobs.N},
                {"n_max", s.knobs.n_max},
                {"samples", s.knobs.samples},
                {"margin", s.knobs.margin},
                {"boundary_margin", s.knobs.boundary_margin},
                {"containment_tol", s.knobs.containment_tol},
                {"spectrum_k", s.knobs.spectrum_k},
                {"spectrum_tol", s.knobs.spectrum_tol},
                {"spill_tol", s.knobs.spill_tol},
                {"out_degree", s.knobs.out_degree},
                {"derivative_engine", s.knobs.derivative_engine},
                {"analyticity_k_max", s.knobs.analyticity_k_max},
                {"convergence_sizes", s.knobs.convergence_sizes},
                {"basis_growth_max", s.knobs.basis_growth_max},
                {"dump_matrix", s.knobs.dump_matrix}};
  j["stress"] = {{"kind", s.stress.kind},
                 {"degree", s.stress.degree},
                 {"coefficients", complex_array(s.stress.coefficients)}};
  j["sweep"] = {{"parameter", s.sweep.parameter}, {"values", s.sweep.values}};
  j["output"] = {{"dir", s.output_dir}};
  j["seed"] = s.seed;
  j["force"] = s.force;
  return j;
}

std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2); }

DomainSet make_domain(const Scenario& s) { return DomainSet(parse_domain_kind(s.domain), s.knobs.boundary_margin); }

WeightSequence make_weight(const Scenario& s) {
  if (s.weight.kind == "tabulated") return WeightSequence::tabulated(s.weight.log_values);
  return WeightSequence::factorial_power(s.weight.gamma, s.weight.length);
}

SeriesFunction make_map_series(const Scenario& s) {
  const auto domain = make_domain(s);
  const auto& m = s.map;
  if (m.family == "affine") return families::affine(m.alpha, m.beta, domain);
  if (m.family == "monomial") return families::monomial(m.power, m.scale, domain);
  if (m.family == "wermer_circle") {
    require_domain(s, DomainKind::unit_circle, "wermer_circle");
    return families::wermer_circle(m.c, m.degree);
  }
  if (m.family == "gadget_circle") {
    require_domain(s, DomainKind::unit_circle, "gadget_circle");
    if (!(m.gadget_a > 0.0)) field_error("map.A", "must be positive");
    return families::gadget_circle(m.gadget_a, m.degree);
  }
  if (m.family == "counterexample_interval") {
    require_domain(s, DomainKind::interval_01, "counterexample_interval");
    return families::counterexample_interval();
  }
  if (m.family == "gadget_disc") {
    require_domain(s, DomainKind::closed_unit_disc, "gadget_disc");
    if (!(m.gadget_c > 0.0)) field_error("map.C", "must be positive");
    return families::gadget_disc(m.gadget_c);
  }
  if (m.coefficients.empty()) field_error("map.coefficients", "explicit maps need coefficients");
  if (m.basis == "laurent") return SeriesFunction::laurent(m.min_exponent, m.coefficients, domain);
  return SeriesFunction::taylor(m.coefficients, domain);
}

MapBetween make_map(const Scenario& s) {
  auto series = make_map_series(s);
  const auto target = make_domain(s);
  return MapBetween(std::move(series), target, s.knobs.containment_tol);
}

SeriesFunction make_stress(const Scenario& s, const DomainSet& domain) {
  if (s.stress.kind == "exp") return families::truncated_exp(s.stress.degree, domain);
  if (s.stress.kind == "explicit") {
    if (s.stress.coefficients.empty()) field_error("stress.coefficients", "explicit stress needs coefficients");
    return SeriesFunction::taylor(s.stress.coefficients, domain);
  }
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Complex> c(s.stress.degree + 1);
  for (auto& v : c) {
    const double re = unit(rng);
    v = Complex(re, unit(rng));
  }
  return SeriesFunction::taylor(std::move(c), domain);
}

std::size_t effective_size(const Scenario& s) {
  const bool laurent = make_map_series(s).basis() == Basis::laurent;
  if (s.knobs.N != 0) return s.knobs.N;
  return laurent ? 65 : 32;
}

Scenario with_parameter(const Scenario& s, std::string_view parameter, double value) {
  Scenario out = s;
  if (parameter == "c") out.map.c = value;
  else if (parameter == "alpha") out.map.alpha = value;
  else if (parameter == "beta") out.map.beta = value;
  else if (parameter == "C") out.map.gadget_c = value;
  else if (parameter == "A") out.map.gadget_a = value;
  else if (parameter == "power") {
    if (!(value >= 0.0) || value != std::floor(value)) field_error("sweep.values", "power must be a whole number");
    out.map.power = static_cast<std::size_t>(value);
  } else {
    field_error("sweep.parameter", "expected c, alpha, beta, C, A or power");
  }
  return out;
}

}  // namespace ddlab
