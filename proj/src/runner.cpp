#include "ddlab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <optional>

#include <fmt/format.h>

#include "ddlab/algebra.hpp"
#include "ddlab/criteria.hpp"
#include "ddlab/operator.hpp"

namespace ddlab {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::size_t kDiagnosticWindow = 200;
constexpr std::size_t kRatioWindow = 50;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json cnum(Complex z) { return json::array({num(z.real()), num(z.imag())}); }

json seq(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string cell(double v) {
  if (!std::isfinite(v)) throw LabError(ErrorKind::precondition, "non-finite value in output table");
  return fmt::format("{:.17g}", v);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LabError(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) throw LabError(ErrorKind::io, "write failed for " + path.string());
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw LabError(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
}

ClassifyConfig classify_config(const Scenario& s, const WeightSequence& w) {
  ClassifyConfig c;
  c.margin = s.knobs.margin;
  c.k_samples = s.knobs.samples;
  c.analyticity_k_max = s.knobs.analyticity_k_max;
  c.ratio_n_max = std::min(kRatioWindow, w.length() - 2);
  return c;
}

json classification_json(const DiagnosisReport& d) {
  json conditions = json::array();
  for (const auto& v : d.verdicts) {
    json witnesses = json::array();
    for (const auto& z : v.witnesses) witnesses.push_back(cnum(z));
    conditions.push_back({{"id", v.id},
                          {"status", std::string(to_string(v.status))},
                          {"margin", num(v.margin)},
                          {"witnesses", witnesses},
                          {"note", v.note}});
  }
  return {{"conclusion", std::string(to_string(d.conclusion))},
          {"conditions", conditions},
          {"derivative_sup",
           {{"lower", num(d.derivative_sup.lower)},
            {"upper", num(d.derivative_sup.upper)},
            {"argmax", cnum(d.derivative_sup.argmax)}}},
          {"analyticity", {{"values", seq(d.analyticity.values)}, {"max", num(d.analyticity.max)},
                           {"finite", d.analyticity.finite}}},
          {"ratio_verdict", std::string(to_string(d.ratio_verdict))}};
}

std::string conditions_csv(const DiagnosisReport& d) {
  std::string out = "id,status,margin,witness_re,witness_im\n";
  for (const auto& v : d.verdicts) {
    const Complex w = v.witnesses.empty() ? Complex{} : v.witnesses.front();
    out += fmt::format("{},{},{},{},{}\n", v.id, to_string(v.status), cell(v.margin), cell(w.real()),
                       cell(w.imag()));
  }
  return out;
}

bool necessity_violated(const DiagnosisReport& d) {
  const auto* l7 = d.find("L7");
  return l7 != nullptr && l7->status == ConditionStatus::fails;
}

json spectrum_json(const SpectrumReport& r) {
  json predicted = json::array();
  for (const auto& z : r.predicted) predicted.push_back(cnum(z));
  json computed = json::array();
  for (const auto& z : r.computed) computed.push_back(cnum(z));
  json matches = json::array();
  for (const auto& m : r.matches) {
    matches.push_back({{"index", m.computed_index},
                       {"computed", cnum(m.computed)},
                       {"predicted", cnum(m.predicted)},
                       {"distance", num(m.distance)}});
  }
  const auto& fp = r.fixed_point;
  json fixed = {{"x0", cnum(fp.x0)},
                {"derivative", cnum(fp.derivative_at_fixed_point)},
                {"iterations", fp.iterations},
                {"residual", num(fp.residual)}};
  if (fp.warning) fixed["warning"] = *fp.warning;
  json top = json::array();
  for (std::size_t i = 0; i < r.top_k_distances.size(); ++i) {
    top.push_back({{"computed", cnum(r.computed[i])}, {"distance", num(r.top_k_distances[i])}});
  }
  return {{"fixed_point", fixed},
          {"basis", std::string(to_string(r.basis))},
          {"N", r.size},
          {"max_spill", num(r.max_spill)},
          {"tol", num(r.tol)},
          {"predicted", predicted},
          {"computed", computed},
          {"matches", matches},
          {"matched_to_zero", r.matched_to_zero},
          {"unmatched", r.unmatched},
          {"max_matched_distance", num(r.max_matched_distance)},
          {"top_k", top},
          {"top_k_max_distance", num(r.top_k_max_distance)}};
}

std::string spectrum_csv(const SpectrumReport& r) {
  std::string out = "index,computed_re,computed_im,predicted_re,predicted_im,distance\n";
  for (std::size_t i = 0; i < r.computed.size(); ++i) {
    const auto it = std::find_if(r.matches.begin(), r.matches.end(),
                                 [&](const SpectrumMatch& m) { return m.computed_index == i; });
    const Complex mu = r.computed[i];
    const Complex pred = it != r.matches.end() ? it->predicted : Complex{};
    const double dist = it != r.matches.end() ? it->distance : std::abs(mu);
    out += fmt::format("{},{},{},{},{},{}\n", i, cell(mu.real()), cell(mu.imag()), cell(pred.real()),
                       cell(pred.imag()), cell(dist));
  }
  return out;
}

std::vector<std::size_t> convergence_sizes(const Scenario& s, Basis basis, std::size_t n) {
  if (!s.knobs.convergence_sizes.empty()) return s.knobs.convergence_sizes;
  if (basis == Basis::laurent) {
    const std::size_t d = (n - 1) / 2;
    return {2 * (d / 2) + 1, n, 4 * d + 1};
  }
  return {n / 2, n, 2 * n};
}

SpectrumOptions spectrum_options(const Scenario& s) {
  SpectrumOptions o;
  o.k = s.knobs.spectrum_k;
  o.tol = s.knobs.spectrum_tol;
  o.spill_tol = s.knobs.spill_tol;
  o.compactness_established = true;
  return o;
}

std::string matrix_csv(const OperatorMatrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j) {
      const Complex z = m.entries(i, j);
      out += fmt::format("{}{},{}", j == 0 ? "" : ",", cell(z.real()), cell(z.imag()));
    }
    out += '\n';
  }
  return out;
}

json weight_diagnostics(const WeightSequence& w, std::size_t n_max) {
  json out;
  const std::size_t adm_n = std::min(n_max, (w.length() - 1) / 2);
  const auto adm = validate_admissibility(w, adm_n);
  out["admissibility"] = {{"n_max", adm_n},
                          {"pass", adm.pass},
                          {"min_margin", num(adm.min_margin)},
                          {"min_margin_at", {adm.min_margin_at.first, adm.min_margin_at.second}}};
  if (adm.first_failure) {
    out["admissibility"]["first_failure"] = {adm.first_failure->first, adm.first_failure->second};
  }
  const auto na = non_analyticity_profile(w, std::min(kDiagnosticWindow, w.length() - 1));
  out["non_analyticity"] = {{"first_index", na.first_index}, {"values", seq(na.values)},
                            {"verdict", std::string(to_string(na.verdict))}};
  const auto ratio = ratio_profile(w, std::min(kRatioWindow, w.length() - 2));
  out["ratio"] = {{"first_index", ratio.first_index}, {"values", seq(ratio.values)},
                  {"verdict", std::string(to_string(ratio.verdict))}};
  const std::size_t order_n = std::min(kDiagnosticWindow, w.length() - 1);
  try {
    const auto order = entire_order_estimate(w, order_n);
    out["entire_order"] = {{"n_max", order_n},
                           {"estimate", num(order.estimate)},
                           {"raw_estimate", num(order.raw_estimate)}};
  } catch (const LabError& e) {
    out["entire_order"] = {{"n_max", order_n}, {"error", e.what()}};
  }
  return out;
}

json profile_json(const DNormProfile& p) {
  return {{"terms", seq(p.terms)},
          {"partial_sums", seq(p.partial_sums)},
          {"verdict", std::string(to_string(p.verdict))},
          {"engine", std::string(to_string(p.engine))},
          {"out_degree", p.out_degree}};
}

std::string profile_csv(const DNormProfile& p) {
  std::string out = "n,term,partial_sum\n";
  for (std::size_t n = 0; n < p.terms.size(); ++n) {
    out += fmt::format("{},{},{}\n", n, cell(p.terms[n]), cell(p.partial_sums[n]));
  }
  return out;
}

json scenario_header(const Scenario& s, std::string_view experiment) {
  return {{"experiment", std::string(experiment)}, {"scenario", to_json(s)}};
}

RunResult run_classify(const Scenario& s, const fs::path& dir) {
  const auto phi = make_map(s);
  const auto w = make_weight(s);
  const auto d = classify(phi, w, classify_config(s, w));
  write_file(dir / "conditions.csv", conditions_csv(d));
  RunResult r;
  r.report = scenario_header(s, "classify");
  r.report["classification"] = classification_json(d);
  return r;
}

RunResult run_spectrum(const Scenario& s, const fs::path& dir) {
  const auto phi = make_map(s);
  const auto w = make_weight(s);
  const auto d = classify(phi, w, classify_config(s, w));
  write_file(dir / "conditions.csv", conditions_csv(d));
  RunResult r;
  r.report = scenario_header(s, "spectrum");
  r.report["classification"] = classification_json(d);
  if (!is_compact(d.conclusion)) {
    if (!s.force) {
      throw LabError(ErrorKind::precondition,
                     fmt::format("spectrum: compactness not established (conclusion {}); --force overrides",
                                 to_string(d.conclusion)));
    }
    r.report["forced"] = true;
    if (necessity_violated(d)) r.exit_code = kExitInconsistent;
  }

  const std::size_t n = effective_size(s);
  const auto opts = spectrum_options(s);
  const auto spec = spectrum_check(phi, w, n, opts);
  r.report["spectrum"] = spectrum_json(spec);
  write_file(dir / "spectrum.csv", spectrum_csv(spec));

  const auto raw = assemble_matrix(phi, spec.basis, n, s.knobs.spill_tol);
  const auto weighted = weighted_normalize(raw, w, phi.source());
  const auto sv = singular_value_profile(weighted);
  r.report["singular_values"] = {{"values", seq(sv.values)}, {"verdict", std::string(to_string(sv.verdict))}};
  if (s.knobs.dump_matrix) write_file(dir / "matrix.csv", matrix_csv(raw));

  json study = json::array();
  for (std::size_t size : convergence_sizes(s, spec.basis, n)) {
    try {
      const auto rep = spectrum_check(phi, w, size, opts);
      study.push_back({{"N", size},
                       {"top_k_max_distance", num(rep.top_k_max_distance)},
                       {"max_spill", num(rep.max_spill)}});
    } catch (const LabError& e) {
      study.push_back({{"N", size}, {"error", e.what()}});
    }
  }
  r.report["convergence"] = study;
  return r;
}

RunResult run_norm(const Scenario& s, const fs::path& dir) {
  const auto phi = make_map(s);
  const auto w = make_weight(s);
  const auto engine =
      s.knobs.derivative_engine == "faa_di_bruno" ? DerivativeEngine::faa_di_bruno : DerivativeEngine::series;
  const auto stress = make_stress(s, phi.source());
  RunResult r;
  r.report = scenario_header(s, "norm_profile");
  if (s.map.family == "counterexample_interval") {
    r.report["exploratory"] = "finite-window trend for a stress function; not a proof of (non)membership";
  }
  const auto d = classify(phi, w, classify_config(s, w));
  r.report["classification"] = classification_json(d);
  write_file(dir / "conditions.csv", conditions_csv(d));
  r.report["stress_profile"] = profile_json(d_norm_profile(stress, w, phi.source(), s.knobs.n_max, s.knobs.samples));
  const auto composed =
      composed_norm_profile(stress, phi, w, s.knobs.n_max, s.knobs.out_degree, engine, s.knobs.samples);
  r.report["norm_profile"] = profile_json(composed);
  write_file(dir / "profile.csv", profile_csv(composed));
  r.report["weight_diagnostics"] = weight_diagnostics(w, s.knobs.n_max);
  if (phi.phi().basis() == Basis::taylor_at_0 && s.knobs.basis_growth_max > 0) {
    try {
      r.report["basis_growth"] = seq(composition_basis_growth(phi, w, s.knobs.basis_growth_max));
    } catch (const LabError& e) {
      r.report["basis_growth_error"] = e.what();
    }
  }
  return r;
}

struct SweepRow {
  double parameter = 0.0;
  std::string conclusion;
  std::optional<SupBracket> sup;
  std::optional<double> top_error;
  std::string error;
};

SweepRow sweep_row(const Scenario& base, double value) {
  SweepRow row;
  row.parameter = value;
  try {
    const auto s = with_parameter(base, base.sweep.parameter, value);
    const auto phi = make_map(s);
    const auto w = make_weight(s);
    const auto d = classify(phi, w, classify_config(s, w));
    row.conclusion = std::string(to_string(d.conclusion));
    row.sup = d.derivative_sup;
    if (is_compact(d.conclusion)) {
      const auto rep = spectrum_check(phi, w, effective_size(s), spectrum_options(s));
      row.top_error = rep.top_k_max_distance;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::string csv_escape(const std::string& text) {
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_report(const RunResult& r, const fs::path& out_dir) {
  write_file(out_dir / "report.json", r.report.dump(2) + "\n");
}

}  // namespace

RunResult run_scenario(const Scenario& s, const fs::path& out_dir) {
  if (s.experiment == Experiment::sweep) return run_sweep(s, out_dir);
  prepare_dir(out_dir);
  RunResult r;
  switch (s.experiment) {
    case Experiment::classify: r = run_classify(s, out_dir); break;
    case Experiment::spectrum: r = run_spectrum(s, out_dir); break;
    default: r = run_norm(s, out_dir); break;
  }

  write_report(r, out_dir);
  emit_plot_data(r.report, out_dir);
  return r;
}

RunResult run_sweep(const Scenario& s, const fs::path& out_dir) {
  if (s.sweep.values.empty()) throw LabError(ErrorKind::config_parse, "config field 'sweep.values': grid is empty");
  with_parameter(s, s.sweep.parameter, s.sweep.values.front());
  prepare_dir(out_dir);

  std::vector<std::future<SweepRow>> pending;
  pending.reserve(s.sweep.values.size());
  for (double v : s.sweep.values) pending.push_back(std::async(std::launch::async, sweep_row, s, v));

  RunResult r;
  r.report = scenario_header(s, "sweep");
  json rows = json::array();
  std::string csv = "parameter,conclusion,sup_lower,sup_upper,top_eig_error,error\n";
  for (auto& f : pending) {
    const auto row = f.get();
    json j = {{"parameter", num(row.parameter)}, {"conclusion", row.conclusion}};
    if (row.sup) {
      j["sup_lower"] = num(row.sup->lower);
      j["sup_upper"] = num(row.sup->upper);
      j["witness"] = cnum(row.sup->argmax);
    }
    if (row.top_error) j["top_eig_error"] = num(*row.top_error);
    if (!row.error.empty()) j["error"] = row.error;
    rows.push_back(j);
    csv += fmt::format("{},{},{},{},{},{}\n", cell(row.parameter), row.conclusion,
                       row.sup ? cell(row.sup->lower) : "", row.sup ? cell(row.sup->upper) : "",
                       row.top_error ? cell(*row.top_error) : "",
                       row.error.empty() ? "" : csv_escape(row.error));
  }
  r.report["rows"] = rows;
  write_file(out_dir / "sweep.csv", csv);
  write_report(r, out_dir);
  return r;
}

void emit_plot_data(const json& report, const fs::path& out_dir) {
  prepare_dir(out_dir);
  auto curve = [&](const std::string& name, const std::string& header, const json& values, std::size_t first) {
    std::string text = "# " + header + "\n";
    std::size_t i = first;
    for (const auto& v : values) {
      if (v.is_number()) text += fmt::format("{} {}\n", i, cell(v.get<double>()));
      ++i;
    }
    write_file(out_dir / name, text);
  };

  if (report.contains("classification")) {
    curve("analyticity.dat", "k analyticity_index_b_k", report["classification"]["analyticity"]["values"], 1);
  }
  if (report.contains("norm_profile")) {
    curve("partial_sums.dat", "n partial_sum", report["norm_profile"]["partial_sums"], 0);
    curve("terms.dat", "n term", report["norm_profile"]["terms"], 0);
  }
  if (report.contains("weight_diagnostics")) {
    const auto& wd = report["weight_diagnostics"];
    curve("non_analyticity.dat", "n (n!/M_n)^(1/n)", wd["non_analyticity"]["values"], 1);
    curve("ratio.dat", "n n^2 M_n/M_(n+1)", wd["ratio"]["values"], 1);
  }
  if (report.contains("basis_growth")) {
    curve("basis_growth.dat", "j ||phi^j||_D/||z^j||_D", report["basis_growth"], 0);
  }
  if (report.contains("singular_values")) {
    curve("singular_values.dat", "index singular_value", report["singular_values"]["values"], 0);
  }
  if (report.contains("convergence")) {
    std::string text = "# N top_k_max_distance\n";
    for (const auto& row : report["convergence"]) {
      if (row.contains("top_k_max_distance") && row["top_k_max_distance"].is_number()) {
        text += fmt::format("{} {}\n", row["N"].get<std::size_t>(), cell(row["top_k_max_distance"].get<double>()));
      }
    }
    write_file(out_dir / "convergence.dat", text);
  }
}

}  // namespace ddlab
