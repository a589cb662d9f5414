#include "ddlab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ddlab {
namespace {

double log_sum_exp(std::span<const double> logs) {
  const double mx = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double l : logs) s += std::exp(l - mx);
  return mx + std::log(s);
}

double term(double sup, double log_weight) {
  return sup > 0.0 ? std::exp(std::log(sup) - log_weight) : 0.0;
}

}  // namespace

std::string_view to_string(NormVerdict verdict) {
  switch (verdict) {
    case NormVerdict::convergent_trend: return "convergent_trend";
    case NormVerdict::divergent_trend: return "divergent_trend";
    case NormVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(DerivativeEngine engine) {
  return engine == DerivativeEngine::series ? "series" : "faa_di_bruno";
}

NormVerdict norm_verdict(std::span<const double> terms) {
  for (std::size_t n = 1; n < terms.size(); ++n) {
    if (terms[n] == 0.0) return NormVerdict::convergent_trend;
  }
  const std::size_t start = final_quartile_start(terms.size());
  bool ratios_small = true;
  for (std::size_t n = start; n + 1 < terms.size(); ++n) {
    if (!(terms[n + 1] < 0.9 * terms[n])) ratios_small = false;
  }
  if (ratios_small) return NormVerdict::convergent_trend;

  double sum = 0.0;
  std::vector<double> partial;
  for (double t : terms) partial.push_back(sum += t);
  bool growing = true;
  for (std::size_t n = start; n + 1 < partial.size(); ++n) {
    if (!(partial[n + 1] > 1.05 * partial[n])) growing = false;
  }
  return growing ? NormVerdict::divergent_trend : NormVerdict::inconclusive;
}

DNormProfile profile_from_terms(std::vector<double> terms) {
  DNormProfile p;
  double sum = 0.0;
  p.partial_sums.reserve(terms.size());
  for (double t : terms) p.partial_sums.push_back(sum += t);
  p.verdict = norm_verdict(terms);
  p.terms = std::move(terms);
  return p;
}

DNormProfile d_norm_profile(const SeriesFunction& f, const WeightSequence& w, const DomainSet& x,
                            std::size_t n_max, std::size_t k_samples) {
  if (n_max > w.length() - 1) {
    throw LabError(ErrorKind::length_insufficient, "d_norm_profile: n_max exceeds the weight table");
  }
  std::vector<double> terms;
  terms.reserve(n_max + 1);
  auto d = f;
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) d = differentiate(d, 1);
    terms.push_back(term(sup_norm(d, x, k_samples).upper, w.log_value(n)));
  }
  return profile_from_terms(std::move(terms));
}

DNormProfile composed_norm_profile(const SeriesFunction& f, const MapBetween& phi, const WeightSequence& w,
                                   std::size_t n_max, std::size_t out_degree, DerivativeEngine engine,
                                   std::size_t k_samples) {
  if (n_max > w.length() - 1) {
    throw LabError(ErrorKind::length_insufficient, "composed_norm_profile: n_max exceeds the weight table");
  }
  const auto& inner = phi.phi();
  const bool polynomial = f.basis() == Basis::taylor_at_0 && inner.basis() == Basis::taylor_at_0;
  const std::size_t full_degree =
      polynomial ? static_cast<std::size_t>(f.degree()) * static_cast<std::size_t>(std::max(inner.degree(), 1)) : 64;
  if (out_degree == 0) out_degree = full_degree;

  if (engine == DerivativeEngine::series) {
    SeriesFunction composed = compose_series(f, inner, out_degree);
    if (polynomial && out_degree < full_degree) {
      const auto full = compose_series(f, inner, full_degree);
      double tail = 0.0;
      for (int k = static_cast<int>(out_degree) + 1; k <= full.degree(); ++k) {
        tail = std::max(tail, std::abs(full.coefficient(k)));
      }
      if (!(tail < kTailTol)) {
        throw LabError(ErrorKind::tail_too_large,
                       "composed_norm_profile: out_degree " + std::to_string(out_degree) +
                           " drops a coefficient of modulus " + std::to_string(tail));
      }
    }
    auto profile = d_norm_profile(composed, w, phi.source(), n_max, k_samples);
    profile.out_degree = out_degree;
    return profile;
  }

  // Pointwise route: (f o phi)^(n) on the sup grid through Bell polynomials.
  const std::size_t order = n_max + 2;
  std::vector<SeriesFunction> dphi{inner};
  std::vector<SeriesFunction> df{f};
  for (std::size_t k = 1; k <= order; ++k) {
    dphi.push_back(differentiate(dphi.back(), 1));
    df.push_back(differentiate(df.back(), 1));
  }
  const auto& x = phi.source();
  const auto grid = x.sup_grid(k_samples);
  std::vector<std::vector<Complex>> g(order + 1, std::vector<Complex>(grid.size()));
  std::vector<Complex> phi_derivs(order + 1), f_derivs(order + 1);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t k = 0; k <= order; ++k) phi_derivs[k] = dphi[k](grid[j]);
    const Complex image = phi_derivs[0];
    for (std::size_t k = 0; k <= order; ++k) f_derivs[k] = df[k](image);
    const auto all = faa_di_bruno_all(f_derivs, phi_derivs, order);
    for (std::size_t k = 0; k <= order; ++k) g[k][j] = all[k];
  }
  std::vector<double> terms;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const auto b = sup_bracket_from_samples(x, k_samples, grid, g[n], g[n + 1], g[n + 2]);
    terms.push_back(term(b.upper, w.log_value(n)));
  }
  auto profile = profile_from_terms(std::move(terms));
  profile.engine = DerivativeEngine::faa_di_bruno;
  profile.out_degree = 0;
  return profile;
}

double log_monomial_norm(int n, const WeightSequence& w) {
  std::vector<double> logs;
  if (n >= 0) {
    const auto un = static_cast<std::size_t>(n);
    if (un > w.length() - 1) {
      throw LabError(ErrorKind::length_insufficient,
                     "log_monomial_norm: weight table too short for exponent " + std::to_string(n));
    }
    for (std::size_t k = 0; k <= un; ++k) {
      logs.push_back(log_factorial(un) - log_factorial(un - k) - w.log_value(k));
    }
    return log_sum_exp(logs);
  }
  // |(-m)(-m-1)...(-m-k+1)| = (m+k-1)! / (m-1)!
  const auto m = static_cast<std::size_t>(-n);
  for (std::size_t k = 0; k < w.length(); ++k) {
    logs.push_back(log_factorial(m + k - 1) - log_factorial(m - 1) - w.log_value(k));
  }
  const double mx = *std::max_element(logs.begin(), logs.end());
  if (logs.back() - mx > std::log(1e-16)) {
    throw LabError(ErrorKind::length_insufficient,
                   "log_monomial_norm: series for exponent " + std::to_string(n) +
                       " has not converged inside the weight table");
  }
  return log_sum_exp(logs);
}

std::vector<double> composition_basis_growth(const MapBetween& phi, const WeightSequence& w, std::size_t j_max,
                                             std::size_t k_samples) {
  const auto& x = phi.source();
  std::vector<double> out;
  auto power = SeriesFunction::taylor({1.0}, x);
  if (phi.phi().basis() != Basis::taylor_at_0) {
    throw LabError(ErrorKind::basis_mismatch, "composition_basis_growth: taylor maps only");
  }
  for (std::size_t j = 0; j <= j_max; ++j) {
    if (j > 0) power = multiply(power, phi.phi());
    const auto deg = static_cast<std::size_t>(power.degree());
    if (deg > w.length() - 1) {
      throw LabError(ErrorKind::length_insufficient, "composition_basis_growth: weight table too short");
    }
    std::vector<Complex> mono(j + 1, Complex{});
    mono[j] = 1.0;
    const double image = d_norm_profile(power, w, x, deg, k_samples).norm();
    const double basis = d_norm_profile(SeriesFunction::taylor(mono, x), w, x, j, k_samples).norm();
    out.push_back(image / basis);
  }
  return out;
}

}  // namespace ddlab
