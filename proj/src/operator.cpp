#include "ddlab/operator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ddlab/algebra.hpp"

namespace ddlab {
namespace {

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

OperatorMatrix assemble_taylor(const MapBetween& phi, std::size_t n) {
  const auto& map = phi.phi();
  if (map.basis() != Basis::taylor_at_0) {
    throw LabError(ErrorKind::basis_mismatch, "assemble_matrix: taylor basis needs a taylor map");
  }
  const auto pc = map.coefficients();
  OperatorMatrix out;
  out.basis = Basis::taylor_at_0;
  out.entries = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.spill.assign(n, 0.0);
  std::vector<Complex> power{1.0};
  out.entries(0, 0) = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<Complex> next(power.size() + pc.size() - 1, Complex{});
    for (std::size_t a = 0; a < power.size(); ++a) {
      for (std::size_t b = 0; b < pc.size(); ++b) next[a + b] += power[a] * pc[b];
    }
    double spill = 0.0;
    for (std::size_t k = n; k < next.size(); ++k) spill = std::max(spill, std::abs(next[k]));
    if (next.size() > n) next.resize(n);
    for (std::size_t k = 0; k < next.size(); ++k) {
      out.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = next[k];
    }
    out.spill[j] = spill;
    power = std::move(next);
  }
  return out;
}

OperatorMatrix assemble_laurent(const MapBetween& phi, std::size_t n) {
  if (phi.source().kind() != DomainKind::unit_circle) {
    throw LabError(ErrorKind::basis_mismatch, "assemble_matrix: laurent basis needs a circle map");
  }
  if (n % 2 == 0) throw LabError(ErrorKind::invalid_argument, "assemble_matrix: laurent size must be odd");
  const int d = static_cast<int>((n - 1) / 2);
  const std::size_t m = std::bit_ceil(std::max<std::size_t>(8 * n, 64));
  const auto pts = circle_points(m);
  std::vector<Complex> phi_vals(m), inv_vals(m);
  for (std::size_t j = 0; j < m; ++j) {
    phi_vals[j] = phi.phi()(pts[j]);
    inv_vals[j] = 1.0 / phi_vals[j];
  }
  OperatorMatrix out;
  out.basis = Basis::laurent;
  out.min_exponent = -d;
  out.entries = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.spill.assign(n, 0.0);

  const long half = static_cast<long>(m / 2);
  auto fill_column = [&](int exponent, const std::vector<Complex>& samples) {
    const auto coeffs = fourier_transform(samples);
    const auto col = static_cast<Eigen::Index>(exponent + d);
    double spill = 0.0;
    for (long k = -half + 1; k <= half; ++k) {
      const Complex c = coeffs[static_cast<std::size_t>(k + half - 1)];
      if (k >= -d && k <= d) {
        out.entries(static_cast<Eigen::Index>(k + d), col) = c;
      } else {
        spill = std::max(spill, std::abs(c));
      }
    }
    out.spill[static_cast<std::size_t>(col)] = spill;
  };

  std::vector<Complex> pos(m, Complex(1.0, 0.0));
  std::vector<Complex> neg(m, Complex(1.0, 0.0));
  fill_column(0, pos);
  for (int e = 1; e <= d; ++e) {
    for (std::size_t j = 0; j < m; ++j) {
      pos[j] *= phi_vals[j];
      neg[j] *= inv_vals[j];
    }
    fill_column(e, pos);
    fill_column(-e, neg);
  }
  return out;
}

}  // namespace

double OperatorMatrix::max_spill() const {
  return spill.empty() ? 0.0 : *std::max_element(spill.begin(), spill.end());
}

OperatorMatrix assemble_matrix(const MapBetween& phi, Basis basis, std::size_t n, double spill_tol) {
  if (!phi.self_map()) throw LabError(ErrorKind::precondition, "assemble_matrix: phi must be a self-map");
  if (n < 4) throw LabError(ErrorKind::invalid_argument, "assemble_matrix: need N >= 4");
  auto out = basis == Basis::taylor_at_0 ? assemble_taylor(phi, n) : assemble_laurent(phi, n);
  for (std::size_t j = 0; j < out.spill.size(); ++j) {
    if (!(out.spill[j] < spill_tol)) {
      throw LabError(ErrorKind::spill_too_large,
                     "assemble_matrix: column for z^" + std::to_string(out.exponent(j)) + " spills " +
                         std::to_string(out.spill[j]) + " outside the basis window");
    }
  }
  return out;
}

std::vector<Complex> eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw LabError(ErrorKind::invalid_argument, "eigenvalues: matrix must be square");
  if (static_cast<std::size_t>(m.rows()) > kMaxDenseSize) {
    throw LabError(ErrorKind::precondition, "eigenvalues: N is capped at 512");
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, true);
  if (solver.info() != Eigen::Success) {
    throw LabError(ErrorKind::convergence_failure,
                   "eigenvalues: QR iteration did not converge within " +
                       std::to_string(solver.getMaxIterations()) + " iterations per eigenvalue");
  }
  const double scale = spectral_norm(m);
  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();
  std::vector<Complex> out(vals.data(), vals.data() + vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const Eigen::VectorXcd v = vecs.col(i);
    const double vn = v.norm();
    const double residual = vn > 0.0 ? (m * v - vals(i) * v).norm() / vn : 0.0;
    if (!finite(vals(i)) || residual >= 1e-8 * scale + std::numeric_limits<double>::min()) {
      if (scale == 0.0 && finite(vals(i))) continue;
      throw LabError(ErrorKind::convergence_failure,
                     "eigenvalues: backward error check failed (residual " + std::to_string(residual) + ")");
    }
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

std::vector<Complex> eigenvalues(const OperatorMatrix& m) { return eigenvalues(m.entries); }

std::string_view to_string(CompactnessVerdict verdict) {
  switch (verdict) {
    case CompactnessVerdict::compact_consistent: return "compact-consistent";
    case CompactnessVerdict::non_compact_consistent: return "non-compact-consistent";
    case CompactnessVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

SingularValueProfile singular_value_profile(const OperatorMatrix& m) {
  if (!m.weighted) {
    throw LabError(ErrorKind::not_weighted, "singular_value_profile: decay is only meaningful for a weighted matrix");
  }
  if (m.size() > kMaxDenseSize) throw LabError(ErrorKind::precondition, "singular_value_profile: N is capped at 512");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m.entries);
  const auto& s = svd.singularValues();
  SingularValueProfile out;
  out.values.assign(s.data(), s.data() + s.size());
  const std::size_t n = out.values.size();
  const std::size_t half = n / 2;
  const double top = out.values.empty() ? 0.0 : out.values[0];
  if (top == 0.0) {
    out.verdict = CompactnessVerdict::compact_consistent;
    return out;
  }
  for (std::size_t k = 0; k < half; ++k) {
    if (out.values[k] < 1e-6 * top) {
      out.verdict = CompactnessVerdict::compact_consistent;
      return out;
    }
  }
  out.verdict = half < n && out.values[half] / top > 0.1 ? CompactnessVerdict::non_compact_consistent
                                                        : CompactnessVerdict::inconclusive;
  return out;
}

OperatorMatrix weighted_normalize(const OperatorMatrix& m, const WeightSequence& w, const DomainSet& x) {
  if (m.weighted) throw LabError(ErrorKind::precondition, "weighted_normalize: matrix is already weighted");
  if (m.basis == Basis::laurent && x.kind() != DomainKind::unit_circle) {
    throw LabError(ErrorKind::basis_mismatch, "weighted_normalize: laurent basis lives on the circle");
  }
  OperatorMatrix out = m;
  const std::size_t n = m.size();
  out.basis_log_norms.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.basis_log_norms[i] = log_monomial_norm(m.exponent(i), w);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      out.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *=
          std::exp(out.basis_log_norms[i] - out.basis_log_norms[j]);
    }
  }
  out.weighted = true;
  return out;
}

std::vector<Complex> default_seeds(const DomainSet& x) {
  switch (x.kind()) {
    case DomainKind::interval_01: {
      std::vector<Complex> s;
      for (int j = 0; j < 16; ++j) s.emplace_back(j / 15.0, 0.0);
      return s;
    }
    case DomainKind::unit_circle: return circle_points(16);
    case DomainKind::closed_unit_disc: {
      auto s = circle_points(8);
      for (const auto& z : circle_points(8)) s.push_back(0.5 * z * std::polar(1.0, std::numbers::pi / 8));
      return s;
    }
  }
  return {};
}

FixedPointResult find_fixed_point(const MapBetween& phi, const std::vector<Complex>& seeds_in) {
  if (!phi.self_map()) throw LabError(ErrorKind::precondition, "find_fixed_point: phi must be a self-map");
  const auto& f = phi.phi();
  const auto& df = phi.derivative();
  const auto& x = phi.source();
  const auto seeds = seeds_in.empty() ? default_seeds(x) : seeds_in;
  constexpr std::size_t kBudget = 10000;

  auto project = [&](Complex z) {
    if (x.kind() == DomainKind::unit_circle && std::abs(std::abs(z) - 1.0) < 1e-9) return z / std::abs(z);
    if (x.kind() == DomainKind::interval_01 && std::abs(z.imag()) < 1e-9) return Complex(z.real(), 0.0);
    return z;
  };

  FixedPointResult best;
  bool have = false;
  for (const auto& seed : seeds) {
    Complex z = seed;
    std::size_t it = 0;
    bool ok = true;
    for (; it < kBudget; ++it) {
      const Complex fz = f(z);
      if (!finite(fz)) {
        ok = false;
        break;
      }
      if (std::abs(fz - z) < 1e-14) break;
      z = it < kBudget / 2 ? fz : 0.5 * (z + fz);
    }
    if (!ok) continue;
    for (int k = 0; k < 50; ++k) {
      const Complex slope = df(z) - 1.0;
      const Complex r = f(z) - z;
      if (std::abs(r) < 1e-15 || std::abs(slope) < 1e-12) break;
      const Complex next = z - r / slope;
      if (!finite(next)) break;
      z = next;
    }
    z = project(z);
    const double residual = std::abs(f(z) - z);
    if (!(residual < 1e-12) || !x.contains(z, 1e-12)) continue;

    const bool known = std::any_of(best.roots.begin(), best.roots.end(),
                                   [&](Complex r) { return std::abs(r - z) < 1e-8; });
    if (!known) best.roots.push_back(z);
    if (!have || residual < best.residual) {
      best.x0 = z;
      best.residual = residual;
      best.iterations = it;
      have = true;
    }
  }
  if (!have) {
    throw LabError(ErrorKind::no_convergence,
                   "find_fixed_point: no seed converged within 10^4 iterations; the map may not induce a "
                   "compact endomorphism");
  }
  best.derivative_at_fixed_point = df(best.x0);
  if (best.roots.size() > 1) {
    best.warning = "found " + std::to_string(best.roots.size()) +
                   " distinct fixed points; a compact endomorphism has exactly one";
  }
  return best;
}

SpectrumReport spectrum_check(const MapBetween& phi, const WeightSequence& w, std::size_t n,
                              const SpectrumOptions& options) {
  if (!options.compactness_established) {
    throw LabError(ErrorKind::precondition,
                   "spectrum_check: the endomorphism has not been ruled compact (use force to override)");
  }
  SpectrumReport report;
  report.fixed_point = find_fixed_point(phi);
  report.basis = phi.phi().basis();
  report.size = n;
  report.tol = options.tol;

  const auto raw = assemble_matrix(phi, report.basis, n, options.spill_tol);
  report.max_spill = raw.max_spill();
  const auto weighted = weighted_normalize(raw, w, phi.source());
  report.computed = eigenvalues(weighted);

  const Complex lambda = report.fixed_point.derivative_at_fixed_point;
  report.predicted.push_back(1.0);
  Complex p = 1.0;
  const std::size_t cap = std::max(options.k, n);
  for (std::size_t j = 1; j <= cap; ++j) {
    p *= lambda;
    if (j > options.k && std::abs(p) < options.tol) break;
    report.predicted.push_back(p);
  }
  report.predicted.push_back(0.0);

  const std::size_t nonzero = report.predicted.size() - 1;
  std::vector<bool> used(nonzero, false);
  for (std::size_t i = 0; i < report.computed.size(); ++i) {
    const Complex mu = report.computed[i];
    if (std::abs(mu) <= options.tol) {
      ++report.matched_to_zero;
      continue;
    }
    std::size_t best = nonzero;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < nonzero; ++q) {
      if (used[q]) continue;
      const double dist = std::abs(mu - report.predicted[q]);
      if (dist < best_d) {
        best_d = dist;
        best = q;
      }
    }
    if (best == nonzero) {
      report.unmatched.push_back(i);
      continue;
    }
    used[best] = true;
    report.matches.push_back({i, mu, report.predicted[best], best_d});
    report.max_matched_distance = std::max(report.max_matched_distance, best_d);
    if (best_d > options.tol) report.unmatched.push_back(i);
  }

  for (std::size_t i = 0; i < std::min(options.k, report.computed.size()); ++i) {
    const Complex mu = report.computed[i];
    double dist = std::abs(mu);
    const auto hit = std::find_if(report.matches.begin(), report.matches.end(),
                                  [&](const SpectrumMatch& m) { return m.computed_index == i; });
    if (hit != report.matches.end()) {
      dist = hit->distance;
    } else {
      for (const auto& q : report.predicted) dist = std::min(dist, std::abs(mu - q));
    }
    report.top_k_distances.push_back(dist);
    report.top_k_max_distance = std::max(report.top_k_max_distance, dist);
  }
  return report;
}

}  // namespace ddlab
