#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "ddlab/families.hpp"
#include "ddlab/operator.hpp"

using namespace ddlab;

namespace {

const DomainSet kInterval(DomainKind::interval_01);
const DomainSet kDisc(DomainKind::closed_unit_disc);
const DomainSet kCircle(DomainKind::unit_circle);
const auto kWeight = WeightSequence::factorial_power(1.5, 401);

SeriesFunction poly(std::vector<Complex> c, const DomainSet& d = kDisc) { return SeriesFunction::taylor(std::move(c), d); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const LabError& e) {
    return e.kind();
  }
  FAIL("expected a LabError");
  return ErrorKind::invalid_argument;
}

SpectrumOptions compact_options(std::size_t k, double tol = 1e-8) {
  SpectrumOptions o;
  o.k = k;
  o.tol = tol;
  o.compactness_established = true;
  return o;
}

}  // namespace

TEST_CASE("assemble taylor matrices") {
  SUBCASE("z/2 + 1/4 with N = 4") {
    const auto m = assemble_matrix(self_map(poly({0.25, 0.5})), Basis::taylor_at_0, 4);
    CHECK(m.size() == 4);
    CHECK_FALSE(m.weighted);
    for (int i = 0; i < 4; ++i) {
      CHECK(m.entries(i, i) == Complex(std::pow(0.5, i)));
      for (int j = 0; j < i; ++j) CHECK(m.entries(i, j) == Complex(0.0));
    }
    CHECK(m.entries(0, 1) == Complex(0.25));
    CHECK(m.entries(0, 3) == Complex(1.0 / 64));
    CHECK(m.entries(1, 2) == Complex(0.25));
    CHECK(m.max_spill() == 0.0);
  }
  SUBCASE("identity") {
    const auto t = assemble_matrix(self_map(poly({0, 1})), Basis::taylor_at_0, 9);
    CHECK(t.entries.isApprox(Eigen::MatrixXcd::Identity(9, 9), 0.0));
    const auto l = assemble_matrix(self_map(SeriesFunction::laurent(1, {1.0}, kCircle)), Basis::laurent, 9);
    CHECK((l.entries - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(l.exponent(0) == -4);
  }
  SUBCASE("alpha z is diagonal") {
    const Complex a(0.3, -0.4);
    const auto m = assemble_matrix(self_map(poly({0, a})), Basis::taylor_at_0, 12);
    Complex p = 1.0;
    for (int i = 0; i < 12; ++i, p *= a) {
      CHECK(std::abs(m.entries(i, i) - p) < 1e-16);
      for (int j = 0; j < 12; ++j) {
        if (i != j) CHECK(m.entries(i, j) == Complex(0.0));
      }
    }
  }
  SUBCASE("maps fixing 0 give lower triangular matrices with diagonal phi'(0)^j") {
    std::mt19937_64 rng(40);
    for (int trial = 0; trial < 10; ++trial) {
      auto c = oracle::random_poly(rng, 3);
      c[0] = 0.0;
      for (auto& v : c) v *= 0.2;
      // Only the triangular structure matters here, not the discarded tail.
      const auto m = assemble_matrix(self_map(poly(c)), Basis::taylor_at_0, 10, 1.0);
      for (int i = 0; i < 10; ++i) {
        CHECK(std::abs(m.entries(i, i) - std::pow(c[1], i)) < 1e-15);
        for (int j = i + 1; j < 10; ++j) CHECK(m.entries(i, j) == Complex(0.0));
      }
    }
  }
}

TEST_CASE("assemble laurent matrices for the Wermer map") {
  const auto phi = self_map(families::wermer_circle(0.2, 32));
  const auto m = assemble_matrix(phi, Basis::laurent, 33);
  CHECK(m.min_exponent == -16);
  // Column for z^1 holds the Bessel coefficients J_k(0.4).
  for (int k = -16; k <= 16; ++k) {
    CHECK(std::abs(m.entries(k + 16, 17) - oracle::wermer_coefficient(0.2, k)) < 1e-13);
  }
  // Column for z^-1: 1/phi(z) = phi(1/z), coefficient J_{-k}.
  for (int k = -16; k <= 16; ++k) {
    CHECK(std::abs(m.entries(k + 16, 15) - oracle::wermer_coefficient(0.2, -k)) < 1e-13);
  }
  CHECK(m.max_spill() < 1e-6);
}

TEST_CASE("assembly errors") {
  CHECK(kind_of([] { assemble_matrix(self_map(poly({0.25, 0.5})), Basis::taylor_at_0, 3); }) ==
        ErrorKind::invalid_argument);
  CHECK(kind_of([] { assemble_matrix(MapBetween(poly({0.0, 0.5}, kInterval), kDisc), Basis::taylor_at_0, 8); }) ==
        ErrorKind::precondition);
  CHECK(kind_of([] { assemble_matrix(self_map(families::wermer_circle(0.2, 16)), Basis::laurent, 32); }) ==
        ErrorKind::invalid_argument);
  CHECK(kind_of([] { assemble_matrix(self_map(poly({0.25, 0.5})), Basis::laurent, 9); }) ==
        ErrorKind::basis_mismatch);
  CHECK(kind_of([] { assemble_matrix(self_map(families::wermer_circle(0.2, 16)), Basis::taylor_at_0, 9); }) ==
        ErrorKind::basis_mismatch);
  // Powers of z^2 + small leave the window with non-negligible mass.
  CHECK(kind_of([] { assemble_matrix(self_map(poly({0.1, 0.0, 0.8})), Basis::taylor_at_0, 8); }) ==
        ErrorKind::spill_too_large);
  CHECK(kind_of([] { assemble_matrix(self_map(families::wermer_circle(0.45, 64)), Basis::laurent, 65); }) ==
        ErrorKind::spill_too_large);
}

TEST_CASE("composition is functorial on truncations") {
  const auto phi = poly({0.1, 0.5});
  const auto psi = poly({0.0, 0.25, 0.05});
  const auto both = compose_series(phi, psi, 2);
  const std::size_t n = 16;
  const auto a = assemble_matrix(self_map(both), Basis::taylor_at_0, n);
  const auto p = assemble_matrix(self_map(phi), Basis::taylor_at_0, n);
  const auto q = assemble_matrix(self_map(psi), Basis::taylor_at_0, n);
  const Eigen::MatrixXcd product = q.entries * p.entries;
  CHECK((a.entries - product).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((a.entries - product).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigenvalues") {
  SUBCASE("diagonal") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
    const Complex a(0.6, 0.2);
    d(0, 0) = 1.0;
    d(1, 1) = a;
    d(2, 2) = a * a;
    const auto ev = eigenvalues(d);
    CHECK(ev[0] == Complex(1.0));
    CHECK(ev[1] == a);
    CHECK(ev[2] == a * a);
  }
  SUBCASE("affine N = 8") {
    const auto ev = eigenvalues(assemble_matrix(self_map(poly({0.25, 0.5})), Basis::taylor_at_0, 8));
    for (int j = 0; j < 8; ++j) CHECK(std::abs(ev[j] - std::pow(0.5, j)) < 1e-12);
  }
  SUBCASE("nilpotent") {
    Eigen::MatrixXcd m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    const auto ev = eigenvalues(m);
    CHECK(ev.size() == 2);
    CHECK(std::abs(ev[0]) == 0.0);
    CHECK(std::abs(ev[1]) == 0.0);
  }
  SUBCASE("size cap") {
    CHECK(kind_of([] { eigenvalues(Eigen::MatrixXcd::Identity(513, 513)); }) == ErrorKind::precondition);
  }
  SUBCASE("ordering is by modulus, then real part, then imaginary part, all descending") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
    d(0, 0) = Complex(0.0, 0.5);
    d(1, 1) = -0.5;
    d(2, 2) = 0.9;
    d(3, 3) = 0.5;
    const auto ev = eigenvalues(d);
    CHECK(ev[0] == Complex(0.9));
    CHECK(ev[1] == Complex(0.5));
    CHECK(ev[2] == Complex(0.0, 0.5));
    CHECK(ev[3] == Complex(-0.5));
  }
}

TEST_CASE("weighted normalization") {
  SUBCASE("basis norms on the disc") {
    const auto m = weighted_normalize(assemble_matrix(self_map(poly({0.25, 0.5})), Basis::taylor_at_0, 4), kWeight, kDisc);
    CHECK(m.weighted);
    CHECK(std::exp(m.basis_log_norms[0]) == doctest::Approx(1.0));
    CHECK(std::exp(m.basis_log_norms[1]) == doctest::Approx(2.0));
    CHECK(std::abs(m.entries(0, 1) - 0.25 / 2.0) < 1e-15);
    CHECK(kind_of([&] { weighted_normalize(m, kWeight, kDisc); }) == ErrorKind::precondition);
  }
  SUBCASE("identity and diagonal matrices are unchanged") {
    const auto id = weighted_normalize(assemble_matrix(self_map(poly({0, 1})), Basis::taylor_at_0, 10), kWeight, kDisc);
    CHECK((id.entries - Eigen::MatrixXcd::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-15);
    const auto raw = assemble_matrix(self_map(poly({0, 0.7})), Basis::taylor_at_0, 10);
    const auto w = weighted_normalize(raw, kWeight, kDisc);
    CHECK((w.entries - raw.entries).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("eigenvalues are invariant") {
    const std::vector<MapBetween> maps{self_map(poly({0.25, 0.5})), self_map(poly({0.05, 0.3, 0.1})),
                                       self_map(families::wermer_circle(0.2, 32))};
    for (const auto& phi : maps) {
      const auto basis = phi.phi().basis();
      const auto raw = assemble_matrix(phi, basis, basis == Basis::laurent ? 33 : 24);
      const auto a = eigenvalues(raw);
      const auto b = eigenvalues(weighted_normalize(raw, kWeight, phi.source()));
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8);
    }
  }
}

TEST_CASE("singular value profiles") {
  SUBCASE("z/2 is compact-consistent once 2^-k clears 1e-6 before N/2") {
    const auto small = weighted_normalize(assemble_matrix(self_map(poly({0, 0.5})), Basis::taylor_at_0, 32), kWeight, kDisc);
    CHECK(singular_value_profile(small).verdict == CompactnessVerdict::inconclusive);
    const auto m = weighted_normalize(assemble_matrix(self_map(poly({0, 0.5})), Basis::taylor_at_0, 64), kWeight, kDisc);
    const auto p = singular_value_profile(m);
    CHECK(p.values.size() == 64);
    CHECK(p.verdict == CompactnessVerdict::compact_consistent);
    for (std::size_t i = 1; i < p.values.size(); ++i) CHECK(p.values[i] <= p.values[i - 1]);
  }
  SUBCASE("identity is non-compact-consistent") {
    const auto m = weighted_normalize(assemble_matrix(self_map(poly({0, 1})), Basis::taylor_at_0, 32), kWeight, kDisc);
    const auto p = singular_value_profile(m);
    for (double s : p.values) CHECK(s == doctest::Approx(1.0));
    CHECK(p.verdict == CompactnessVerdict::non_compact_consistent);
  }
  SUBCASE("Wermer map with c = 0.2") {
    const auto phi = self_map(families::wermer_circle(0.2, 32));
    const auto m = weighted_normalize(assemble_matrix(phi, Basis::laurent, 65), kWeight, kCircle);
    CHECK(singular_value_profile(m).verdict == CompactnessVerdict::compact_consistent);
  }
  CHECK(kind_of([] { singular_value_profile(assemble_matrix(self_map(poly({0, 1})), Basis::taylor_at_0, 8)); }) ==
        ErrorKind::not_weighted);
}

TEST_CASE("fixed points") {
  SUBCASE("affine") {
    const auto r = find_fixed_point(self_map(poly({0.25, 0.5})));
    CHECK(std::abs(r.x0 - 0.5) < 1e-12);
    CHECK(std::abs(r.derivative_at_fixed_point - 0.5) < 1e-15);
    CHECK(r.residual < 1e-12);
    CHECK_FALSE(r.warning);
  }
  SUBCASE("alpha z") {
    const Complex a(0.2, 0.6);
    const auto r = find_fixed_point(self_map(poly({0, a})));
    CHECK(std::abs(r.x0) < 1e-12);
    CHECK(std::abs(r.derivative_at_fixed_point - a) < 1e-15);
  }
  SUBCASE("Wermer map") {
    const auto r = find_fixed_point(self_map(families::wermer_circle(0.2, 32)));
    CHECK(std::abs(r.x0 - 1.0) < 1e-12);
    CHECK(std::abs(r.derivative_at_fixed_point - 0.4) < 1e-12);
    CHECK(r.residual < 1e-12);
  }
  SUBCASE("interval counterexample has a boundary fixed point") {
    const auto r = find_fixed_point(self_map(families::counterexample_interval()));
    CHECK(std::abs(r.x0 - 1.0) < 1e-6);
  }
  SUBCASE("identity has many fixed points") {
    const auto r = find_fixed_point(self_map(poly({0, 1})));
    CHECK(r.roots.size() > 1);
    CHECK(r.warning);
  }
  SUBCASE("a rotation has no attracting fixed point on the circle") {
    CHECK(kind_of([] { find_fixed_point(self_map(SeriesFunction::laurent(1, {Complex(0.0, 1.0)}, kCircle))); }) ==
          ErrorKind::no_convergence);
  }
  CHECK(default_seeds(kDisc).size() == 16);
  CHECK(default_seeds(kInterval).size() == 16);
}

TEST_CASE("spectrum check") {
  SUBCASE("affine N = 32") {
    const auto r = spectrum_check(self_map(poly({0.25, 0.5})), kWeight, 32, compact_options(8, 1e-10));
    CHECK(r.max_matched_distance < 1e-10);
    CHECK(r.unmatched.empty());
    CHECK(r.predicted.front() == Complex(1.0));
    CHECK(r.predicted.back() == Complex(0.0));
    CHECK(r.top_k_distances.size() == 8);
  }
  SUBCASE("alpha z matches the predicted powers") {
    const Complex a(0.5, 0.3);
    const auto r = spectrum_check(self_map(poly({0, a})), kWeight, 16, compact_options(16, 1e-14));
    for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(r.computed[i] - std::pow(a, double(i))) < 1e-15);
    CHECK(r.top_k_max_distance < 1e-15);
  }
  SUBCASE("Wermer map, laurent d = 32") {
    const auto r = spectrum_check(self_map(families::wermer_circle(0.2, 32)), kWeight, 65, compact_options(5));
    const double expected[] = {1.0, 0.4, 0.16, 0.064, 0.0256};
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(r.computed[i] - expected[i]) < 1e-3);
    CHECK(r.top_k_max_distance < 1e-3);
    CHECK(r.basis == Basis::laurent);
  }
  SUBCASE("matching is injective on the top-k") {
    const auto r = spectrum_check(self_map(poly({0.05, 0.3, 0.1})), kWeight, 24, compact_options(6));
    std::vector<Complex> used;
    for (const auto& m : r.matches) {
      for (const auto& u : used) CHECK(u != m.predicted);
      used.push_back(m.predicted);
    }
  }
  SUBCASE("needs established compactness") {
    CHECK(kind_of([] {
      spectrum_check(self_map(SeriesFunction::taylor({0.25, 0.5}, kDisc)), kWeight, 8, SpectrumOptions{});
    }) == ErrorKind::precondition);
  }
}

TEST_CASE("truncation error decreases with N for the Wermer map") {
  const auto phi = self_map(families::wermer_circle(0.1, 64));
  double previous = INFINITY;
  for (std::size_t n : {17u, 33u, 65u}) {
    const auto r = spectrum_check(phi, kWeight, n, compact_options(5));
    CHECK(r.top_k_max_distance <= previous + 1e-8);
    previous = r.top_k_max_distance;
  }
}
