#pragma once

// Reference computations for the tests. Each one takes a different route
// from the library: enumeration instead of recurrences, dense sampling
// instead of brackets, special functions instead of FFTs.

#include <utility>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Poly = std::vector<Complex>;

inline double log_factorial(unsigned n) {
  long double acc = 0.0L;
  for (unsigned k = 2; k <= n; ++k) acc += std::log(static_cast<long double>(k));
  return static_cast<double>(acc);
}

inline double binomial(unsigned n, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Calls `visit` with every set partition of {0..n-1}, as block sizes.
inline void for_each_partition(unsigned n, const std::function<void(const std::vector<unsigned>&)>& visit) {
  std::vector<unsigned> label(n, 0);
  std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned blocks) {
    if (i == n) {
      std::vector<unsigned> sizes(blocks, 0);
      for (unsigned l : label) ++sizes[l];
      visit(sizes);
      return;
    }
    for (unsigned b = 0; b <= blocks; ++b) {
      label[i] = b;
      rec(i + 1, b == blocks ? blocks + 1 : blocks);
    }
  };
  if (n == 0) {
    visit({});
    return;
  }
  rec(0, 0);
}

inline std::uint64_t bell_number(unsigned n) {
  std::uint64_t count = 0;
  for_each_partition(n, [&](const std::vector<unsigned>&) { ++count; });
  return count;
}

/// (f o g)^(n) from f^(k)(g(a)) and g^(k)(a), summed over set partitions.
inline Complex chain_rule(const std::vector<Complex>& f_derivs, const std::vector<Complex>& g_derivs, unsigned n) {
  Complex total = 0.0;
  for_each_partition(n, [&](const std::vector<unsigned>& sizes) {
    Complex term = f_derivs[sizes.size()];
    for (unsigned s : sizes) term *= g_derivs[s];
    total += term;
  });
  return total;
}

inline Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

/// sum_k a_k p^k by explicit powers.
inline Poly compose(const Poly& a, const Poly& p) {
  Poly out{a[0]};
  Poly power{1.0};
  for (std::size_t k = 1; k < a.size(); ++k) {
    power = multiply(power, p);
    if (out.size() < power.size()) out.resize(power.size(), 0.0);
    for (std::size_t i = 0; i < power.size(); ++i) out[i] += a[k] * power[i];
  }
  return out;
}

inline Poly derivative(const Poly& a, unsigned n = 1) {
  Poly out = a;
  for (unsigned t = 0; t < n; ++t) {
    if (out.size() <= 1) return {0.0};
    Poly next(out.size() - 1);
    for (std::size_t i = 1; i < out.size(); ++i) next[i - 1] = out[i] * static_cast<double>(i);
    out = std::move(next);
  }
  return out;
}

inline Complex evaluate(const Poly& a, Complex z) {
  Complex zk = 1.0, acc = 0.0;
  for (const auto& c : a) {
    acc += c * zk;
    zk *= z;
  }
  return acc;
}

/// All derivatives a^(m)(z), m = 0..n.
inline std::vector<Complex> derivatives_at(const Poly& a, Complex z, unsigned n) {
  std::vector<Complex> out;
  for (unsigned m = 0; m <= n; ++m) out.push_back(evaluate(derivative(a, m), z));
  return out;
}

/// Laurent coefficient of z^k for exp(c (z - 1/z)): J_k(2c).
inline double wermer_coefficient(double c, int k) {
  const double j = std::cyl_bessel_j(static_cast<double>(std::abs(k)), 2.0 * c);
  return (k < 0 && (k % 2 != 0)) ? -j : j;
}

inline Poly random_poly(std::mt19937_64& rng, unsigned degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Poly p(degree + 1);
  for (auto& c : p) {
    const double re = u(rng);
    c = Complex(re, u(rng));
  }
  return p;
}

enum class Set { interval, disc, circle };

/// max |f| over a dense sample of the set (disc: boundary, by the maximum principle).
template <class F>
double dense_sup(F&& f, Set set, unsigned samples = 20000) {
  double m = 0.0;
  for (unsigned j = 0; j <= samples; ++j) {
    Complex z;
    if (set == Set::interval) {
      z = static_cast<double>(j) / samples;
    } else {
      z = std::polar(1.0, 2.0 * std::numbers::pi * j / samples);
    }
    m = std::max(m, std::abs(f(z)));
  }
  return m;
}

}  // namespace oracle
