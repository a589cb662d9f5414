#pragma once

#include <cstddef>

#include "ddlab/calculus.hpp"

namespace ddlab::families {

/// alpha z + beta
SeriesFunction affine(Complex alpha, Complex beta, DomainSet domain);
/// scale * z^power
SeriesFunction monomial(std::size_t power, Complex scale, DomainSet domain);
/// (1 + x^2) / 2 on [0, 1]
SeriesFunction counterexample_interval();
/// (z + C) / (1 + C) on the closed disc
SeriesFunction gadget_disc(double c);

/// exp(c (z^2 - 1) / z) evaluated in closed form.
Complex wermer_value(double c, Complex z);
/// Laurent truncation of degree `degree` of the circle map exp(c (z^2 - 1) / z),
/// from 2^m samples with 2^m >= 16 (degree + 1).
SeriesFunction wermer_circle(double c, std::size_t degree);
/// exp((1 / (2A)) (z^2 - 1) / z), i.e. the Wermer map with c = 1 / (2A).
SeriesFunction gadget_circle(double a, std::size_t degree);

/// sum_{k <= degree} z^k / k!
SeriesFunction truncated_exp(std::size_t degree, DomainSet domain);

}  // namespace ddlab::families
