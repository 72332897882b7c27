#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace entrodim {

// Truncated Taylor series c[0] + c[1] h + ... + c[K] h^K. Arithmetic on jets
// gives exact derivatives (up to rounding) of composed expressions.
template <std::size_t K>
struct Jet {
  std::array<double, K + 1> c{};

  static Jet variable(double x) {
    Jet j;
    j.c[0] = x;
    if constexpr (K >= 1) j.c[1] = 1;
    return j;
  }
  static Jet constant(double x) {
    Jet j;
    j.c[0] = x;
    return j;
  }

  // k-th derivative at the expansion point.
  double derivative(std::size_t k) const {
    double f = 1;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return c[k] * f;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t i = 0; i <= K; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t i = 0; i <= K; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend Jet operator-(const Jet& a) {
    Jet r;
    for (std::size_t i = 0; i <= K; ++i) r.c[i] = -a.c[i];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t i = 0; i <= K; ++i)
      for (std::size_t j = 0; i + j <= K; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t k = 0; k <= K; ++k) {
      double s = a.c[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
      r.c[k] = s / b.c[0];
    }
    return r;
  }
  friend Jet exp(const Jet& a) {
    Jet r;
    r.c[0] = std::exp(a.c[0]);
    for (std::size_t k = 1; k <= K; ++k) {
      double s = 0;
      for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c[j] * r.c[k - j];
      r.c[k] = s / static_cast<double>(k);
    }
    return r;
  }
};

}  // namespace entrodim
