#pragma once

// Test-only reference computations, written independently of the library's
// LU, Jacobi and generator code paths.

#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "adfischer/linalg.hpp"

namespace oracle {

using adfischer::Complex;
using adfischer::ComplexMatrix;
using adfischer::HermitianMatrix;

// Leibniz sum over all permutations, generated by Heap's algorithm with an
// explicit parity flip per swap.
inline Complex leibniz(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n), c(n, 0);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  int sign = 1;
  auto term = [&] {
    Complex t(1, 0);
    for (std::size_t i = 0; i < n; ++i) t *= m(i, perm[i]);
    return static_cast<double>(sign) * t;
  };
  Complex sum = term();
  std::size_t i = 1;
  while (i < n) {
    if (c[i] < i) {
      std::swap(perm[i % 2 == 0 ? 0 : c[i]], perm[i]);
      sign = -sign;
      sum += term();
      ++c[i];
      i = 1;
    } else {
      c[i] = 0;
      ++i;
    }
  }
  return sum;
}

// Independent source of randomness for test inputs.
class Gen {
 public:
  explicit Gen(unsigned long long seed) : eng_(seed) {}

  double normal() { return nd_(eng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  std::size_t integer(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
  }
  Complex cnormal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  ComplexMatrix matrix(std::size_t r, std::size_t c) {
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = cnormal();
    return m;
  }

  // Diagonally shifted Gaussian matrix: comfortably nonsingular.
  ComplexMatrix well_conditioned(std::size_t n) {
    ComplexMatrix m = matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += Complex(2.0 * static_cast<double>(n), 0);
    return m;
  }

  HermitianMatrix hermitian(std::size_t n) { return HermitianMatrix(matrix(n, n)); }

  // G G* + shift I
  HermitianMatrix hpd(std::size_t n, double shift = 0.1) {
    const auto g = matrix(n, n);
    ComplexMatrix h = g * g.adjoint();
    for (std::size_t i = 0; i < n; ++i) h(i, i) += shift;
    return HermitianMatrix(h);
  }

  ComplexMatrix ad(std::size_t n) {
    return hpd(n).matrix() + hpd(n).matrix() * Complex(0, 1);
  }

  // Householder reflector I - 2 v v* / (v* v): unitary and Hermitian.
  ComplexMatrix householder(std::size_t n) {
    std::vector<Complex> v(n);
    double nn = 0;
    for (auto& x : v) {
      x = cnormal();
      nn += std::norm(x);
    }
    ComplexMatrix h = ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) -= 2.0 * v[i] * std::conj(v[j]) / nn;
    return h;
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> nd_;
};

inline double rel_diff(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double frob_rel(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).frobenius_norm() / b.frobenius_norm();
}

}  // namespace oracle
