#pragma once

// Accretive-dissipative (AD) matrices: Cartesian decomposition A = B + iC,
// certification that both parts are positive definite, the 2x2 block
// partition, Schur complements and the structural lemmas built on them.

#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "adfischer/linalg.hpp"

namespace adfischer {

// Hermitian real and imaginary parts of a square matrix.
struct CartesianPair {
  HermitianMatrix real_part;  // (A + A*) / 2
  HermitianMatrix imag_part;  // (A - A*) / (2i)

  std::size_t order() const noexcept { return real_part.order(); }

  ComplexMatrix recombine() const {
    return real_part.matrix() + imag_part.matrix() * Complex(0.0, 1.0);
  }
};

inline CartesianPair cartesian_decompose(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("Cartesian decomposition requires a square matrix");
  const std::size_t n = a.rows();
  ComplexMatrix re(n, n), im(n, n);
  const Complex two_i(0.0, 2.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      re(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
      im(i, j) = (a(i, j) - std::conj(a(j, i))) / two_i;
    }
  return {HermitianMatrix(re), HermitianMatrix(im)};
}

struct ADCertificate {
  bool is_ad = false;
  PDCertificate real_part;
  PDCertificate imag_part;
};

inline ADCertificate is_accretive_dissipative(const ComplexMatrix& a, double tol = kDefaultPdTol) {
  const auto pair = cartesian_decompose(a);
  ADCertificate cert{false, cholesky_pd(pair.real_part, tol), cholesky_pd(pair.imag_part, tol)};
  cert.is_ad = cert.real_part.is_pd && cert.imag_part.is_pd;
  return cert;
}

// Thrown by partition() when the input is not certified AD; carries the
// failing certificates for reporting.
class NotAccretiveDissipativeError : public DomainError {
 public:
  explicit NotAccretiveDissipativeError(ADCertificate cert)
      : DomainError(describe(cert)), cert_(cert) {}
  const ADCertificate& certificate() const noexcept { return cert_; }

 private:
  static std::string describe(const ADCertificate& c) {
    std::string s = "matrix is not accretive-dissipative:";
    if (!c.real_part.is_pd)
      s += " real part fails PD test (min pivot " + std::to_string(c.real_part.min_pivot) + ")";
    if (!c.imag_part.is_pd)
      s += " imaginary part fails PD test (min pivot " + std::to_string(c.imag_part.min_pivot) + ")";
    return s;
  }
  ADCertificate cert_;
};

// Certified AD matrix with a 2x2 block split: leading block of order k,
// trailing block of order l = n - k, m = min(k, l). Only partition() builds one.
class PartitionedAD {
 public:
  const ComplexMatrix& matrix() const noexcept { return a_; }
  const CartesianPair& parts() const noexcept { return parts_; }
  const ADCertificate& certificate() const noexcept { return cert_; }

  std::size_t n() const noexcept { return a_.rows(); }
  std::size_t k() const noexcept { return k_; }
  std::size_t l() const noexcept { return a_.rows() - k_; }
  std::size_t m() const noexcept { return std::min(k(), l()); }
  double tolerance() const noexcept { return tol_; }

  ComplexMatrix a11() const { return a_.block(0, 0, k(), k()); }
  ComplexMatrix a12() const { return a_.block(0, k(), k(), l()); }
  ComplexMatrix a21() const { return a_.block(k(), 0, l(), k()); }
  ComplexMatrix a22() const { return a_.block(k(), k(), l(), l()); }

  HermitianMatrix b11() const { return HermitianMatrix(parts_.real_part.matrix().block(0, 0, k(), k())); }
  ComplexMatrix b12() const { return parts_.real_part.matrix().block(0, k(), k(), l()); }
  HermitianMatrix b22() const { return HermitianMatrix(parts_.real_part.matrix().block(k(), k(), l(), l())); }
  HermitianMatrix c11() const { return HermitianMatrix(parts_.imag_part.matrix().block(0, 0, k(), k())); }
  ComplexMatrix c12() const { return parts_.imag_part.matrix().block(0, k(), k(), l()); }
  HermitianMatrix c22() const { return HermitianMatrix(parts_.imag_part.matrix().block(k(), k(), l(), l())); }

  // The same matrix under the symmetric permutation that moves the trailing
  // block first, so the new leading block has order l.
  PartitionedAD swapped() const {
    const std::size_t nn = n();
    std::vector<std::size_t> order(nn);
    for (std::size_t i = 0; i < nn; ++i) order[i] = (i + k_) % nn;
    ComplexMatrix p(nn, nn);
    for (std::size_t i = 0; i < nn; ++i)
      for (std::size_t j = 0; j < nn; ++j) p(i, j) = a_(order[i], order[j]);
    // Permutation similarity preserves both parts exactly; the certificate carries over.
    return PartitionedAD(std::move(p), l(), tol_, cert_);
  }

 private:
  PartitionedAD(ComplexMatrix a, std::size_t k, double tol, ADCertificate cert)
      : a_(std::move(a)), parts_(cartesian_decompose(a_)), k_(k), tol_(tol), cert_(cert) {}

  friend PartitionedAD partition(const ComplexMatrix& a, std::size_t k, double tol);

  ComplexMatrix a_;
  CartesianPair parts_;
  std::size_t k_;
  double tol_;
  ADCertificate cert_;
};

inline PartitionedAD partition(const ComplexMatrix& a, std::size_t k, double tol = kDefaultPdTol) {
  if (!a.is_square()) throw DimensionError("partition requires a square matrix");
  if (k < 1 || k >= a.rows())
    throw DimensionError("block order k=" + std::to_string(k) + " outside [1, " +
                         std::to_string(a.rows() - 1) + "]");
  auto cert = is_accretive_dissipative(a, tol);
  if (!cert.is_ad) throw NotAccretiveDissipativeError(cert);
  return PartitionedAD(a, k, tol, cert);
}

// A/A11 = A22 - A21 A11^{-1} A12
inline ComplexMatrix schur_complement(const PartitionedAD& p) {
  return p.a22() - p.a21() * inverse(p.a11()) * p.a12();
}

// A^{-1} = E - iF with E = (B + C B^{-1} C)^{-1}, F = (C + B C^{-1} B)^{-1}.
struct InverseSplit {
  HermitianMatrix e;
  HermitianMatrix f;
  // |(B + iC)^{-1} - (E - iF)|_F / |(B + iC)^{-1}|_F
  double residual = 0;

  ComplexMatrix recombine() const { return e.matrix() - f.matrix() * Complex(0.0, 1.0); }
};

inline InverseSplit inverse_split(const CartesianPair& pair, double tol = kDefaultPdTol) {
  const auto& b = pair.real_part;
  const auto& c = pair.imag_part;
  if (!cholesky_pd(b, tol).is_pd) throw DomainError("inverse split: real part not positive definite");
  if (!cholesky_pd(c, tol).is_pd) throw DomainError("inverse split: imaginary part not positive definite");
  const auto b_inv = inverse(b);
  const auto c_inv = inverse(c);
  InverseSplit out{inverse(b + congruence(c.matrix(), b_inv)),
                   inverse(c + congruence(b.matrix(), c_inv)), 0.0};
  const auto direct = inverse(pair.recombine());
  out.residual = (direct - out.recombine()).frobenius_norm() / direct.frobenius_norm();
  return out;
}

// B + C B^{-1} C >= 2C for PD B and any Hermitian C.
inline LoewnerComparison lemma3_margin(const HermitianMatrix& b, const HermitianMatrix& c,
                                       double tol = kDefaultPdTol) {
  if (b.order() != c.order()) throw DimensionError("lemma 3 operands differ in order");
  if (!cholesky_pd(b).is_pd) throw DomainError("lemma 3 requires a positive definite B");
  return loewner_geq(b + congruence(c.matrix(), inverse(b)), 2.0 * c, tol);
}

// E_k <= C11^{-1}/2 and F_k <= B11^{-1}/2, with E_k, F_k from the leading
// block pair (B11, C11).
struct BlockInverseBounds {
  InverseSplit leading_split;
  LoewnerComparison e_bound;
  LoewnerComparison f_bound;
  bool holds() const noexcept { return e_bound.holds && f_bound.holds; }
};

inline BlockInverseBounds p1_check(const PartitionedAD& p, double tol = kDefaultPdTol) {
  const CartesianPair leading{p.b11(), p.c11()};
  auto split = inverse_split(leading, p.tolerance());
  const auto e_cap = 0.5 * inverse(leading.imag_part);
  const auto f_cap = 0.5 * inverse(leading.real_part);
  auto e_bound = loewner_geq(e_cap, split.e, tol);
  auto f_bound = loewner_geq(f_cap, split.f, tol);
  return {std::move(split), e_bound, f_bound};
}

}  // namespace adfischer
