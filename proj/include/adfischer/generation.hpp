#pragma once

// Reproducible generators for HPD and AD matrices, and the explicit
// two-by-two family whose Fischer ratio tends to 2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adfischer/ad_matrix.hpp"
#include "adfischer/random.hpp"

namespace adfischer {

enum class GenStyle { wishart_like, eigenvalue_prescribed, near_singular_part };

inline std::string_view to_string(GenStyle s) {
  switch (s) {
    case GenStyle::wishart_like: return "wishart-like";
    case GenStyle::eigenvalue_prescribed: return "eigenvalue-prescribed";
    case GenStyle::near_singular_part: return "near-singular-part";
  }
  return "?";
}

inline GenStyle gen_style_from_string(std::string_view s) {
  if (s == "wishart-like") return GenStyle::wishart_like;
  if (s == "eigenvalue-prescribed") return GenStyle::eigenvalue_prescribed;
  if (s == "near-singular-part") return GenStyle::near_singular_part;
  throw DomainError("unknown generation style '" + std::string(s) + "'");
}

struct GenSpec {
  std::size_t n = 2;
  std::uint64_t seed = 0;
  double condition_target = 10;  // ratio of extreme eigenvalues, >= 1
  GenStyle style = GenStyle::wishart_like;

  void validate() const {
    if (n < 1) throw DomainError("generation order must be positive");
    if (!(condition_target >= 1) || !std::isfinite(condition_target))
      throw DomainError("condition target must be a finite value >= 1");
  }
};

inline ComplexMatrix complex_gaussian(std::size_t rows, std::size_t cols, CounterRng& rng) {
  ComplexMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  return g;
}

// Haar unitary: Gram-Schmidt on a complex Gaussian matrix. The positive
// diagonal of the implied R factor fixes the column phases.
inline ComplexMatrix random_unitary(std::size_t n, CounterRng& rng) {
  ComplexMatrix q = complex_gaussian(n, n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < j; ++p) {
      Complex dot{};
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, p)) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, p);
    }
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

// U diag(spectrum) U* for a Haar-random U keyed by seed.
inline HermitianMatrix hpd_with_spectrum(std::span<const double> spectrum, std::uint64_t seed) {
  for (double v : spectrum)
    if (!(v > 0) || !std::isfinite(v)) throw DomainError("prescribed spectrum must be positive and finite");
  CounterRng rng(seed);
  const auto u = random_unitary(spectrum.size(), rng);
  ComplexMatrix scaled = u;
  for (std::size_t j = 0; j < spectrum.size(); ++j)
    for (std::size_t i = 0; i < spectrum.size(); ++i) scaled(i, j) *= spectrum[j];
  return HermitianMatrix(scaled * u.adjoint());
}

// Gaussian Hermitian matrix (not definite in general).
inline HermitianMatrix sample_hermitian(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  return HermitianMatrix(complex_gaussian(n, n, rng));
}

inline HermitianMatrix sample_hpd(const GenSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n;
  const double kappa = spec.condition_target;
  CounterRng rng(spec.seed);

  switch (spec.style) {
    case GenStyle::wishart_like: {
      if (kappa == 1.0 || n == 1) return HermitianMatrix::identity(n);
      const auto g = complex_gaussian(n, n, rng);
      const HermitianMatrix w(g.adjoint() * g);
      const auto eig = hermitian_eigenvalues(w);
      const double lo = eig.front(), hi = eig.back();
      if (!(hi > lo)) return HermitianMatrix::identity(n);
      // Shift so that (hi + d) / (lo + d) = kappa exactly (d may be negative),
      // then normalize the mean eigenvalue to 1.
      const double shift = (hi - kappa * lo) / (kappa - 1.0);
      ComplexMatrix shifted = w.matrix();
      double trace = 0;
      for (std::size_t i = 0; i < n; ++i) {
        shifted(i, i) += shift;
        trace += shifted(i, i).real();
      }
      return HermitianMatrix(shifted * Complex(static_cast<double>(n) / trace));
    }
    case GenStyle::eigenvalue_prescribed: {
      std::vector<double> spectrum(n);
      for (std::size_t j = 0; j < n; ++j) spectrum[j] = std::pow(kappa, rng.uniform());
      spectrum.front() = 1.0;
      if (n > 1) spectrum.back() = kappa;
      return hpd_with_spectrum(spectrum, rng());
    }
    case GenStyle::near_singular_part: {
      // One eigenvalue at 1/kappa, the rest clustered in [max(1/kappa, 1/2), 1].
      const double cluster_lo = std::max(1.0 / kappa, 0.5);
      std::vector<double> spectrum(n);
      for (std::size_t j = 0; j < n; ++j) spectrum[j] = std::pow(cluster_lo, rng.uniform());
      spectrum.front() = 1.0 / kappa;
      if (n > 1) spectrum.back() = 1.0;
      return hpd_with_spectrum(spectrum, rng());
    }
  }
  throw DomainError("unknown generation style");
}

// A = B + iC with B, C drawn independently.
inline ComplexMatrix sample_ad(const GenSpec& spec_real, const GenSpec& spec_imag) {
  if (spec_real.n != spec_imag.n) throw DimensionError("real and imaginary part orders differ");
  return CartesianPair{sample_hpd(spec_real), sample_hpd(spec_imag)}.recombine();
}

// ---------------------------------------------------------------------------
// The two-by-two family
//   A = [[(1+eps)(1+i), i-1], [i-1, (1+eps)(1+i)]]
// with rho(eps) = ((1+eps)^2 + 1) / (1+eps)^2 -> 2 as eps -> 0+.

struct ExampleParams {
  double epsilon = 1;

  void validate() const {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be a positive finite value");
  }
};

inline double example_ratio_closed_form(double epsilon) {
  const double s = (1 + epsilon) * (1 + epsilon);
  return (s + 1) / s;
}

inline ComplexMatrix example_family(const ExampleParams& p) {
  p.validate();
  const Complex diag = (1 + p.epsilon) * Complex(1, 1);
  const Complex off(-1, 1);
  return ComplexMatrix::from_rows({{diag, off}, {off, diag}});
}

// m copies of the 2x2 family placed across an (n, k) split: copy j occupies
// indices j (leading block) and k + j (trailing block), j < m = min(k, n-k).
// Remaining diagonal entries are 1 + i. rho = rho(eps)^m.
inline ComplexMatrix example_family_embedded(const ExampleParams& p, std::size_t n, std::size_t k) {
  p.validate();
  if (k < 1 || k >= n) throw DimensionError("embedding needs 1 <= k <= n-1");
  const std::size_t m = std::min(k, n - k);
  const auto cell = example_family(p);
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = Complex(1, 1);
  for (std::size_t j = 0; j < m; ++j) {
    a(j, j) = cell(0, 0);
    a(j, k + j) = cell(0, 1);
    a(k + j, j) = cell(1, 0);
    a(k + j, k + j) = cell(1, 1);
  }
  return a;
}

// Symmetric interleaving of m copies for the k = l = m split.
inline ComplexMatrix example_family_block(const ExampleParams& p, std::size_t m) {
  if (m < 1) throw DomainError("block count m must be positive");
  return example_family_embedded(p, 2 * m, m);
}

// ---------------------------------------------------------------------------
// Corpus draws

struct CorpusSpec {
  std::uint64_t seed = 0;
  std::size_t n_min = 2;
  std::size_t n_max = 8;
  double max_condition = 100;

  void validate() const {
    if (n_min < 2 || n_max < n_min) throw DomainError("corpus order range must satisfy 2 <= n_min <= n_max");
    if (!(max_condition >= 1)) throw DomainError("corpus condition cap must be >= 1");
  }
};

// Draw `index` of the corpus: order uniform in [n_min, n_max], per-part
// style uniform over the three styles, condition log-uniform in [1, cap].
inline ComplexMatrix corpus_matrix(const CorpusSpec& spec, std::uint64_t index) {
  spec.validate();
  CounterRng rng(derive_seed(spec.seed, index));
  const std::size_t n = spec.n_min + rng.below(spec.n_max - spec.n_min + 1);
  auto part = [&] {
    GenSpec g;
    g.n = n;
    g.style = static_cast<GenStyle>(rng.below(3));
    g.condition_target = std::pow(spec.max_condition, rng.uniform());
    g.seed = rng();
    return g;
  };
  const GenSpec re = part();
  const GenSpec im = part();
  return sample_ad(re, im);
}

}  // namespace adfischer
