#pragma once

// Dense complex and Hermitian matrix primitives: LU determinants and
// inverses, Cholesky positive-definiteness certificates, cyclic Jacobi
// eigenvalues, HPD square roots and Loewner-order comparisons.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adfischer/errors.hpp"

namespace adfischer {

using Complex = std::complex<double>;

inline constexpr double kDefaultPdTol = 1e-10;
inline constexpr double kDefaultPivotTol = 64 * std::numeric_limits<double>::epsilon();
inline constexpr double kJacobiOffTol = 1e-14;
inline constexpr int kDefaultJacobiSweeps = 100;

namespace detail {

template <class Scalar>
bool is_finite_scalar(const Scalar& z) {
  return std::isfinite(static_cast<long double>(z.real())) &&
         std::isfinite(static_cast<long double>(z.imag()));
}

}  // namespace detail

// Row-major dense complex matrix. Rows and columns are at least one and every
// entry is finite when the matrix is built from explicit data.
template <class Scalar>
class DenseMatrix {
 public:
  using value_type = Scalar;
  using real_type = typename Scalar::value_type;

  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
    data_.assign(rows * cols, Scalar{});
  }

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
    if (data_.size() != rows * cols)
      throw DimensionError("entry count " + std::to_string(data_.size()) + " does not match " +
                           std::to_string(rows) + "x" + std::to_string(cols));
    for (const auto& z : data_)
      if (!detail::is_finite_scalar(z)) throw DomainError("matrix entries must be finite");
  }

  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<Scalar>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Scalar> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) throw DimensionError("ragged row list");
      entries.insert(entries.end(), row.begin(), row.end());
    }
    return DenseMatrix(r, c, std::move(entries));
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }

  static DenseMatrix diagonal(std::span<const Scalar> diag) {
    DenseMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Scalar> entries() const noexcept { return data_; }

  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block outside matrix");
    DenseMatrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  void set_block(std::size_t r0, std::size_t c0, const DenseMatrix& src) {
    if (r0 + src.rows() > rows_ || c0 + src.cols() > cols_)
      throw DimensionError("block outside matrix");
    for (std::size_t i = 0; i < src.rows(); ++i)
      for (std::size_t j = 0; j < src.cols(); ++j) (*this)(r0 + i, c0 + j) = src(i, j);
  }

  DenseMatrix adjoint() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  real_type frobenius_norm() const {
    real_type s = 0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  real_type max_abs() const {
    real_type s = 0;
    for (const auto& z : data_) s = std::max(s, std::abs(z));
    return s;
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  DenseMatrix& operator*=(const Scalar& s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(DenseMatrix a, const Scalar& s) { return a *= s; }
  friend DenseMatrix operator*(const Scalar& s, DenseMatrix a) { return a *= s; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("inner dimensions differ in product");
    DenseMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t p = 0; p < a.cols_; ++p) {
        const Scalar aip = a(i, p);
        if (aip == Scalar{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aip * b(p, j);
      }
    return out;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

  template <class Other>
  DenseMatrix<Other> cast() const {
    std::vector<Other> entries;
    entries.reserve(data_.size());
    for (const auto& z : data_)
      entries.emplace_back(static_cast<typename Other::value_type>(z.real()),
                           static_cast<typename Other::value_type>(z.imag()));
    return DenseMatrix<Other>(rows_, cols_, std::move(entries));
  }

 private:
  void require_same_shape(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shapes differ");
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

using ComplexMatrix = DenseMatrix<Complex>;

// ---------------------------------------------------------------------------
// LU with partial pivoting

template <class Scalar>
struct LuFactors {
  DenseMatrix<Scalar> packed;  // unit-lower L below the diagonal, U on and above
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;  // an exactly zero pivot column was met
  typename Scalar::value_type min_pivot_abs = 0;
};

template <class Scalar>
LuFactors<Scalar> lu_factor(const DenseMatrix<Scalar>& m) {
  using Real = typename Scalar::value_type;
  if (!m.is_square()) throw DimensionError("LU requires a square matrix");
  const std::size_t n = m.rows();
  LuFactors<Scalar> lu{m, std::vector<std::size_t>(n), 1, false,
                       std::numeric_limits<Real>::infinity()};
  std::iota(lu.perm.begin(), lu.perm.end(), std::size_t{0});
  auto& a = lu.packed;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    Real best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const Real v = std::abs(a(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    lu.min_pivot_abs = std::min(lu.min_pivot_abs, best);
    if (best == Real(0)) {
      lu.singular = true;
      continue;
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(lu.perm[col], lu.perm[piv]);
      lu.sign = -lu.sign;
    }
    const Scalar pivot = a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Scalar f = a(r, col) / pivot;
      a(r, col) = f;
      if (f == Scalar{}) continue;
      for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return lu;
}

template <class Scalar>
Scalar det(const DenseMatrix<Scalar>& m) {
  const auto lu = lu_factor(m);
  if (lu.singular) return Scalar{};
  Scalar d(static_cast<typename Scalar::value_type>(lu.sign));
  for (std::size_t i = 0; i < m.rows(); ++i) d *= lu.packed(i, i);
  return d;
}

// log|det M|, finite for nonsingular M regardless of over/underflow of det M.
template <class Scalar>
typename Scalar::value_type log_abs_det(const DenseMatrix<Scalar>& m) {
  using Real = typename Scalar::value_type;
  const auto lu = lu_factor(m);
  if (lu.singular) return -std::numeric_limits<Real>::infinity();
  Real s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += std::log(std::abs(lu.packed(i, i)));
  return s;
}

// Permutation expansion of the determinant. Exponential cost: small orders only.
template <class Scalar>
Scalar leibniz_det(const DenseMatrix<Scalar>& m) {
  if (!m.is_square()) throw DimensionError("determinant requires a square matrix");
  if (m.rows() > 8) throw DimensionError("permutation expansion limited to order 8");
  const std::size_t n = m.rows();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  Scalar total{};
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += p[i] > p[j];
    Scalar term(1);
    for (std::size_t i = 0; i < n; ++i) term *= m(i, p[i]);
    total += (inversions % 2 == 0) ? term : -term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

// Inverse via LU. A pivot at or below pivot_tol * max|M| is a singularity.
template <class Scalar>
DenseMatrix<Scalar> inverse(const DenseMatrix<Scalar>& m, double pivot_tol = kDefaultPivotTol) {
  const auto lu = lu_factor(m);
  const std::size_t n = m.rows();
  const double threshold = pivot_tol * static_cast<double>(m.max_abs());
  if (lu.singular || static_cast<double>(lu.min_pivot_abs) <= threshold)
    throw SingularityError("matrix is singular to working tolerance",
                           static_cast<double>(lu.singular ? 0 : lu.min_pivot_abs));
  DenseMatrix<Scalar> out(n, n);
  std::vector<Scalar> x(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) x[i] = lu.perm[i] == col ? Scalar(1) : Scalar{};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu.packed(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu.packed(i, j) * x[j];
      x[i] /= lu.packed(i, i);
    }
    for (std::size_t i = 0; i < n; ++i) out(i, col) = x[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian matrices

// Complex square matrix with exact conjugate symmetry and a real diagonal.
// Construction from a general matrix symmetrizes it as (M + M*)/2.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m) : m_(m) {
    if (!m.is_square()) throw DimensionError("Hermitian matrix must be square");
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i) {
      m_(i, i) = Complex(m(i, i).real(), 0.0);
      for (std::size_t j = i + 1; j < n; ++j) {
        const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
        m_(i, j) = v;
        m_(j, i) = std::conj(v);
      }
    }
  }

  static HermitianMatrix identity(std::size_t n) { return HermitianMatrix(ComplexMatrix::identity(n)); }

  static HermitianMatrix diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return HermitianMatrix(m);
  }

  static HermitianMatrix zero(std::size_t n) { return HermitianMatrix(ComplexMatrix(n, n)); }

  std::size_t order() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  double frobenius_norm() const { return m_.frobenius_norm(); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.m_ + b.m_);
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.m_ - b.m_);
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) {
    return HermitianMatrix(a.m_ * Complex(s));
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a) { return -1.0 * a; }
  friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

 private:
  ComplexMatrix m_;
};

// T* H T
inline HermitianMatrix congruence(const ComplexMatrix& t, const HermitianMatrix& h) {
  return HermitianMatrix(t.adjoint() * h.matrix() * t);
}

inline HermitianMatrix inverse(const HermitianMatrix& h, double pivot_tol = kDefaultPivotTol) {
  return HermitianMatrix(inverse(h.matrix(), pivot_tol));
}

inline double det(const HermitianMatrix& h) { return det(h.matrix()).real(); }

// ---------------------------------------------------------------------------
// Positive definiteness

struct PDCertificate {
  bool is_pd = false;
  double min_pivot = 0;       // smallest Cholesky pivot reached (before the square root)
  double scale = 0;           // max |diagonal entry|
  double tolerance_used = 0;  // tol; the decision threshold is tol * scale
  double threshold() const noexcept { return tolerance_used * scale; }
};

inline PDCertificate cholesky_pd(const HermitianMatrix& h, double tol = kDefaultPdTol) {
  if (!(tol >= 0)) throw DomainError("PD tolerance must be non-negative");
  const std::size_t n = h.order();
  PDCertificate cert;
  cert.tolerance_used = tol;
  for (std::size_t i = 0; i < n; ++i) cert.scale = std::max(cert.scale, std::abs(h(i, i).real()));
  const double threshold = tol * cert.scale;

  ComplexMatrix l(n, n);
  cert.min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double d = h(j, j).real();
    for (std::size_t p = 0; p < j; ++p) d -= std::norm(l(j, p));
    cert.min_pivot = std::min(cert.min_pivot, d);
    if (!(d > threshold)) {
      cert.is_pd = false;
      return cert;
    }
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = h(i, j);
      for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * std::conj(l(j, p));
      l(i, j) = s / root;
    }
  }
  cert.is_pd = true;
  return cert;
}

// Lower Cholesky factor L with H = L L*. Throws DomainError when H fails cholesky_pd.
inline ComplexMatrix cholesky_factor(const HermitianMatrix& h, double tol = kDefaultPdTol) {
  if (!cholesky_pd(h, tol).is_pd) throw DomainError("matrix is not positive definite");
  const std::size_t n = h.order();
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = h(j, j).real();
    for (std::size_t p = 0; p < j; ++p) d -= std::norm(l(j, p));
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = h(i, j);
      for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * std::conj(l(j, p));
      l(i, j) = s / root;
    }
  }
  return l;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi eigensolver

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column j pairs with values[j]
  int sweeps = 0;
};

inline EigenDecomposition hermitian_eigen(const HermitianMatrix& h,
                                          int max_sweeps = kDefaultJacobiSweeps) {
  const std::size_t n = h.order();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double target = kJacobiOffTol * h.frobenius_norm();

  auto off_mass = [&] {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  int sweeps = 0;
  while (off_mass() > target) {
    if (sweeps == max_sweeps)
      throw ConvergenceError("Jacobi eigensolver did not converge in " +
                             std::to_string(max_sweeps) + " sweeps");
    ++sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        // Phase-rotate a(p,q) onto the positive real axis, then apply the
        // real symmetric rotation that annihilates it.
        const Complex phase = a(p, q) / mag;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex jpp = c, jpq = s, jqp = -s * std::conj(phase), jqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = a(q, p) = Complex{};
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n), sweeps};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

inline std::vector<double> hermitian_eigenvalues(const HermitianMatrix& h,
                                                 int max_sweeps = kDefaultJacobiSweeps) {
  return hermitian_eigen(h, max_sweeps).values;
}

namespace detail {

template <class F>
HermitianMatrix spectral_map(const EigenDecomposition& eig, F&& f) {
  const std::size_t n = eig.values.size();
  ComplexMatrix scaled = eig.vectors;
  for (std::size_t j = 0; j < n; ++j) {
    const double fj = f(eig.values[j]);
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= fj;
  }
  return HermitianMatrix(scaled * eig.vectors.adjoint());
}

}  // namespace detail

// Unique HPD square root. Throws DomainError when H fails cholesky_pd at tol.
inline HermitianMatrix hpd_sqrt(const HermitianMatrix& h, double tol = kDefaultPdTol) {
  if (!cholesky_pd(h, tol).is_pd) throw DomainError("square root requires a positive definite matrix");
  return detail::spectral_map(hermitian_eigen(h), [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

// H^(-1/2) for HPD H.
inline HermitianMatrix hpd_inverse_sqrt(const HermitianMatrix& h, double tol = kDefaultPdTol) {
  if (!cholesky_pd(h, tol).is_pd)
    throw DomainError("inverse square root requires a positive definite matrix");
  return detail::spectral_map(hermitian_eigen(h), [](double x) { return 1.0 / std::sqrt(x); });
}

// ---------------------------------------------------------------------------
// Loewner order

struct LoewnerComparison {
  bool holds = false;
  double margin = 0;  // min eigenvalue of X - Y
  double scale = 1;   // max(|X|_F, |Y|_F, 1)
};

// X >= Y in the Loewner order, up to tol * max(|X|_F, |Y|_F, 1).
inline LoewnerComparison loewner_geq(const HermitianMatrix& x, const HermitianMatrix& y,
                                     double tol = kDefaultPdTol) {
  if (x.order() != y.order()) throw DimensionError("Loewner comparison of different orders");
  LoewnerComparison out;
  out.scale = std::max({x.frobenius_norm(), y.frobenius_norm(), 1.0});
  out.margin = hermitian_eigenvalues(x - y).front();
  out.holds = out.margin >= -tol * out.scale;
  return out;
}

}  // namespace adfischer
