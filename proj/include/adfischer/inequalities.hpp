#pragma once

// Fischer-type bounds for AD matrices: the ratio |det A| / (|det A11| |det A22|),
// the three candidate bound factors, the two-sided determinant bound for
// B + iC, and step-by-step verifiers of the two bound derivations.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "adfischer/ad_matrix.hpp"

namespace adfischer {

inline constexpr double kDefaultIneqTol = 1e-9;

struct Tolerances {
  double pd = kDefaultPdTol;      // relative Cholesky pivot threshold
  double ineq = kDefaultIneqTol;  // relative slack allowed on every inequality
};

// Bound factors for an (n, k) split, m = min(k, n - k).
struct BoundSet {
  std::size_t n = 0, k = 0, l = 0, m = 0;
  double fischer = 1;     // PD case
  double ikramov = 0;     // 3^m
  double lin_a = 0;       // 2^(3m/2) if 3m <= n, else 2^(n/2)
  double conjecture = 0;  // 2^m

  friend bool operator==(const BoundSet&, const BoundSet&) = default;
};

inline BoundSet bounds_for(std::size_t n, std::size_t k) {
  if (n < 2 || k < 1 || k >= n)
    throw DimensionError("bounds need 1 <= k <= n-1 (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  BoundSet b;
  b.n = n;
  b.k = k;
  b.l = n - k;
  b.m = std::min(b.k, b.l);
  const double m = static_cast<double>(b.m);
  b.ikramov = std::pow(3.0, m);
  b.lin_a = (3 * b.m <= n) ? std::pow(2.0, 1.5 * m) : std::pow(2.0, 0.5 * static_cast<double>(n));
  b.conjecture = std::pow(2.0, m);
  return b;
}

// rho = |det A| / (|det A11| |det A22|), evaluated through log-determinants.
inline double fischer_ratio(const PartitionedAD& p) {
  const double la = log_abs_det(p.matrix());
  const double l11 = log_abs_det(p.a11());
  const double l22 = log_abs_det(p.a22());
  if (!std::isfinite(l11) || !std::isfinite(l22) || !std::isfinite(la))
    throw DegenerateInstanceError("a block determinant vanished; Fischer ratio undefined");
  return std::exp(la - l11 - l22);
}

// ---------------------------------------------------------------------------
// Two-sided bound |det(B+iC)| <= det(B+C) <= 2^(n/2) |det(B+iC)|

struct EigenTriple {
  double lambda = 0;
  double modulus = 0;     // |1 + i lambda|
  double shifted = 0;     // 1 + lambda
  double scaled_mod = 0;  // sqrt(2) |1 + i lambda|
  bool holds = false;
};

struct Lemma4Report {
  std::size_t n = 0;
  std::vector<double> lambdas;  // eigenvalues of B^{-1/2} C B^{-1/2}, ascending
  double lhs = 0;               // |det(B + iC)|
  double mid = 0;               // det(B + C)
  double rhs = 0;               // 2^(n/2) |det(B + iC)|
  double lower_margin = 0;      // (mid - lhs) / max(lhs, mid)
  double upper_margin = 0;      // (rhs - mid) / max(mid, rhs)
  std::vector<EigenTriple> scalar_checks;
  bool pass = false;
};

inline Lemma4Report lemma4_verify(const CartesianPair& pair, const Tolerances& tol = {}) {
  const auto& b = pair.real_part;
  const auto& c = pair.imag_part;
  if (!cholesky_pd(b, tol.pd).is_pd) throw DomainError("two-sided bound requires a positive definite B");
  if (!loewner_geq(c, HermitianMatrix::zero(c.order()), tol.pd).holds)
    throw DomainError("two-sided bound requires a positive semidefinite C");

  Lemma4Report r;
  r.n = b.order();
  const auto b_isqrt = hpd_inverse_sqrt(b, tol.pd);
  r.lambdas = hermitian_eigenvalues(congruence(b_isqrt.matrix(), c));
  r.lhs = std::abs(det(pair.recombine()));
  r.mid = det(b + c);
  r.rhs = std::pow(2.0, 0.5 * static_cast<double>(r.n)) * r.lhs;
  r.lower_margin = (r.mid - r.lhs) / std::max(r.lhs, r.mid);
  r.upper_margin = (r.rhs - r.mid) / std::max(r.mid, r.rhs);

  bool all = r.lower_margin >= -tol.ineq && r.upper_margin >= -tol.ineq;
  for (double lam : r.lambdas) {
    EigenTriple t{lam, std::hypot(1.0, lam), 1.0 + lam, std::sqrt(2.0) * std::hypot(1.0, lam), false};
    t.holds = t.shifted - t.modulus >= -tol.ineq * t.shifted &&
              t.scaled_mod - t.shifted >= -tol.ineq * t.scaled_mod;
    all = all && t.holds;
    r.scalar_checks.push_back(t);
  }
  r.pass = all;
  return r;
}

// ---------------------------------------------------------------------------
// Proof-chain reports

enum class StepKind { scalar, loewner };

inline const char* to_string(StepKind k) { return k == StepKind::scalar ? "scalar" : "loewner"; }

struct ChainStep {
  std::string description;
  StepKind kind = StepKind::scalar;
  // Scalar steps: the two sides. Loewner steps: Frobenius norms of the two sides.
  double lhs = 0;
  double rhs = 0;
  double margin = 0;      // normalized: raw_margin / max(|lhs|, |rhs|, 1)
  double raw_margin = 0;  // rhs - lhs, or min eigenvalue of (rhs - lhs)
  bool pass = false;      // margin >= -tol
  bool strict = false;    // margin > +tol

  friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

struct ChainReport {
  std::string chain_name;
  std::string orientation = "as_given";  // or "swapped" when blocks were exchanged
  std::vector<ChainStep> steps;
  bool overall_pass = false;

  const ChainStep* tightest() const {
    const ChainStep* best = nullptr;
    for (const auto& s : steps)
      if (!best || s.margin < best->margin) best = &s;
    return best;
  }

  friend bool operator==(const ChainReport&, const ChainReport&) = default;
};

namespace detail {

inline ChainStep scalar_step(std::string what, double lhs, double rhs, double tol) {
  ChainStep s{std::move(what), StepKind::scalar, lhs, rhs};
  s.raw_margin = rhs - lhs;
  s.margin = s.raw_margin / std::max({std::abs(lhs), std::abs(rhs), 1.0});
  s.pass = s.margin >= -tol;
  s.strict = s.margin > tol;
  return s;
}

// Records "smaller <= larger" in the Loewner order.
inline ChainStep loewner_step(std::string what, const HermitianMatrix& smaller,
                              const HermitianMatrix& larger, double tol) {
  const auto cmp = loewner_geq(larger, smaller, tol);
  ChainStep s{std::move(what), StepKind::loewner, smaller.frobenius_norm(), larger.frobenius_norm()};
  s.raw_margin = cmp.margin;
  s.margin = cmp.margin / cmp.scale;
  s.pass = s.margin >= -tol;
  s.strict = s.margin > tol;
  return s;
}

inline void finish(ChainReport& r) {
  r.overall_pass = true;
  for (const auto& s : r.steps) r.overall_pass = r.overall_pass && s.pass;
}

inline HermitianMatrix hermitian_sum(const ComplexMatrix& x, const ComplexMatrix& y) {
  return HermitianMatrix(x + y);
}

}  // namespace detail

// |det A| <= det(B+C) <= det(B11+C11) det(B22+C22)
//        <= 2^(k/2)|det A11| 2^(l/2)|det A22| = 2^(n/2)|det A11||det A22|
inline ChainReport theorem3_chain(const PartitionedAD& p, const Tolerances& tol = {}) {
  using detail::scalar_step;
  const auto& pair = p.parts();
  const double det_a = std::abs(det(p.matrix()));
  const double det_a11 = std::abs(det(p.a11()));
  const double det_a22 = std::abs(det(p.a22()));
  if (det_a11 == 0.0 || det_a22 == 0.0) throw DegenerateInstanceError("diagonal block determinant vanished");

  const double det_sum = det(pair.real_part + pair.imag_part);
  const double det_blocks = det(p.b11() + p.c11()) * det(p.b22() + p.c22());
  const double half_k = std::pow(2.0, 0.5 * static_cast<double>(p.k()));
  const double half_l = std::pow(2.0, 0.5 * static_cast<double>(p.l()));
  const double capped = half_k * det_a11 * half_l * det_a22;

  ChainReport r{"theorem3", "as_given", {}, false};
  r.steps.push_back(scalar_step("|det A| <= det(B+C)", det_a, det_sum, tol.ineq));
  r.steps.push_back(scalar_step("det(B+C) <= det(B11+C11) det(B22+C22)", det_sum, det_blocks, tol.ineq));
  r.steps.push_back(scalar_step("det(B11+C11) det(B22+C22) <= 2^(k/2)|det A11| 2^(l/2)|det A22|",
                                det_blocks, capped, tol.ineq));
  r.steps.push_back(scalar_step("|det A| <= 2^(n/2)|det A11||det A22|", det_a,
                                std::pow(2.0, 0.5 * static_cast<double>(p.n())) * det_a11 * det_a22,
                                tol.ineq));
  detail::finish(r);
  return r;
}

// A/A11 = R + iS, assembled from E_k, F_k of the leading block pair.
struct SchurParts {
  HermitianMatrix real_part;  // R
  HermitianMatrix imag_part;  // S
  double residual = 0;        // |R + iS - A/A11|_F / |A/A11|_F

  ComplexMatrix recombine() const {
    return real_part.matrix() + imag_part.matrix() * Complex(0.0, 1.0);
  }
};

namespace detail {

// X* M Y
inline ComplexMatrix sandwich(const ComplexMatrix& x, const HermitianMatrix& m, const ComplexMatrix& y) {
  return x.adjoint() * m.matrix() * y;
}

inline SchurParts schur_parts_from(const PartitionedAD& p, const InverseSplit& split) {
  const auto b12 = p.b12();
  const auto c12 = p.c12();
  const auto& e = split.e;
  const auto& f = split.f;
  // R = B22 - B12*E B12 + C12*E C12 - B12*F C12 - C12*F B12
  ComplexMatrix r = p.b22().matrix() - sandwich(b12, e, b12) + sandwich(c12, e, c12) -
                    sandwich(b12, f, c12) - sandwich(c12, f, b12);
  // S = C22 + B12*F B12 - C12*F C12 - C12*E B12 - B12*E C12
  ComplexMatrix s = p.c22().matrix() + sandwich(b12, f, b12) - sandwich(c12, f, c12) -
                    sandwich(c12, e, b12) - sandwich(b12, e, c12);
  SchurParts out{HermitianMatrix(r), HermitianMatrix(s), 0.0};
  const auto direct = schur_complement(p);
  out.residual = (out.recombine() - direct).frobenius_norm() / direct.frobenius_norm();
  return out;
}

}  // namespace detail

inline SchurParts schur_parts(const PartitionedAD& p) {
  const CartesianPair leading{p.b11(), p.c11()};
  return detail::schur_parts_from(p, inverse_split(leading, p.tolerance()));
}

// Scalar chain
//   |det(A/A11)| <= det(R+S) <= det(B22 + 2B12*F B12 + C22 + 2C12*E C12)
//   <= det(B22 + B12*B11^{-1}B12 + C22 + C12*C11^{-1}C12) <= 2^m det(B22+C22)
//   <= 2^(3m/2)|det A22|
// with the supporting Loewner steps. The trailing block must have order m;
// when k < l the blocks are exchanged first and the report says so.
inline ChainReport theorem4_chain(const PartitionedAD& given, const Tolerances& tol = {}) {
  using detail::loewner_step;
  using detail::sandwich;
  using detail::scalar_step;

  const bool swap = given.l() != given.m();
  const PartitionedAD p = swap ? given.swapped() : given;
  const std::size_t m = p.l();
  const double md = static_cast<double>(m);

  const auto bounds = p1_check(p, tol.ineq);
  const auto& e = bounds.leading_split.e;
  const auto& f = bounds.leading_split.f;
  const auto b12 = p.b12();
  const auto c12 = p.c12();
  const auto b11 = p.b11(), c11 = p.c11(), b22 = p.b22(), c22 = p.c22();

  const HermitianMatrix bfb(sandwich(b12, f, b12)), cfc(sandwich(c12, f, c12));
  const HermitianMatrix beb(sandwich(b12, e, b12)), cec(sandwich(c12, e, c12));
  const auto f_cross = detail::hermitian_sum(sandwich(b12, f, c12), sandwich(c12, f, b12));
  const auto e_cross = detail::hermitian_sum(sandwich(c12, e, b12), sandwich(b12, e, c12));

  ChainReport r{"theorem4", swap ? "swapped" : "as_given", {}, false};
  r.steps.push_back(loewner_step("+(B12*F C12 + C12*F B12) <= B12*F B12 + C12*F C12", f_cross, bfb + cfc, tol.ineq));
  r.steps.push_back(loewner_step("-(B12*F C12 + C12*F B12) <= B12*F B12 + C12*F C12", -f_cross, bfb + cfc, tol.ineq));
  r.steps.push_back(loewner_step("+(C12*E B12 + B12*E C12) <= B12*E B12 + C12*E C12", e_cross, beb + cec, tol.ineq));
  r.steps.push_back(loewner_step("-(C12*E B12 + B12*E C12) <= B12*E B12 + C12*E C12", -e_cross, beb + cec, tol.ineq));

  const auto step_from = [&](std::string what, const LoewnerComparison& cmp, const HermitianMatrix& smaller,
                             const HermitianMatrix& larger) {
    ChainStep s{std::move(what), StepKind::loewner, smaller.frobenius_norm(), larger.frobenius_norm()};
    s.raw_margin = cmp.margin;
    s.margin = cmp.margin / cmp.scale;
    s.pass = s.margin >= -tol.ineq;
    s.strict = s.margin > tol.ineq;
    return s;
  };
  r.steps.push_back(step_from("E_k <= C11^{-1}/2", bounds.e_bound, e, 0.5 * inverse(c11)));
  r.steps.push_back(step_from("F_k <= B11^{-1}/2", bounds.f_bound, f, 0.5 * inverse(b11)));

  const auto parts = detail::schur_parts_from(p, bounds.leading_split);
  const auto rs = parts.real_part + parts.imag_part;
  const auto capped = b22 + 2.0 * bfb + c22 + 2.0 * cec;
  r.steps.push_back(loewner_step("R+S <= B22 + 2B12*F B12 + C22 + 2C12*E C12", rs, capped, tol.ineq));

  const HermitianMatrix b_reduced(sandwich(b12, inverse(b11), b12));
  const HermitianMatrix c_reduced(sandwich(c12, inverse(c11), c12));
  r.steps.push_back(loewner_step("B12*B11^{-1}B12 < B22", b_reduced, b22, tol.ineq));
  r.steps.push_back(loewner_step("C12*C11^{-1}C12 < C22", c_reduced, c22, tol.ineq));

  const double det_schur = std::abs(det(schur_complement(p)));
  const double det_rs = det(rs);
  const double det_capped = det(capped);
  const double det_reduced = det(b22 + b_reduced + c22 + c_reduced);
  const double det_doubled = std::pow(2.0, md) * det(b22 + c22);
  const double det_a11 = std::abs(det(p.a11()));
  const double det_a22 = std::abs(det(p.a22()));
  if (det_a11 == 0.0 || det_a22 == 0.0) throw DegenerateInstanceError("diagonal block determinant vanished");
  const double final_cap = std::pow(2.0, 1.5 * md) * det_a22;

  r.steps.push_back(scalar_step("|det(A/A11)| <= det(R+S)", det_schur, det_rs, tol.ineq));
  r.steps.push_back(scalar_step("det(R+S) <= det(B22 + 2B12*F B12 + C22 + 2C12*E C12)", det_rs, det_capped, tol.ineq));
  r.steps.push_back(scalar_step("det(B22 + 2B12*F B12 + C22 + 2C12*E C12) <= det(B22 + B12*B11^{-1}B12 + C22 + C12*C11^{-1}C12)",
                                det_capped, det_reduced, tol.ineq));
  r.steps.push_back(scalar_step("det(B22 + B12*B11^{-1}B12 + C22 + C12*C11^{-1}C12) < 2^m det(B22+C22)",
                                det_reduced, det_doubled, tol.ineq));
  r.steps.push_back(scalar_step("2^m det(B22+C22) <= 2^(3m/2)|det A22|", det_doubled, final_cap, tol.ineq));
  r.steps.push_back(scalar_step("|det A| <= 2^(3m/2)|det A11||det A22|", std::abs(det(p.matrix())),
                                final_cap * det_a11, tol.ineq));
  detail::finish(r);
  return r;
}

// ---------------------------------------------------------------------------

struct BoundCheck {
  double rho = 0;
  BoundSet bounds;
  bool ikramov_ok = false;
  bool lin_ok = false;
  bool conjecture_ok = false;
  // bound - rho
  double ikramov_margin = 0;
  double lin_margin = 0;
  double conjecture_margin = 0;

  friend bool operator==(const BoundCheck&, const BoundCheck&) = default;
};

inline BoundCheck check_all_bounds(const PartitionedAD& p, const Tolerances& tol = {}) {
  BoundCheck c;
  c.rho = fischer_ratio(p);
  c.bounds = bounds_for(p.n(), p.k());
  c.ikramov_margin = c.bounds.ikramov - c.rho;
  c.lin_margin = c.bounds.lin_a - c.rho;
  c.conjecture_margin = c.bounds.conjecture - c.rho;
  c.ikramov_ok = c.ikramov_margin >= -tol.ineq * c.bounds.ikramov;
  c.lin_ok = c.lin_margin >= -tol.ineq * c.bounds.lin_a;
  c.conjecture_ok = c.conjecture_margin >= -tol.ineq * c.bounds.conjecture;
  return c;
}

}  // namespace adfischer
