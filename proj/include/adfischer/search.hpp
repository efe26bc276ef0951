#pragma once

// Derivative-free maximization of the Fischer ratio over AD matrices of a
// fixed (n, k) split, and a scan of all splits up to a maximum order.
//
// Iterates are parametrized by lower-triangular factors, B = Lb Lb* and
// C = Lc Lc*, so every candidate is Hermitian PD by construction up to the
// pd_floor certification. One factor entry is perturbed per step; a move is
// kept only if it strictly increases rho. The step shrinks after `patience`
// consecutive rejections.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adfischer/generation.hpp"
#include "adfischer/inequalities.hpp"
#include "adfischer/parallel.hpp"
#include "adfischer/random.hpp"

namespace adfischer {

inline constexpr double kSoundnessSlack = 1e-9;

struct SearchConfig {
  std::size_t n = 2;
  std::size_t k = 1;
  std::size_t restarts = 20;
  std::size_t steps_per_restart = 2000;
  double initial_step = 0.1;
  double shrink = 0.5;
  std::size_t patience = 50;  // rejections before the step shrinks
  std::uint64_t seed = 0;
  std::vector<ComplexMatrix> seed_points;  // restart r < seed_points.size() starts here
  double pd_floor = 1e-8;                  // relative Cholesky threshold for accepted iterates
  unsigned workers = 1;

  void validate() const {
    if (n < 2 || k < 1 || k >= n) throw DomainError("search needs n >= 2 and 1 <= k <= n-1");
    if (restarts < 1) throw DomainError("restarts must be >= 1");
    if (!(shrink > 0 && shrink < 1)) throw DomainError("shrink must lie in (0, 1)");
    if (!(pd_floor > 0)) throw DomainError("pd_floor must be positive");
    if (!(initial_step > 0)) throw DomainError("initial step must be positive");
    if (patience < 1) throw DomainError("patience must be >= 1");
    for (const auto& s : seed_points)
      if (s.rows() != n || s.cols() != n) throw DimensionError("seed point order differs from n");
  }
};

struct RestartTrace {
  std::uint64_t seed = 0;
  bool from_seed_point = false;
  double start_rho = 0;
  double best_rho = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t skipped = 0;  // candidates failing certification or degenerate
  double final_step = 0;
  std::vector<double> incumbents;  // rho after every accepted move, in order

  friend bool operator==(const RestartTrace&, const RestartTrace&) = default;
};

struct SearchResult {
  double best_rho = 0;
  ComplexMatrix witness;
  BoundSet bound_set;
  double conjecture_margin = 0;  // 2^m - best_rho
  std::vector<RestartTrace> trajectory;
  std::uint64_t seed = 0;
  double pd_floor = 0;
  // Set when best_rho exceeds 2^m: rho recomputed in extended precision.
  std::optional<double> verified_rho;
  bool conjecture_flag = false;  // verified_rho > 2^m + slack

  std::size_t evaluations() const {
    std::size_t total = 0;
    for (const auto& t : trajectory) total += t.accepted + t.rejected + t.skipped;
    return total;
  }
};

namespace detail {

struct FactorPair {
  ComplexMatrix real_factor;
  ComplexMatrix imag_factor;

  ComplexMatrix assemble() const {
    return real_factor * real_factor.adjoint() +
           (imag_factor * imag_factor.adjoint()) * Complex(0.0, 1.0);
  }
};

inline void clamp_diagonal(ComplexMatrix& l, double floor_root) {
  for (std::size_t i = 0; i < l.rows(); ++i) l(i, i) = std::max(l(i, i).real(), floor_root);
}

// Joint rescaling leaves rho unchanged; it keeps the factors O(1).
inline void normalize(FactorPair& f, double floor_root) {
  const double s = std::max(f.real_factor.frobenius_norm(), f.imag_factor.frobenius_norm());
  if (s > 0) {
    f.real_factor *= Complex(1.0 / s);
    f.imag_factor *= Complex(1.0 / s);
  }
  clamp_diagonal(f.real_factor, floor_root);
  clamp_diagonal(f.imag_factor, floor_root);
}

inline std::optional<double> evaluate(const ComplexMatrix& a, std::size_t k, double pd_floor) {
  if (!is_accretive_dissipative(a, pd_floor).is_ad) return std::nullopt;
  try {
    const double rho = fischer_ratio(partition(a, k, pd_floor));
    if (!std::isfinite(rho)) return std::nullopt;
    return rho;
  } catch (const DegenerateInstanceError&) {
    return std::nullopt;
  }
}

inline std::optional<FactorPair> factors_of(const ComplexMatrix& a, double pd_floor) {
  const auto pair = cartesian_decompose(a);
  if (!cholesky_pd(pair.real_part, pd_floor).is_pd || !cholesky_pd(pair.imag_part, pd_floor).is_pd)
    return std::nullopt;
  return FactorPair{cholesky_factor(pair.real_part, pd_floor), cholesky_factor(pair.imag_part, pd_floor)};
}

inline FactorPair random_start(std::size_t n, CounterRng& rng) {
  auto draw = [&] {
    GenSpec g;
    g.n = n;
    g.style = GenStyle::wishart_like;
    g.condition_target = std::pow(100.0, rng.uniform());
    g.seed = rng();
    return cholesky_factor(sample_hpd(g));
  };
  ComplexMatrix re = draw();
  ComplexMatrix im = draw();
  return {std::move(re), std::move(im)};
}

struct RestartOutcome {
  RestartTrace trace;
  std::optional<ComplexMatrix> best;
};

inline RestartOutcome run_restart(const SearchConfig& cfg, std::size_t restart) {
  const double floor_root = std::sqrt(cfg.pd_floor);
  RestartOutcome out;
  out.trace.seed = derive_seed(cfg.seed, restart);
  CounterRng rng(out.trace.seed);

  std::optional<FactorPair> start;
  if (restart < cfg.seed_points.size()) {
    start = factors_of(cfg.seed_points[restart], cfg.pd_floor);
    out.trace.from_seed_point = start.has_value();
  }
  if (!start) start = random_start(cfg.n, rng);
  FactorPair current = *start;
  if (!out.trace.from_seed_point) normalize(current, floor_root);

  // A seed point is scored as given, not as its reassembled factors.
  ComplexMatrix current_matrix = out.trace.from_seed_point ? cfg.seed_points[restart] : current.assemble();
  auto rho0 = evaluate(current_matrix, cfg.k, cfg.pd_floor);
  if (!rho0) {
    // A start point that fails certification is useless; fall back to (1+i)I.
    current = {ComplexMatrix::identity(cfg.n), ComplexMatrix::identity(cfg.n)};
    current_matrix = current.assemble();
    rho0 = evaluate(current_matrix, cfg.k, cfg.pd_floor);
  }
  double best = *rho0;
  out.trace.start_rho = best;
  out.best = current_matrix;

  const std::size_t n = cfg.n;
  const std::size_t per_factor = n * (n + 1) / 2;
  double step = cfg.initial_step;
  std::size_t since_improvement = 0;

  for (std::size_t it = 0; it < cfg.steps_per_restart; ++it) {
    FactorPair trial = current;
    const std::size_t pick = rng.below(2 * per_factor);
    ComplexMatrix& factor = pick < per_factor ? trial.real_factor : trial.imag_factor;
    std::size_t flat = pick % per_factor;
    std::size_t row = 0;
    while (flat > row) {
      flat -= row + 1;
      ++row;
    }
    const std::size_t col = flat;
    if (row == col) {
      factor(row, col) = std::max(factor(row, col).real() + step * rng.normal(), floor_root);
    } else {
      factor(row, col) += step * rng.complex_normal();
    }

    const ComplexMatrix candidate = trial.assemble();
    const auto rho = evaluate(candidate, cfg.k, cfg.pd_floor);
    if (!rho) {
      ++out.trace.skipped;
      ++since_improvement;
    } else if (*rho > best) {
      best = *rho;
      current = std::move(trial);
      out.best = candidate;
      out.trace.incumbents.push_back(best);
      ++out.trace.accepted;
      since_improvement = 0;
    } else {
      ++out.trace.rejected;
      ++since_improvement;
    }
    if (since_improvement >= cfg.patience) {
      step = std::max(step * cfg.shrink, 1e-12);
      since_improvement = 0;
    }
  }
  out.trace.best_rho = best;
  out.trace.final_step = step;
  return out;
}

// rho in extended precision: permutation expansion for n <= 4, LU otherwise.
inline double extended_precision_ratio(const PartitionedAD& p) {
  using Wide = std::complex<long double>;
  auto wide_abs_det = [&](const ComplexMatrix& m) {
    const auto w = m.cast<Wide>();
    return std::abs(m.rows() <= 4 ? leibniz_det(w) : det(w));
  };
  return static_cast<double>(wide_abs_det(p.matrix()) / (wide_abs_det(p.a11()) * wide_abs_det(p.a22())));
}

}  // namespace detail

inline SearchResult maximize_ratio(const SearchConfig& cfg) {
  cfg.validate();
  std::vector<detail::RestartOutcome> outcomes(cfg.restarts);
  parallel_for(cfg.restarts, cfg.workers,
               [&](std::size_t r) { outcomes[r] = detail::run_restart(cfg, r); });

  std::size_t winner = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].trace.best_rho > outcomes[winner].trace.best_rho) winner = r;

  const auto& witness = *outcomes[winner].best;
  const auto part = partition(witness, cfg.k, cfg.pd_floor);
  SearchResult res{.best_rho = fischer_ratio(part),
                   .witness = witness,
                   .bound_set = bounds_for(cfg.n, cfg.k),
                   .conjecture_margin = 0,
                   .trajectory = {},
                   .seed = cfg.seed,
                   .pd_floor = cfg.pd_floor,
                   .verified_rho = std::nullopt,
                   .conjecture_flag = false};
  res.conjecture_margin = res.bound_set.conjecture - res.best_rho;
  for (auto& o : outcomes) res.trajectory.push_back(std::move(o.trace));

  if (res.best_rho > res.bound_set.lin_a + kSoundnessSlack)
    throw ImplementationBugError("search exceeded the proven ceiling: rho=" + std::to_string(res.best_rho) +
                                 " > " + std::to_string(res.bound_set.lin_a));
  if (res.best_rho > res.bound_set.conjecture + kSoundnessSlack) {
    res.verified_rho = detail::extended_precision_ratio(part);
    res.conjecture_flag = *res.verified_rho > res.bound_set.conjecture + kSoundnessSlack;
  }
  return res;
}

struct ScanCell {
  std::size_t n = 0, k = 0, m = 0;
  SearchResult result;
};

// Every (n, k) with 2 <= n <= n_max, 1 <= k <= n/2. Each cell is seeded with
// (1+i)I (rho = 1) and the embedded two-by-two family at eps = 0.5, plus
// any template seed points of matching order.
inline std::vector<ScanCell> conjecture_scan(std::size_t n_max, const SearchConfig& budget) {
  if (n_max < 2) throw DomainError("scan needs n_max >= 2");
  std::vector<ScanCell> table;
  for (std::size_t n = 2; n <= n_max; ++n) {
    for (std::size_t k = 1; 2 * k <= n; ++k) {
      SearchConfig cfg = budget;
      cfg.n = n;
      cfg.k = k;
      cfg.seed = derive_seed(budget.seed, (static_cast<std::uint64_t>(n) << 32) | k);
      cfg.seed_points.clear();
      cfg.seed_points.push_back(ComplexMatrix::identity(n) * Complex(1, 1));
      cfg.seed_points.push_back(example_family_embedded({0.5}, n, k));
      for (const auto& s : budget.seed_points)
        if (s.rows() == n) cfg.seed_points.push_back(s);
      cfg.restarts = std::max(cfg.restarts, cfg.seed_points.size());
      table.push_back({n, k, std::min(k, n - k), maximize_ratio(cfg)});
    }
  }
  return table;
}

}  // namespace adfischer
