// Copyright 2026 The qtel authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qtel/qmath.hpp"
#include "qtel/states.hpp"

namespace qtel {

inline constexpr double kZeroProbabilityCutoff = 1e-14;
inline constexpr double kProjectorTol = 1e-8;
inline constexpr double kRankOneTol = 1e-9;  // relative to the leading eigenvalue

// Two-outcome conclusive operation A (x) B. Stored unnormalized; before use
// both operators are rescaled by a common factor so the larger operator norm
// is 1, which makes them valid measurement elements and the success
// probability meaningful.
struct LocalFilter {
  ComplexMatrix alice;
  ComplexMatrix bob;
};

inline LocalFilter normalized(const LocalFilter& filter) {
  const double scale = std::max(operator_norm(filter.alice), operator_norm(filter.bob));
  if (scale < 1e-300) throw std::invalid_argument("filter operators are zero");
  return {filter.alice / scale, filter.bob / scale};
}

struct FilterResult {
  double success_probability;
  BipartiteState post_state;
};

// Success branch of the filter: post state (A (x) B) rho (A (x) B)^dag
// normalized by its trace, which is the success probability. Outcomes with
// probability below the cutoff are reported as empty, not as an error.
inline std::optional<FilterResult> apply_filter(const BipartiteState& rho,
                                                const LocalFilter& filter) {
  const LocalFilter f = normalized(filter);
  if (f.alice.rows() != f.alice.cols() || f.alice.cols() != rho.dim_a() ||
      f.bob.rows() != f.bob.cols() || f.bob.cols() != rho.dim_b())
    throw std::invalid_argument("filter dimensions do not match the state");
  const ComplexMatrix op = tensor(f.alice, f.bob);
  const ComplexMatrix out = op * rho.matrix() * op.adjoint();
  const double probability = out.trace().real();
  if (probability < kZeroProbabilityCutoff) return std::nullopt;
  return FilterResult{probability,
                      BipartiteState(rho.dim_a(), rho.dim_b(), hermitize(out / probability))};
}

namespace detail {

inline void require_projector(const ComplexMatrix& p, int dim, int rank,
                              const char* side) {
  if (p.rows() != dim || p.cols() != dim)
    throw validation_error("projector_dimensions",
                           std::string(side) + " projector has the wrong dimension");
  if (max_abs_diff(p, p.adjoint()) > kHermitianTol)
    throw validation_error("projector_hermitian",
                           std::string(side) + " projector is not Hermitian");
  if (max_abs_diff(p * p, p) > kProjectorTol)
    throw validation_error("projector_idempotent",
                           std::string(side) + " projector is not idempotent");
  const double tr = p.trace().real();
  if (std::abs(tr - rank) > kProjectorTol)
    throw validation_error("projector_rank",
                           std::string(side) + " projector does not have the stated rank");
}

// Extends orthonormal columns to a full orthonormal basis, keeping the given
// columns exactly as the first ones (so no phases sneak in). Candidates are
// projected twice; a single pass loses orthogonality when a candidate is
// nearly inside the span.
inline ComplexMatrix complete_orthonormal(const ComplexMatrix& columns, int dim) {
  ComplexMatrix basis(dim, dim);
  Eigen::Index count = columns.cols();
  basis.leftCols(count) = columns;
  for (int j = 0; j < dim && count < dim; ++j) {
    ComplexVector v = basis_ket(dim, j);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < count; ++k)
        v -= ComplexVector(basis.col(k)) * (basis.col(k).adjoint() * v)(0);
    const double n = v.norm();
    if (n > 1e-6) basis.col(count++) = v / n;
  }
  if (count < dim) throw std::runtime_error("failed to complete an orthonormal basis");
  return basis;
}

inline ComplexMatrix projector_from_columns(const ComplexMatrix& columns) {
  return columns * columns.adjoint();
}

}  // namespace detail

// Checks whether the block P (x) Q rho P (x) Q is a pure projector of
// Schmidt rank m and, if so, builds the conclusive filter that converts the
// state into the embedded rank-m maximally entangled state exactly. On the
// Bob side the filter equalizes the Schmidt coefficients (the diagonal
// element for coefficient a_i is the product of the other coefficients,
// which keeps the operator a contraction and, for a rank-2 pure state with
// coefficients (a, b), reduces to diag(b, a)).
inline std::optional<LocalFilter> verify_distillation_witness(const BipartiteState& rho,
                                                              const ComplexMatrix& p,
                                                              const ComplexMatrix& q,
                                                              int m) {
  if (m < 1 || m > std::min(rho.dim_a(), rho.dim_b()))
    throw std::invalid_argument("witness rank must satisfy 1 <= m <= min(d_a, d_b)");
  detail::require_projector(p, rho.dim_a(), m, "Alice");
  detail::require_projector(q, rho.dim_b(), m, "Bob");

  const ComplexMatrix op = tensor(p, q);
  const ComplexMatrix block = op * rho.matrix() * op.adjoint();
  const double block_trace = block.trace().real();
  if (block_trace < 1e-12) return std::nullopt;

  const auto eig = hermitian_eigensystem(block);
  const Eigen::Index last = eig.eigenvalues().size() - 1;
  const double leading = eig.eigenvalues()(last);
  const double second = last > 0 ? std::abs(eig.eigenvalues()(last - 1)) : 0.0;
  if (second > kRankOneTol * leading) return std::nullopt;  // block is mixed

  const ComplexVector psi = eig.eigenvectors().col(last);
  const SchmidtDecomposition dec = schmidt(psi, rho.dim_a(), rho.dim_b());
  if (dec.rank() != m) return std::nullopt;

  // Coefficients of the unnormalized pure block, all <= 1.
  RealVector coeff(m);
  for (int i = 0; i < m; ++i) coeff(i) = std::sqrt(leading) * dec.coefficients(i);

  ComplexMatrix equalizer = ComplexMatrix::Zero(rho.dim_b(), rho.dim_b());
  for (int i = 0; i < m; ++i) {
    double c = 1.0;
    for (int j = 0; j < m; ++j)
      if (j != i) c *= coeff(j);
    equalizer += c * dec.right_vectors.col(i) * dec.right_vectors.col(i).adjoint();
  }

  // Rotations taking the Schmidt bases onto the first m computational
  // basis vectors, so the output is the embedded singlet itself.
  const ComplexMatrix rot_a =
      detail::complete_orthonormal(dec.left_vectors.leftCols(m), rho.dim_a()).adjoint();
  const ComplexMatrix rot_b =
      detail::complete_orthonormal(dec.right_vectors.leftCols(m), rho.dim_b()).adjoint();

  return LocalFilter{rot_a * p, rot_b * equalizer * q};
}

struct DistillationWitness {
  ComplexMatrix projector_a;
  ComplexMatrix projector_b;
  LocalFilter filter;
};

// Heuristic search for a rank-m product projection witnessing noncollective
// distillability: structured candidates from the Schmidt supports of the
// state's eigenvectors first, Haar-random subspaces for the rest of the
// budget.
inline std::optional<DistillationWitness> witness_search(const BipartiteState& rho, int m,
                                                         long trials, Rng& rng) {
  if (m < 1 || m > std::min(rho.dim_a(), rho.dim_b()))
    throw std::invalid_argument("witness rank must satisfy 1 <= m <= min(d_a, d_b)");

  std::vector<std::pair<ComplexMatrix, ComplexMatrix>> candidates;
  const auto eig = hermitian_eigensystem(rho.matrix());
  for (Eigen::Index k = eig.eigenvalues().size() - 1; k >= 0; --k) {
    if (eig.eigenvalues()(k) < 1e-8) continue;
    const SchmidtDecomposition dec =
        schmidt(eig.eigenvectors().col(k), rho.dim_a(), rho.dim_b());
    if (dec.rank() < m) continue;
    candidates.emplace_back(detail::projector_from_columns(dec.left_vectors.leftCols(m)),
                            detail::projector_from_columns(dec.right_vectors.leftCols(m)));
  }

  long used = 0;
  for (const auto& [p, q] : candidates) {
    if (used++ >= trials) return std::nullopt;
    if (auto filter = verify_distillation_witness(rho, p, q, m))
      return DistillationWitness{p, q, *filter};
  }
  while (used++ < trials) {
    const ComplexMatrix p =
        detail::projector_from_columns(haar_unitary(rho.dim_a(), rng).leftCols(m));
    const ComplexMatrix q =
        detail::projector_from_columns(haar_unitary(rho.dim_b(), rng).leftCols(m));
    if (auto filter = verify_distillation_witness(rho, p, q, m))
      return DistillationWitness{p, q, *filter};
  }
  return std::nullopt;
}

struct QuasiDistillReport {
  int n = 0;
  double fraction = 0.0;
  double probability = 0.0;
  bool succeeded = false;  // false marks a (numerically) zero-probability member
};

// Evaluates a filter family member by member on fresh copies of the state;
// nothing is iterated, each report stands alone.
inline std::vector<QuasiDistillReport> quasi_distill_sequence(
    const BipartiteState& rho, const std::function<LocalFilter(int)>& filter_for,
    int n_max) {
  if (n_max < 1) throw std::invalid_argument("need at least one sequence member");
  const int target_rank = std::min(rho.dim_a(), rho.dim_b());
  std::vector<QuasiDistillReport> reports;
  reports.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    QuasiDistillReport report;
    report.n = n;
    if (const auto result = apply_filter(rho, filter_for(n))) {
      report.fraction = singlet_fraction_m(result->post_state, target_rank);
      report.probability = result->success_probability;
      report.succeeded = true;
    }
    reports.push_back(report);
  }
  return reports;
}

// The d=3 filter family diag(1/n, 1, 1) (x) diag(1, 1/n, 1/n): it rescales
// the maximally entangled component uniformly while suppressing the |01>
// noise quadratically faster.
inline LocalFilter quasi_distillation_filter(int n) {
  if (n < 1) throw std::invalid_argument("sequence index must be positive");
  const double s = 1.0 / n;
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 0) = s;
  a(1, 1) = 1.0;
  a(2, 2) = 1.0;
  ComplexMatrix b = ComplexMatrix::Zero(3, 3);
  b(0, 0) = 1.0;
  b(1, 1) = s;
  b(2, 2) = s;
  return {a, b};
}

namespace detail {

inline ComplexMatrix basis_projector(const ComplexVector& v) { return v * v.adjoint(); }

}  // namespace detail

// d=3 mixture F*P+ + (1-F)|01><01|: not distillable to a perfect singlet,
// but the fraction can be pushed arbitrarily close to 1 with vanishing
// success probability.
inline BipartiteState quasi_distillable_state(double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("fraction must lie strictly inside (0, 1)");
  const ComplexMatrix noise =
      detail::basis_projector(tensor(basis_ket(3, 0), basis_ket(3, 1)));
  return BipartiteState(
      3, 3, hermitize(fraction * max_entangled_projector(3) + (1.0 - fraction) * noise));
}

// d=3 mixture F*P+ + (1-F)/3 (|01><01| + |12><12| + |20><20|): the cyclic
// noise makes even quasi-distillation impossible, so the reachable fraction
// has a threshold strictly below 1.
inline BipartiteState threshold_state(double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("fraction must lie strictly inside (0, 1)");
  ComplexMatrix noise = ComplexMatrix::Zero(9, 9);
  for (int i = 0; i < 3; ++i)
    noise += detail::basis_projector(tensor(basis_ket(3, i), basis_ket(3, (i + 1) % 3)));
  return BipartiteState(
      3, 3,
      hermitize(fraction * max_entangled_projector(3) + ((1.0 - fraction) / 3.0) * noise));
}

// 2x3 state p*P+(embedded) + (1-p)|02><02|, whose noise lives outside the
// rank-2 product block; projecting Bob onto span{|0>,|1>} distills it.
inline BipartiteState distillable_rectangular_state(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("weight must lie strictly inside (0, 1)");
  const ComplexVector singlet = max_entangled_embedded(2, 3, 2);
  const ComplexMatrix noise =
      detail::basis_projector(tensor(basis_ket(2, 0), basis_ket(3, 2)));
  return BipartiteState(
      2, 3, hermitize(p * (singlet * singlet.adjoint()) + (1.0 - p) * noise));
}

struct FilterTrial {
  long trial = 0;
  LocalFilter filter;
  double fraction = 0.0;
  double probability = 0.0;
  bool succeeded = false;
};

struct ThresholdConfig {
  int grid_points_per_axis = 7;     // log grid 10^0 .. 10^grid_min_exponent
  double grid_min_exponent = -3.0;
  double perturb_scale = 0.25;      // initial multiplicative noise for hill climbing
  double perturb_decay = 0.01;      // scale shrinks to this factor by the last trial
};

struct ThresholdReport {
  double best_fraction = 0.0;
  long best_trial = -1;
  LocalFilter best_filter;
  std::vector<FilterTrial> trace;

  std::vector<double> running_best() const {
    std::vector<double> best;
    best.reserve(trace.size());
    double current = 0.0;
    for (const FilterTrial& t : trace) {
      if (t.succeeded) current = std::max(current, t.fraction);
      best.push_back(current);
    }
    return best;
  }
};

namespace detail {

inline ComplexMatrix random_log_diagonal(int d, double min_exponent, Rng& rng) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    m(i, i) = std::pow(10.0, min_exponent * uniform_unit(rng));
  return m;
}

inline ComplexMatrix perturb_entries(const ComplexMatrix& m, double scale, Rng& rng) {
  ComplexMatrix out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(i, j) *= 1.0 + scale * complex_gaussian(rng);
  return out;
}

}  // namespace detail

// Randomized search for the largest post-filter singlet fraction: a
// structured diag(x,1,1) (x) diag(1,y,z) grid (d=3), random dense filters,
// random diagonal filters, and multiplicative hill climbing from the best
// filter found so far. Every trial is recorded so results can be replayed.
inline ThresholdReport threshold_experiment(const BipartiteState& rho, long trials,
                                            Rng& rng, const ThresholdConfig& config = {}) {
  const int d_a = rho.dim_a();
  const int d_b = rho.dim_b();
  const int target_rank = std::min(d_a, d_b);

  std::vector<LocalFilter> structured;
  if (d_a == 3 && d_b == 3 && config.grid_points_per_axis > 1) {
    std::vector<double> grid(config.grid_points_per_axis);
    for (int i = 0; i < config.grid_points_per_axis; ++i)
      grid[i] = std::pow(
          10.0, config.grid_min_exponent * i / (config.grid_points_per_axis - 1.0));
    for (const double x : grid)
      for (const double y : grid)
        for (const double z : grid) {
          ComplexMatrix a = identity(3);
          a(0, 0) = x;
          ComplexMatrix b = identity(3);
          b(1, 1) = y;
          b(2, 2) = z;
          structured.push_back({a, b});
        }
  }

  ThresholdReport report;
  report.trace.reserve(trials);
  for (long t = 0; t < trials; ++t) {
    LocalFilter candidate;
    if (t < static_cast<long>(structured.size())) {
      candidate = structured[t];
    } else if (report.best_trial < 0 || t % 3 == 0) {
      candidate = {ginibre_matrix(d_a, d_a, rng), ginibre_matrix(d_b, d_b, rng)};
    } else if (t % 3 == 1) {
      candidate = {detail::random_log_diagonal(d_a, config.grid_min_exponent, rng),
                   detail::random_log_diagonal(d_b, config.grid_min_exponent, rng)};
    } else {
      // annealed climbing: perturbations shrink so the search settles early
      const double progress = static_cast<double>(t) / static_cast<double>(trials);
      const double scale = config.perturb_scale * std::pow(config.perturb_decay, progress);
      candidate = {detail::perturb_entries(report.best_filter.alice, scale, rng),
                   detail::perturb_entries(report.best_filter.bob, scale, rng)};
    }

    FilterTrial trial;
    trial.trial = t;
    trial.filter = candidate;
    if (const auto result = apply_filter(rho, candidate)) {
      trial.fraction = singlet_fraction_m(result->post_state, target_rank);
      trial.probability = result->success_probability;
      trial.succeeded = true;
      if (trial.fraction > report.best_fraction) {
        report.best_fraction = trial.fraction;
        report.best_trial = t;
        report.best_filter = candidate;
      }
    }
    report.trace.push_back(std::move(trial));
  }
  return report;
}

}  // namespace qtel
