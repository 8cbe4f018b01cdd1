#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qwalk/alpha_field.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Enumeration of wedge states by rank n = i + j and position l (distance
/// from the axis): (0,n), (1,n-1), ..., up to the diagonal or near-diagonal
/// terminal element. Rank n holds 1 + floor(n/2) states.
std::vector<WalkState> states_of_rank(std::uint32_t n);

/// Steady-state ratio table: p(i,j) are occupancy ratios to the origin
/// (p(0,0) = 1, p(0,1) = 4), q(i,j) is the transformed measure that is
/// asymptotically flat (identically 8 for the zero field).
class RatioTable {
 public:
  RatioTable(std::uint32_t rank_max);

  std::uint32_t rank_max() const { return rank_max_; }

  double p(std::uint32_t i, std::uint32_t j) const;
  double q(std::uint32_t i, std::uint32_t j) const;
  /// Residual of the state's own balance equation at the returned table.
  double residual_at(std::uint32_t i, std::uint32_t j) const;

  /// Max residual over the solved system.
  double residual() const { return residual_; }
  std::uint64_t iterations() const { return iterations_; }
  bool converged() const { return converged_; }

  std::vector<WalkState> states() const;

  // Solver internals write through these.
  double& p_ref(std::uint32_t i, std::uint32_t j);
  double& residual_ref(std::uint32_t i, std::uint32_t j);
  void set_summary(double residual, std::uint64_t iterations, bool converged);

 private:
  std::size_t index_of(std::uint32_t i, std::uint32_t j) const;

  std::uint32_t rank_max_;
  std::vector<std::size_t> rank_offset_;
  std::vector<double> p_;
  std::vector<double> residual_state_;
  double residual_ = 0.0;
  std::uint64_t iterations_ = 0;
  bool converged_ = false;
};

/// Solves the truncated steady-state ratio system by Gauss-Seidel sweeps
/// ordered by rank and position. The origin and (0,1) are pinned to 1 and 4;
/// every other state is updated through its own balance equation. States of
/// rank rank_max+1 are closed by reflecting extrapolation along the diagonal
/// direction (the adjacent-rank factors cancel there), which leaves an
/// O(1/rank_max) edge error on the axis; keep a margin of a few ranks when
/// reading values near the truncation boundary.
RatioTable solve_ratios(const AlphaField& field, std::uint32_t rank_max,
                        double tol = 1e-8, std::uint64_t max_iters = 200000);

/// Per-rank sums of the q measure. For the zero field these equal
/// 8 * (1 + floor(n/2)).
std::map<std::uint32_t, double> rank_sums(const RatioTable& table);

/// Maximum deviations of the solved table from the adjacent-state asymptotic
/// expansions, measured at scale k over positions l = 1..l_window. The four
/// ratio expansions carry O(1/k^2) remainders; the two axis gaps carry
/// O(1/k).
struct AsymptoticsReport {
  std::uint64_t k = 0;
  std::uint32_t l_window = 0;
  double max_dev_interleaved_even = 0.0;  // q(k-l,k+l)   vs q(k-l+1,k+l)
  double max_dev_interleaved_odd = 0.0;   // q(k-l+1,k+l) vs q(k-l+1,k+l-1)
  double max_dev_same_rank_even = 0.0;    // q(k-l,k+l)   vs q(k-l+1,k+l-1)
  double max_dev_same_rank_odd = 0.0;     // q(k-l,k+l+1) vs q(k-l+1,k+l)
  double axis_gap_even = 0.0;             // |q(0,2k)   - q(1,2k-1)|
  double axis_gap_odd = 0.0;              // |q(0,2k+1) - q(1,2k)|
};

AsymptoticsReport verify_lemma1(const RatioTable& table,
                                const DiagonalLimits& limits, std::uint64_t k,
                                std::uint32_t l_window = 8);

}  // namespace qwalk
