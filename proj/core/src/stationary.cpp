#include "qwalk/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk {

std::vector<WalkState> states_of_rank(std::uint32_t n) {
  std::vector<WalkState> states;
  states.reserve(1 + n / 2);
  for (std::uint32_t i = 0; 2 * i <= n; ++i) {
    states.push_back({i, n - i});
  }
  return states;
}

RatioTable::RatioTable(std::uint32_t rank_max) : rank_max_(rank_max) {
  rank_offset_.resize(rank_max_ + 2, 0);
  for (std::uint32_t n = 0; n <= rank_max_; ++n) {
    rank_offset_[n + 1] = rank_offset_[n] + (1 + n / 2);
  }
  p_.assign(rank_offset_[rank_max_ + 1], 0.0);
  residual_state_.assign(p_.size(), 0.0);
}

std::size_t RatioTable::index_of(std::uint32_t i, std::uint32_t j) const {
  if (i > j || i + j > rank_max_) {
    throw ConstraintError("RatioTable: state (" + std::to_string(i) + "," +
                          std::to_string(j) + ") outside the solved window");
  }
  return rank_offset_[i + j] + i;
}

double RatioTable::p(std::uint32_t i, std::uint32_t j) const {
  return p_[index_of(i, j)];
}

double RatioTable::q(std::uint32_t i, std::uint32_t j) const {
  const double value = p(i, j);
  if (i == 0 && j == 0) return 8.0 * value;
  if (i == 0 || i == j) return 2.0 * value;
  return value;
}

double RatioTable::residual_at(std::uint32_t i, std::uint32_t j) const {
  return residual_state_[index_of(i, j)];
}

double& RatioTable::p_ref(std::uint32_t i, std::uint32_t j) {
  return p_[index_of(i, j)];
}

double& RatioTable::residual_ref(std::uint32_t i, std::uint32_t j) {
  return residual_state_[index_of(i, j)];
}

void RatioTable::set_summary(double residual, std::uint64_t iterations,
                             bool converged) {
  residual_ = residual;
  iterations_ = iterations;
  converged_ = converged;
}

std::vector<WalkState> RatioTable::states() const {
  std::vector<WalkState> all;
  all.reserve(p_.size());
  for (std::uint32_t n = 0; n <= rank_max_; ++n) {
    for (const WalkState& s : states_of_rank(n)) {
      all.push_back(s);
    }
  }
  return all;
}

namespace {

// Coefficient cache: alpha_(i,j) for all pairs with i + j <= rank_max + 1
// (the balance equations at rank R reference coefficients one rank above).
class AlphaCache {
 public:
  AlphaCache(const AlphaField& field, std::uint32_t rank_cap)
      : rank_cap_(rank_cap) {
    offset_.resize(rank_cap_ + 2, 0);
    for (std::uint32_t n = 0; n <= rank_cap_; ++n) {
      offset_[n + 1] = offset_[n] + (1 + n / 2);
    }
    values_.assign(offset_[rank_cap_ + 1], 0.0);
    for (std::uint32_t n = 0; n <= rank_cap_; ++n) {
      for (std::uint32_t i = 0; 2 * i <= n; ++i) {
        values_[offset_[n] + i] = field.evaluate(i, n - i);
      }
    }
  }

  double at(std::uint32_t i, std::uint32_t j) const {
    return values_[offset_[i + j] + i];
  }

 private:
  std::uint32_t rank_cap_;
  std::vector<std::size_t> offset_;
  std::vector<double> values_;
};

double q_class_factor(std::uint32_t i, std::uint32_t j) {
  if (i == 0 && j == 0) return 8.0;
  if (i == 0 || i == j) return 2.0;
  return 1.0;
}

// Solver workspace: stored p values plus the reflecting ghost ring.
class Sweep {
 public:
  Sweep(RatioTable& table, const AlphaCache& alpha, std::uint32_t rank_max)
      : table_(table), alpha_(alpha), rank_max_(rank_max) {}

  // p at a stored state or at a ghost of rank rank_max + 1. The ghost takes
  // the q value of its same-diagonal partner two ranks below (the adjacent
  // rank factors cancel along the diagonal direction); the axis ghost takes
  // the axis value two ranks below.
  double p_at(std::uint32_t i, std::uint32_t j) const {
    if (i + j <= rank_max_) {
      return table_.p(i, j);
    }
    double ghost_q;
    if (i >= 1) {
      ghost_q = table_.q(i - 1, j - 1);
    } else {
      ghost_q = table_.q(0, j - 2);
    }
    return ghost_q / q_class_factor(i, j);
  }

  // Right-hand side of the balance equation at state (i,j), i + j >= 2;
  // the update is p := rhs / 4.
  double rhs(std::uint32_t i, std::uint32_t j) const {
    const double n = static_cast<double>(i) + static_cast<double>(j);
    if (i == 0) {
      // Axis, j >= 2: unit-rate neighbors along the axis, doubled inflow
      // comes from the interior service.
      return p_at(0, j - 1) + p_at(0, j + 1) +
             (1.0 + 4.0 * alpha_.at(1, j) / (n + 1.0)) * p_at(1, j);
    }
    if (i == 1 && j == 1) {
      return 2.0 * p_at(0, 1) +
             (1.0 - 4.0 * alpha_.at(1, 2) / 3.0) * p_at(1, 2);
    }
    if (i == 1 && j == 2) {
      return 2.0 * p_at(0, 2) + 2.0 * p_at(1, 1) + 2.0 * p_at(2, 2) +
             (1.0 - 4.0 * alpha_.at(1, 3) / (n + 1.0)) * p_at(1, 3);
    }
    if (i == 1) {
      // j > 2: the axis neighbor contributes with the doubled (reflection)
      // rate.
      return 2.0 * p_at(0, j) +
             (1.0 + 4.0 * alpha_.at(1, j - 1) / (n - 1.0)) * p_at(1, j - 1) +
             (1.0 + 4.0 * alpha_.at(2, j) / (n + 1.0)) * p_at(2, j) +
             (1.0 - 4.0 * alpha_.at(1, j + 1) / (n + 1.0)) * p_at(1, j + 1);
    }
    if (i == j) {
      // Diagonal, i >= 2: only the two distinct-coordinate neighbors feed it.
      return (1.0 - 4.0 * alpha_.at(i - 1, j) / (n - 1.0)) * p_at(i - 1, j) +
             (1.0 - 4.0 * alpha_.at(i, j + 1) / (n + 1.0)) * p_at(i, j + 1);
    }
    if (j == i + 1) {
      // Near-diagonal, i >= 2: both diagonal neighbors enter doubled.
      return (1.0 - 4.0 * alpha_.at(i - 1, j) / (n - 1.0)) * p_at(i - 1, j) +
             2.0 * p_at(i, i) + 2.0 * p_at(i + 1, j) +
             (1.0 - 4.0 * alpha_.at(i, j + 1) / (n + 1.0)) * p_at(i, j + 1);
    }
    // Interior: i >= 2, j > i + 1.
    return (1.0 - 4.0 * alpha_.at(i - 1, j) / (n - 1.0)) * p_at(i - 1, j) +
           (1.0 + 4.0 * alpha_.at(i, j - 1) / (n - 1.0)) * p_at(i, j - 1) +
           (1.0 + 4.0 * alpha_.at(i + 1, j) / (n + 1.0)) * p_at(i + 1, j) +
           (1.0 - 4.0 * alpha_.at(i, j + 1) / (n + 1.0)) * p_at(i, j + 1);
  }

 private:
  RatioTable& table_;
  const AlphaCache& alpha_;
  std::uint32_t rank_max_;
};

}  // namespace

RatioTable solve_ratios(const AlphaField& field, std::uint32_t rank_max,
                        double tol, std::uint64_t max_iters) {
  if (rank_max < 6) {
    throw ConstraintError("solve_ratios: rank_max must be >= 6");
  }
  if (!(tol > 0.0)) {
    throw ConstraintError("solve_ratios: tol must be positive");
  }

  AlphaCache alpha(field, rank_max + 1);
  RatioTable table(rank_max);

  // Zero-field pattern as the initial guess; the anchors stay fixed.
  table.p_ref(0, 0) = 1.0;
  table.p_ref(0, 1) = 4.0;
  for (std::uint32_t n = 2; n <= rank_max; ++n) {
    for (const WalkState& s : states_of_rank(n)) {
      table.p_ref(s.I, s.J) = (s.on_axis() || s.on_diagonal()) ? 4.0 : 8.0;
    }
  }

  Sweep sweep(table, alpha, rank_max);

  double residual = 0.0;
  std::uint64_t iter = 0;
  bool converged = false;
  double prev_residual = 0.0;
  int growing = 0;

  for (iter = 1; iter <= max_iters; ++iter) {
    double max_delta = 0.0;
    for (std::uint32_t n = 2; n <= rank_max; ++n) {
      // Positions away from the axis first; the marginal element (0,n) is
      // updated last, through its own equation.
      for (std::uint32_t i = 1; 2 * i <= n; ++i) {
        double& value = table.p_ref(i, n - i);
        const double updated = sweep.rhs(i, n - i) / 4.0;
        max_delta = std::max(max_delta, std::fabs(updated - value));
        value = updated;
      }
      double& axis = table.p_ref(0, n);
      const double updated = sweep.rhs(0, n) / 4.0;
      max_delta = std::max(max_delta, std::fabs(updated - axis));
      axis = updated;
    }

    // Residual certificate over the equations that define the solve.
    residual = 0.0;
    for (std::uint32_t n = 2; n <= rank_max; ++n) {
      for (std::uint32_t i = 0; 2 * i <= n; ++i) {
        const double r = std::fabs(sweep.rhs(i, n - i) / 4.0 - table.p(i, n - i));
        table.residual_ref(i, n - i) = r;
        residual = std::max(residual, r);
      }
    }

    if (max_delta <= tol && residual <= tol) {
      converged = true;
      break;
    }
    if (iter > 3 && residual > prev_residual && residual > 10.0 * tol) {
      if (++growing >= 3) {
        std::ostringstream os;
        os << "solve_ratios: residual growing for 3 consecutive sweeps "
           << "(iter " << iter << ", residual " << residual << ")";
        throw ConvergenceError(os.str());
      }
    } else {
      growing = 0;
    }
    prev_residual = residual;
  }

  // Diagnostic residuals at the pinned states: the origin equation holds by
  // construction; the (0,1) residual is evaluated on the balance that the
  // network actually satisfies there (inflow 4 from the origin, 2 from the
  // diagonal, 1 from the axis).
  table.residual_ref(0, 0) =
      std::fabs(table.p(0, 1) / 4.0 - table.p(0, 0));
  table.residual_ref(0, 1) = std::fabs(
      (4.0 * table.p(0, 0) + 2.0 * table.p(1, 1) + table.p(0, 2)) / 4.0 -
      table.p(0, 1));

  for (const WalkState& s : table.states()) {
    if (!(table.p(s.I, s.J) > 0.0)) {
      throw ConvergenceError("solve_ratios: nonpositive ratio at (" +
                             std::to_string(s.I) + "," + std::to_string(s.J) +
                             ")");
    }
  }

  table.set_summary(residual, iter, converged);
  return table;
}

std::map<std::uint32_t, double> rank_sums(const RatioTable& table) {
  std::map<std::uint32_t, double> sums;
  for (std::uint32_t n = 0; n <= table.rank_max(); ++n) {
    double sum = 0.0;
    for (const WalkState& s : states_of_rank(n)) {
      sum += table.q(s.I, s.J);
    }
    sums[n] = sum;
  }
  return sums;
}

AsymptoticsReport verify_lemma1(const RatioTable& table,
                                const DiagonalLimits& limits, std::uint64_t k,
                                std::uint32_t l_window) {
  if (2 * k + 2 > table.rank_max()) {
    throw ConstraintError(
        "verify_lemma1: need 2k + 2 <= rank_max of the solved table");
  }
  if (k < 3) {
    throw ConstraintError("verify_lemma1: k must be >= 3");
  }
  const auto uk = static_cast<std::uint32_t>(k);
  const double fk = static_cast<double>(k);
  AsymptoticsReport report;
  report.k = k;
  report.l_window = l_window;

  auto dev = [&](double lhs, double rhs, double factor) {
    return std::fabs(lhs / rhs - factor);
  };

  // q(k-l, k+l) = (1 + 2 a*_{2l-1}/k + 2 a*_{2l}/k) q(k-l+1, k+l)
  for (std::uint32_t l = 1; l <= std::min<std::uint32_t>(l_window, uk - 1); ++l) {
    const double factor =
        1.0 + 2.0 * (limits.star(2 * l - 1) + limits.star(2 * l)) / fk;
    report.max_dev_interleaved_even =
        std::max(report.max_dev_interleaved_even,
                 dev(table.q(uk - l, uk + l), table.q(uk - l + 1, uk + l), factor));
  }
  // q(k-l+1, k+l) = (1 + 2 a*_{2l-2}/k + 2 a*_{2l-1}/k) q(k-l+1, k+l-1)
  for (std::uint32_t l = 2; l <= std::min<std::uint32_t>(l_window, uk); ++l) {
    const double factor =
        1.0 + 2.0 * (limits.star(2 * l - 2) + limits.star(2 * l - 1)) / fk;
    report.max_dev_interleaved_odd =
        std::max(report.max_dev_interleaved_odd,
                 dev(table.q(uk - l + 1, uk + l), table.q(uk - l + 1, uk + l - 1),
                     factor));
  }
  // q(k-l, k+l) = (1 + 2 a*_{2l-2}/k + 4 a*_{2l-1}/k + 2 a*_{2l}/k)
  //               * q(k-l+1, k+l-1)
  for (std::uint32_t l = 2; l <= std::min<std::uint32_t>(l_window, uk - 1); ++l) {
    const double factor = 1.0 + (2.0 * limits.star(2 * l - 2) +
                                 4.0 * limits.star(2 * l - 1) +
                                 2.0 * limits.star(2 * l)) / fk;
    report.max_dev_same_rank_even =
        std::max(report.max_dev_same_rank_even,
                 dev(table.q(uk - l, uk + l), table.q(uk - l + 1, uk + l - 1),
                     factor));
  }
  // q(k-l, k+l+1) = (1 + 2 a*_{2l-1}/k + 4 a*_{2l}/k + 2 a*_{2l+1}/k)
  //                 * q(k-l+1, k+l)
  for (std::uint32_t l = 1; l <= std::min<std::uint32_t>(l_window, uk - 1); ++l) {
    const double factor = 1.0 + (2.0 * limits.star(2 * l - 1) +
                                 4.0 * limits.star(2 * l) +
                                 2.0 * limits.star(2 * l + 1)) / fk;
    report.max_dev_same_rank_odd =
        std::max(report.max_dev_same_rank_odd,
                 dev(table.q(uk - l, uk + l + 1), table.q(uk - l + 1, uk + l),
                     factor));
  }
  report.axis_gap_even = std::fabs(table.q(0, 2 * uk) - table.q(1, 2 * uk - 1));
  report.axis_gap_odd = std::fabs(table.q(0, 2 * uk + 1) - table.q(1, 2 * uk));
  return report;
}

}  // namespace qwalk
