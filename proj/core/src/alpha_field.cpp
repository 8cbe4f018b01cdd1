#include "qwalk/alpha_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk {

AlphaField::AlphaField(FieldKind kind, double bound_C, EvalFn raw,
                       std::string description, double contraction_gamma)
    : kind_(kind),
      bound_C_(bound_C),
      contraction_gamma_(contraction_gamma),
      raw_(std::move(raw)),
      description_(std::move(description)) {
  if (!(bound_C_ > 0.0)) {
    throw ConstraintError("AlphaField: bound C must be positive");
  }
}

double AlphaField::evaluate_unchecked(std::uint32_t i, std::uint32_t j) const {
  if (i > j) {
    throw ConstraintError("AlphaField::evaluate: require i <= j, got (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
  }
  if (i == 0 || i == j) {
    return 0.0;  // unused entries, equated to zero
  }
  return raw_(i, j);
}

double AlphaField::evaluate(std::uint32_t i, std::uint32_t j) const {
  const double value = evaluate_unchecked(i, j);
  if (i == 0 || i == j) {
    return value;
  }
  const double norm = static_cast<double>(i) + static_cast<double>(j);
  const double limit = std::min(bound_C_, norm / 4.0);
  if (!(std::fabs(value) < limit)) {
    std::ostringstream os;
    os << "coefficient bound violated at (" << i << "," << j << "): |"
       << value << "| >= min{C=" << bound_C_ << ", (i+j)/4=" << norm / 4.0
       << "}";
    throw ConstraintError(os.str());
  }
  return value;
}

double AlphaField::constant_value() const {
  if (kind_ != FieldKind::Constant) {
    throw ConstraintError("constant_value() on a non-constant field");
  }
  return raw_(1, 2);
}

AlphaField make_constant_field(double alpha, double bound_C) {
  if (!(std::fabs(alpha) < bound_C)) {
    throw ConstraintError("make_constant_field: require |alpha| < C");
  }
  std::ostringstream os;
  os << "constant alpha=" << alpha;
  return AlphaField(
      FieldKind::Constant, bound_C,
      [alpha](std::uint32_t, std::uint32_t) { return alpha; }, os.str(),
      /*contraction_gamma=*/0.0);
}

AlphaField make_table_field(
    const std::vector<std::pair<std::uint64_t, double>>& star_values,
    double bound_C, double fill_rate) {
  if (!(fill_rate > 0.0 && fill_rate < 1.0)) {
    throw ConstraintError("make_table_field: fill rate must lie in (0,1)");
  }
  std::uint64_t m_max = 0;
  for (const auto& [m, v] : star_values) {
    if (m == 0 && v != 0.0) {
      throw ConstraintError("make_table_field: star_0 is forced to zero");
    }
    if (!(std::fabs(v) < bound_C)) {
      throw ConstraintError("make_table_field: |star_m| must be < C");
    }
    m_max = std::max(m_max, m);
  }
  std::vector<double> dense(m_max + 1, 0.0);
  std::vector<bool> given(m_max + 1, false);
  for (const auto& [m, v] : star_values) {
    dense[m] = v;
    given[m] = true;
  }
  // Unlisted interior m fall back to the nearest listed value below; the
  // tail beyond m_max continues with the last value.
  double last = 0.0;
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    if (given[m]) {
      last = dense[m];
    } else {
      dense[m] = last;
    }
  }
  auto fn = [dense = std::move(dense), fill_rate](std::uint32_t i,
                                                  std::uint32_t j) {
    const std::uint64_t m = j - i;
    const double star = (m < dense.size()) ? dense[m] : dense.back();
    return star * (1.0 - std::pow(fill_rate, static_cast<double>(i)));
  };
  return AlphaField(FieldKind::DiagonalTable, bound_C, std::move(fn),
                    "diagonal-limit table", fill_rate);
}

AlphaField make_expression_field(const std::string& expr_text, double bound_C) {
  Expression expr = Expression::parse(expr_text);
  auto fn = [expr](std::uint32_t i, std::uint32_t j) {
    return expr.evaluate({{"i", static_cast<double>(i)},
                          {"j", static_cast<double>(j)},
                          {"n", static_cast<double>(i) + static_cast<double>(j)}});
  };
  return AlphaField(FieldKind::UserFunction, bound_C, std::move(fn),
                    "expression " + expr_text);
}

AlphaField make_function_field(AlphaField::EvalFn fn, double bound_C,
                               std::string description) {
  return AlphaField(FieldKind::UserFunction, bound_C, std::move(fn),
                    std::move(description));
}

DiagonalLimits::DiagonalLimits(std::vector<double> values, double tail,
                               bool tail_settled, double tail_estimate_error)
    : values_(std::move(values)),
      tail_(tail),
      tail_settled_(tail_settled),
      tail_estimate_error_(tail_estimate_error) {
  if (values_.empty()) {
    throw ConstraintError("DiagonalLimits: need at least star_0");
  }
}

namespace {

struct DiagonalEstimate {
  double value;
  double tail_error;
};

// Walks alpha_(k, k+m) up the diagonal until the differences drop below tol,
// then extrapolates the geometric remainder from the signed difference ratio.
DiagonalEstimate estimate_one_limit(const AlphaField& field, std::uint64_t m,
                                    std::uint32_t k_max, double tol) {
  double prev = 0.0;
  double prev_diff = 0.0;
  bool have_prev = false;
  bool have_diff = false;
  int non_contracting = 0;
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    double cur;
    try {
      cur = field.evaluate(k, static_cast<std::uint32_t>(k + m));
    } catch (const ConstraintError&) {
      // Near-origin pairs may sit outside the admissible region; the limit
      // only involves large k.
      continue;
    }
    if (have_prev) {
      const double diff = cur - prev;
      if (std::fabs(diff) < tol) {
        double extrap = 0.0;
        double err = 0.0;
        if (have_diff && prev_diff != 0.0) {
          const double ratio = diff / prev_diff;
          if (std::fabs(ratio) < 1.0) {
            extrap = diff * ratio / (1.0 - ratio);
            err = std::fabs(diff) * std::fabs(ratio) / (1.0 - std::fabs(ratio));
          }
        }
        return {cur + extrap, err + std::fabs(diff)};
      }
      if (have_diff) {
        if (std::fabs(diff) >= std::fabs(prev_diff)) {
          if (++non_contracting >= 3) {
            throw ConvergenceError(
                "diagonal_limits: differences along diagonal m=" +
                std::to_string(m) + " do not contract");
          }
        } else {
          non_contracting = 0;
        }
      }
      prev_diff = diff;
      have_diff = true;
    }
    prev = cur;
    have_prev = true;
  }
  if (!have_prev) {
    throw ConvergenceError("diagonal_limits: no admissible samples for m=" +
                           std::to_string(m));
  }
  // Ran out of samples before reaching tol: extrapolate from the last ratio.
  if (have_diff && prev_diff != 0.0) {
    throw ConvergenceError(
        "diagonal_limits: k_max too small to reach tol on diagonal m=" +
        std::to_string(m));
  }
  return {prev, 0.0};
}

}  // namespace

DiagonalLimits diagonal_limits(const AlphaField& field, std::uint32_t k_max,
                               double tol, std::uint64_t m_cap) {
  if (k_max == 0 || !(tol > 0.0)) {
    throw ConstraintError("diagonal_limits: need k_max >= 1 and tol > 0");
  }
  std::vector<double> values(m_cap + 1, 0.0);
  double max_err = 0.0;
  for (std::uint64_t m = 1; m <= m_cap; ++m) {
    const DiagonalEstimate est = estimate_one_limit(field, m, k_max, tol);
    values[m] = est.value;
    max_err = std::max(max_err, est.tail_error);
  }
  // The kappa formulas consume star_m for m up to ~2k, far beyond any dense
  // table; continue with the last value and record whether the m-tail had
  // settled by m_cap.
  const double tail = values[m_cap];
  double settle_gap = 0.0;
  if (m_cap >= 2) {
    settle_gap = std::max(std::fabs(values[m_cap] - values[m_cap - 1]),
                          std::fabs(values[m_cap - 1] - values[m_cap - 2]));
  }
  const bool settled = settle_gap <= tol * 10.0;
  return DiagonalLimits(std::move(values), tail, settled,
                        max_err + settle_gap);
}

std::string FieldViolation::to_string() const {
  std::ostringstream os;
  os << (kind == Kind::Bound ? "bound" : "contraction") << " violation at ("
     << i << "," << j << "): value " << value << ", limit " << limit;
  return os.str();
}

std::vector<FieldViolation> validate_field(const AlphaField& field,
                                           std::uint32_t rank_max,
                                           std::uint32_t n0) {
  if (rank_max < 2) {
    throw ConstraintError("validate_field: rank_max must be >= 2");
  }
  std::vector<FieldViolation> violations;
  // Bound check on every used pair in the window.
  for (std::uint32_t n = 3; n <= rank_max; ++n) {
    for (std::uint32_t i = 1; 2 * i < n; ++i) {
      const std::uint32_t j = n - i;
      const double value = field.evaluate_unchecked(i, j);
      const double limit =
          std::min(field.bound_C(), static_cast<double>(n) / 4.0);
      if (!(std::fabs(value) < limit)) {
        violations.push_back(
            {FieldViolation::Kind::Bound, i, j, value, limit});
      }
    }
  }
  // Contraction check: |a(i+1,j+1) - a(i,j)| <= |a(i,j) - a(i-1,j-1)| for
  // i >= 2 and i + j > n0 (strictly growing differences flag a violation).
  for (std::uint32_t n = std::max(n0 + 1, 5u); n + 2 <= rank_max; ++n) {
    for (std::uint32_t i = 2; 2 * i < n; ++i) {
      const std::uint32_t j = n - i;
      const double lower = field.evaluate_unchecked(i - 1, j - 1);
      const double mid = field.evaluate_unchecked(i, j);
      const double upper = field.evaluate_unchecked(i + 1, j + 1);
      const double prev_diff = std::fabs(mid - lower);
      const double next_diff = std::fabs(upper - mid);
      if (prev_diff > 0.0 && next_diff > prev_diff) {
        violations.push_back({FieldViolation::Kind::Contraction, i, j,
                              next_diff, prev_diff});
      }
    }
  }
  return violations;
}

}  // namespace qwalk
