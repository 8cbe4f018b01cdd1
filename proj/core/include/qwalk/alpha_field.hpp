#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qwalk/expr.hpp"

namespace qwalk {

/// Built-in families of coefficient fields.
enum class FieldKind { Constant, DiagonalTable, UserFunction };

/// A state-dependent coefficient field alpha_(i,j) over ordered pairs
/// 0 <= i <= j of nonnegative integers.
///
/// Entries on the axis (i = 0) and the diagonal (i = j) are not used by the
/// walk dynamics and always evaluate to zero. Every used entry must satisfy
/// |alpha_(i,j)| < min{C, (i+j)/4}; evaluate() fails fast on violation
/// instead of clamping, since a clamped field would silently describe a
/// different walk.
class AlphaField {
 public:
  using EvalFn = std::function<double(std::uint32_t i, std::uint32_t j)>;

  AlphaField(FieldKind kind, double bound_C, EvalFn raw,
             std::string description, double contraction_gamma = 0.0);

  /// alpha_(i,j) with the zero conventions and bound check applied.
  double evaluate(std::uint32_t i, std::uint32_t j) const;

  /// alpha_(i,j) with the zero conventions but without the bound check.
  /// Diagnostic use only (validate_field reports the offending values).
  double evaluate_unchecked(std::uint32_t i, std::uint32_t j) const;

  FieldKind kind() const { return kind_; }
  double bound_C() const { return bound_C_; }
  /// Contraction rate gamma of the diagonal differences, when known for the
  /// family (0 when not applicable / unknown). Metadata only.
  double contraction_gamma() const { return contraction_gamma_; }
  const std::string& description() const { return description_; }

  /// The constant value for Constant fields.
  double constant_value() const;

 private:
  FieldKind kind_;
  double bound_C_;
  double contraction_gamma_;
  EvalFn raw_;
  std::string description_;
};

/// Diagonal limits alpha*_m = lim_k alpha_(k, k+m), dense up to m_cap with a
/// constant tail beyond it.
class DiagonalLimits {
 public:
  DiagonalLimits(std::vector<double> values, double tail, bool tail_settled,
                 double tail_estimate_error);

  double star(std::uint64_t m) const {
    if (m < values_.size()) return values_[m];
    return tail_;
  }

  std::uint64_t m_cap() const { return values_.size() - 1; }
  bool tail_settled() const { return tail_settled_; }
  /// Bound on the extrapolation error of any single star(m) value
  /// (geometric-tail bound from the measured contraction ratio, plus the
  /// m-tail settling gap).
  double tail_estimate_error() const { return tail_estimate_error_; }

 private:
  std::vector<double> values_;
  double tail_;
  bool tail_settled_;
  double tail_estimate_error_;
};

/// The all-alpha constant field of Example-style families; theta is
/// make_constant_field(0, C).
AlphaField make_constant_field(double alpha, double bound_C);

/// Field defined by its diagonal-limit values star_m (m >= 1; star_0 is
/// forced to zero) with a geometric fill toward the diagonal:
///   alpha_(i, i+m) = star_m * (1 - fill_rate^i).
/// Beyond the last listed m the limits continue with the last value.
AlphaField make_table_field(const std::vector<std::pair<std::uint64_t, double>>& star_values,
                            double bound_C, double fill_rate = 0.5);

/// Field defined by a restricted arithmetic expression over i, j and
/// n = i + j.
AlphaField make_expression_field(const std::string& expr_text, double bound_C);

/// Arbitrary user closure (must be pure).
AlphaField make_function_field(AlphaField::EvalFn fn, double bound_C,
                               std::string description = "user function");

/// Estimates the diagonal limits of a field by sampling alpha_(k, k+m) for
/// increasing k until successive differences fall below tol, then adding the
/// geometric tail implied by the measured contraction ratio. Throws
/// ConvergenceError when the diagonal differences do not contract.
DiagonalLimits diagonal_limits(const AlphaField& field, std::uint32_t k_max,
                               double tol, std::uint64_t m_cap = 512);

/// One admissibility violation found by validate_field.
struct FieldViolation {
  enum class Kind { Bound, Contraction };
  Kind kind;
  std::uint32_t i;
  std::uint32_t j;
  double value;  // offending |alpha| or difference ratio
  double limit;  // allowed bound
  std::string to_string() const;
};

/// Exhaustively checks the coefficient bound on every used pair with
/// i + j <= rank_max, and the diagonal contraction on every triple with
/// i >= 2 and i + j > n0. Violations are data, not errors: an empty result
/// means the field is admissible on the window.
std::vector<FieldViolation> validate_field(const AlphaField& field,
                                           std::uint32_t rank_max,
                                           std::uint32_t n0 = 4);

}  // namespace qwalk
