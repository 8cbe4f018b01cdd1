#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

#include "qwalk/errors.hpp"

namespace qwalk {

/// Accumulates a product of factors (1 + x_i) in the log domain.
/// Keeps long products of near-unit factors stable where direct
/// multiplication would drift or under/overflow.
class LogProduct {
 public:
  /// Multiply by (1 + x). Throws if the factor is not positive.
  void multiply_one_plus(double x) {
    if (x <= -1.0) {
      throw ConstraintError("log-domain product: factor 1 + (" +
                            std::to_string(x) + ") is not positive");
    }
    log_sum_ += std::log1p(x);
  }

  double log_value() const { return log_sum_; }
  double value() const { return std::exp(log_sum_); }

 private:
  double log_sum_ = 0.0;
};

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
};

/// Weighted least-squares line y = intercept + slope * x.
/// Weights default to 1 when the span is empty.
inline LinearFit fit_line(std::span<const double> xs,
                          std::span<const double> ys,
                          std::span<const double> weights = {}) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ConstraintError("fit_line: need at least two (x, y) pairs");
  }
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    sw += w;
    swx += w * xs[i];
    swy += w * ys[i];
    swxx += w * xs[i] * xs[i];
    swxy += w * xs[i] * ys[i];
  }
  const double denom = sw * swxx - swx * swx;
  if (denom == 0.0) {
    throw ConstraintError("fit_line: degenerate abscissae");
  }
  LinearFit fit;
  fit.slope = (sw * swxy - swx * swy) / denom;
  fit.intercept = (swy - fit.slope * swx) / sw;
  return fit;
}

/// Inverse-variance weighted mean with its standard error.
/// Used for fitting a constant to noisy per-level statistics.
inline std::pair<double, double> weighted_mean(std::span<const double> values,
                                               std::span<const double> stderrs) {
  if (values.empty() || values.size() != stderrs.size()) {
    throw ConstraintError("weighted_mean: empty or mismatched inputs");
  }
  double sw = 0, swv = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double s = stderrs[i];
    const double w = (s > 0) ? 1.0 / (s * s) : 1.0;
    sw += w;
    swv += w * values[i];
  }
  return {swv / sw, 1.0 / std::sqrt(sw)};
}

}  // namespace qwalk
