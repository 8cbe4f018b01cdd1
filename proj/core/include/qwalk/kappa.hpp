#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwalk/alpha_field.hpp"

namespace qwalk {

enum class KappaMode { Auto, ProductLimit, CesaroAverage, ClosedForm };
enum class Verdict { Recurrent, Transient, Marginal };

/// A kappa evaluation with its convergence diagnostics.
struct KappaEstimate {
  double value = 0.0;      // extrapolated kappa
  KappaMode mode = KappaMode::ProductLimit;
  std::uint64_t k_used = 0;        // largest k evaluated
  double convergence_gap = 0.0;    // |kappa(k_last) - kappa(k_prev)|
  std::vector<double> schedule_values;  // raw value at each schedule point
};

/// Classification outcome. psi_index = ln(kappa) is the primary index
/// reading; psi_literal = kappa is the alternate one (see notes emitted with
/// the report), and cesaro_value records the averaged form for comparison
/// with the product form.
struct ClassificationReport {
  KappaEstimate kappa;
  Verdict verdict = Verdict::Marginal;
  double psi_index = 0.0;
  double psi_literal = 0.0;
  double cesaro_value = 0.0;
  double decision_margin = 0.0;
  std::string notes;
};

/// Finite product of the classification factors at truncation level k:
///   prod_{i=1}^{k-1} (1 + 2 a*_{2k-2i}/k + 4 a*_{2k-2i-1}/k + 2 a*_{2k-2i-2}/k),
/// accumulated in the log domain. Throws if any factor is nonpositive
/// (k too small for the coefficient magnitudes).
double kappa_product(const DiagonalLimits& limits, std::uint64_t k);

/// The averaged form at truncation level k:
///   (1/k) sum_{j=1}^{k-1} prod_{i=1}^{j} (same factors),
/// with prefix products accumulated incrementally in the log domain.
double kappa_cesaro(const DiagonalLimits& limits, std::uint64_t k);

/// Evaluates kappa over an increasing schedule of k, Richardson-extrapolates
/// in 1/k, and classifies: kappa <= 1 recurrent, kappa > 1 transient, with a
/// margin band around 1 in which the verdict is Marginal rather than a
/// guess. An exactly-unit kappa with zero gap across the schedule is the
/// boundary case and classifies as Recurrent.
ClassificationReport classify(const AlphaField& field,
                              const std::vector<std::uint64_t>& k_schedule = {
                                  1000, 10000, 100000, 1000000},
                              KappaMode mode = KappaMode::Auto);

/// classify() on precomputed diagonal limits (closed form unavailable).
ClassificationReport classify_limits(const DiagonalLimits& limits,
                                     const std::vector<std::uint64_t>& k_schedule,
                                     KappaMode mode = KappaMode::Auto);

const char* to_string(Verdict v);
const char* to_string(KappaMode m);

}  // namespace qwalk
