#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qwalk/alpha_field.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

/// Walk state in wedge coordinates: I = min, J = max of the two components,
/// so 0 <= I <= J always. The norm is N = I + J.
struct WalkState {
  std::uint32_t I = 0;
  std::uint32_t J = 0;

  std::uint32_t norm() const { return I + J; }
  bool on_axis() const { return I == 0; }
  bool on_diagonal() const { return I == J; }
  friend bool operator==(const WalkState&, const WalkState&) = default;
};

/// One-step law at a state. The four slots are the moves J+1, J-1, I+1, I-1
/// in wedge coordinates; at the diagonal only J+1 and I-1 carry mass, and
/// from the origin the single move is J+1.
struct StepDistribution {
  double p_J_up = 0.0;
  double p_J_down = 0.0;
  double p_I_up = 0.0;
  double p_I_down = 0.0;

  double sum() const { return p_J_up + p_J_down + p_I_up + p_I_down; }
};

/// A simulated path with its seed, for reproducibility and export.
struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<WalkState> states;  // states[0] is the start; size step_count+1

  std::uint64_t step_count() const {
    return states.empty() ? 0 : states.size() - 1;
  }
};

/// The one-step law of the walk at state s.
///
/// Interior non-diagonal states perturb the simple-walk 1/4 probabilities by
/// +-alpha_(I,J)/N; the diagonal splits 1/2-1/2 between J+1 and I-1; on the
/// axis the I-move doubles to 1/2 (reflection at zero); the origin moves to
/// (0,1) with probability one.
StepDistribution step_distribution(const AlphaField& field, WalkState s);

/// Samples one transition from the law at s.
WalkState step(const AlphaField& field, WalkState s, SplitMix64& rng);

/// Reproducible simulation: the same seed yields the identical state
/// sequence. A constraint violation of the field aborts with the offending
/// state in the message.
Trajectory simulate(const AlphaField& field, WalkState start,
                    std::uint64_t steps, std::uint64_t seed);

/// Up/down transition counts by norm.
struct NormCounts {
  std::uint64_t up = 0;
  std::uint64_t down = 0;
};

/// For each norm n observed in the trajectory, the number of transitions
/// n -> n+1 and n -> n-1. Counts sum to step_count().
std::map<std::uint32_t, NormCounts> norm_transition_counts(const Trajectory& traj);

}  // namespace qwalk
