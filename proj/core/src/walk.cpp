#include "qwalk/walk.hpp"

#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk {

StepDistribution step_distribution(const AlphaField& field, WalkState s) {
  StepDistribution d;
  if (s.I == 0 && s.J == 0) {
    d.p_J_up = 1.0;
    return d;
  }
  if (s.I == s.J) {
    d.p_J_up = 0.5;
    d.p_I_down = 0.5;
    return d;
  }
  if (s.I == 0) {
    d.p_J_up = 0.25;
    d.p_J_down = 0.25;
    d.p_I_up = 0.5;
    return d;
  }
  const double drift = field.evaluate(s.I, s.J) / static_cast<double>(s.norm());
  d.p_J_up = 0.25 + drift;
  d.p_J_down = 0.25 - drift;
  d.p_I_up = 0.25 - drift;
  d.p_I_down = 0.25 + drift;
  return d;
}

WalkState step(const AlphaField& field, WalkState s, SplitMix64& rng) {
  const StepDistribution d = step_distribution(field, s);
  const double u = rng.next_double();
  // Fixed slot order J+1, J-1, I+1, I-1; the final branch absorbs rounding.
  if (u < d.p_J_up) {
    return {s.I, s.J + 1};
  }
  if (u < d.p_J_up + d.p_J_down) {
    return {s.I, s.J - 1};
  }
  if (u < d.p_J_up + d.p_J_down + d.p_I_up) {
    return {s.I + 1, s.J};
  }
  return {s.I - 1, s.J};
}

Trajectory simulate(const AlphaField& field, WalkState start,
                    std::uint64_t steps, std::uint64_t seed) {
  if (start.I > start.J) {
    throw ConstraintError("simulate: start state must satisfy I <= J");
  }
  Trajectory traj;
  traj.seed = seed;
  traj.states.reserve(steps + 1);
  traj.states.push_back(start);
  SplitMix64 rng(seed);
  WalkState s = start;
  for (std::uint64_t t = 0; t < steps; ++t) {
    try {
      s = step(field, s, rng);
    } catch (const ConstraintError& e) {
      std::ostringstream os;
      os << "simulate aborted at step " << t << ", state (" << s.I << ","
         << s.J << "): " << e.what();
      throw ConstraintError(os.str());
    }
    traj.states.push_back(s);
  }
  return traj;
}

std::map<std::uint32_t, NormCounts> norm_transition_counts(const Trajectory& traj) {
  if (traj.states.empty()) {
    throw ConstraintError("norm_transition_counts: empty trajectory");
  }
  std::map<std::uint32_t, NormCounts> counts;
  for (std::size_t t = 0; t + 1 < traj.states.size(); ++t) {
    const std::uint32_t n0 = traj.states[t].norm();
    const std::uint32_t n1 = traj.states[t + 1].norm();
    if (n1 == n0 + 1) {
      ++counts[n0].up;
    } else if (n1 + 1 == n0) {
      ++counts[n0].down;
    } else {
      throw ConstraintError("norm_transition_counts: non-unit norm step");
    }
  }
  return counts;
}

}  // namespace qwalk
