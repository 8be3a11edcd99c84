#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "collisionlab/network.hpp"
#include "collisionlab/rng.hpp"
#include "collisionlab/walk.hpp"

namespace collisionlab {

struct TimeInterval {
  double begin = 0.0;
  double end = 0.0;
  double length() const { return end - begin; }
};

/// Lebesgue measure of {t : X_t = Y_t} over the common window, with the set
/// itself as disjoint sorted intervals (touching pieces merged).
struct CollisionMeasure {
  double total = 0.0;
  std::vector<TimeInterval> intervals;
};

/// Throws HorizonMismatch unless both paths cover the same window.
CollisionMeasure collision_measure(const JumpTrajectory& x, const JumpTrajectory& y);

/// Midpoint-rule estimate of  int_0^1 #{n >= 0 : X_{n+s} = Y_{n+s}} ds  with
/// `grid` offsets s = (k + 1/2)/grid, counting n + s inside the window.
/// Converges to collision_measure(x, y).total; the error is at most
/// (number of intervals) / grid.
double discretization_integral(const JumpTrajectory& x, const JumpTrajectory& y,
                               std::uint64_t grid);

struct VoterConfiguration {
  std::vector<std::uint8_t> opinions;
  double time = 0.0;
};

struct VoterOutcome {
  VoterConfiguration final_state;
  /// First time all opinions agree, if reached by T_max.
  std::optional<double> consensus_time;
  std::optional<std::uint8_t> consensus_value;
};

/// Voter model, event-driven. Vertex u updates at rate r(u) (1 for
/// constant_speed, c(u) for variable_speed), copying the opinion of a
/// neighbor v drawn with probability p(u,v). This is dual to coalescing walks
/// run with the same clock model. Under constant_speed the pi-weighted
/// opinion sum is a martingale; under variable_speed the uniform one is.
VoterOutcome voter_simulate(const Network& net, const VoterConfiguration& initial, double t_max,
                            SeedSpec seed, ClockModel clock = ClockModel::constant_speed);

struct Coalescence {
  /// For each start index, the smallest start index in its coalesced class.
  std::vector<std::size_t> representative;
  /// Position at T_max of each start's class.
  std::vector<VertexId> positions;
  /// Time at which each start index was absorbed into a smaller one (empty for
  /// class representatives).
  std::vector<std::optional<double>> merge_time;
};

/// Continuous-time walks that merge permanently on meeting. The smallest id of
/// a merged class carries the motion.
Coalescence coalescing_walks(const Network& net, const std::vector<VertexId>& starts,
                             double t_max, SeedSpec seed,
                             ClockModel clock = ClockModel::constant_speed);

}  // namespace collisionlab
