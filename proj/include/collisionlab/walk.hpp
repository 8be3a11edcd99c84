#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "collisionlab/network.hpp"
#include "collisionlab/rng.hpp"

namespace collisionlab {

/// Positions X_0..X_T of a discrete-time walk.
struct Trajectory {
  std::vector<VertexId> steps;

  std::size_t horizon() const noexcept { return steps.empty() ? 0 : steps.size() - 1; }
  bool operator==(const Trajectory&) const = default;
};

struct JumpSegment {
  VertexId vertex = 0;
  double entry_time = 0.0;
  double exit_time = 0.0;

  bool operator==(const JumpSegment&) const = default;
};

/// Piecewise-constant continuous-time path. Segments are contiguous; the first
/// starts at start_time() and the last ends at horizon().
struct JumpTrajectory {
  std::vector<JumpSegment> segments;

  double start_time() const { return segments.front().entry_time; }
  double horizon() const { return segments.back().exit_time; }
  /// Position at time t (right-continuous; t == horizon() maps to the last segment).
  VertexId at(double t) const;

  bool operator==(const JumpTrajectory&) const = default;
};

/// Restriction of a jump path to [begin, end], keeping the original clock.
JumpTrajectory restrict(const JumpTrajectory& path, double begin, double end);

/// How fast the continuous-time walk leaves a vertex u.
///   variable_speed: total rate c(u), i.e. each edge is crossed at rate c(e).
///   constant_speed: total rate 1, jump kernel p(u, .).
/// Both share the jump chain p(u,v) = c(u,v)/c(u).
enum class ClockModel : std::uint8_t { variable_speed, constant_speed };

inline double leave_rate(const Network& net, VertexId u, ClockModel clock) {
  if (net.conductance(u) == 0.0) return 0.0;
  return clock == ClockModel::variable_speed ? net.conductance(u) : 1.0;
}

/// Samples X_{n+1} given X_n = u from row u of the one-step kernel.
inline VertexId sample_step(const Network& net, VertexId u, Engine& rng) {
  const auto ids = net.neighbors(u);
  if (ids.empty()) return u;
  if (ids.size() == 1) return ids[0];
  const auto cumulative = net.cumulative_conductances(u);
  const double r = uniform01(rng) * cumulative.back();
  std::size_t k = 0;
  if (ids.size() <= 8) {
    while (k + 1 < ids.size() && cumulative[k] <= r) ++k;
  } else {
    k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), r) -
                                 cumulative.begin());
    if (k >= ids.size()) k = ids.size() - 1;
  }
  return ids[k];
}

Trajectory walk_discrete(const Network& net, VertexId start, std::uint64_t steps, SeedSpec seed);

JumpTrajectory walk_continuous(const Network& net, VertexId start, double t_max, SeedSpec seed,
                               ClockModel clock = ClockModel::variable_speed);

/// Two independent walks; walker w draws from stream hash64(stream_id, w).
std::pair<Trajectory, Trajectory> walk_pair(const Network& net, VertexId start_x,
                                            VertexId start_y, std::uint64_t steps,
                                            SeedSpec seed);

SeedSpec walker_seed(SeedSpec pair_seed, std::uint64_t walker);

/// CSV rows `replica,walker,step_or_entry_time,vertex` (no header).
void write_trajectory_csv(std::ostream& out, std::uint64_t replica, std::uint64_t walker,
                          const Trajectory& path);
void write_trajectory_csv(std::ostream& out, std::uint64_t replica, std::uint64_t walker,
                          const JumpTrajectory& path);
inline constexpr const char* kTrajectoryCsvHeader = "replica,walker,step_or_entry_time,vertex";

// Steppers: the minimal interface the Monte Carlo drivers need. A stepper
// exposes a State type and `State step(State, Engine&) const`.

class NetworkStepper {
 public:
  using State = VertexId;

  explicit NetworkStepper(const Network& net) : net_(&net) {}
  State step(State u, Engine& rng) const { return sample_step(*net_, u, rng); }
  const Network& network() const { return *net_; }

 private:
  const Network* net_;
};

/// Infinite lattice families walked without materializing a truncation.
/// Within a certified horizon the law is identical to the walk on the finite
/// truncations produced by gen_path_segment / gen_grid_box / gen_comb.
enum class LatticeKind : std::uint8_t { line, plane, comb };

class LatticeStepper {
 public:
  struct State {
    std::int64_t x = 0;
    std::int64_t y = 0;
    bool operator==(const State&) const = default;
  };

  explicit LatticeStepper(LatticeKind kind) : kind_(kind) {}

  State step(State s, Engine& rng) const {
    switch (kind_) {
      case LatticeKind::line:
        s.x += (rng() >> 63) ? 1 : -1;
        return s;
      case LatticeKind::plane:
        switch (rng() >> 62) {
          case 0: ++s.x; break;
          case 1: --s.x; break;
          case 2: ++s.y; break;
          default: --s.y; break;
        }
        return s;
      case LatticeKind::comb:
        if (s.y == 0) {
          switch (uniform_index(rng, 3)) {
            case 0: ++s.x; break;
            case 1: --s.x; break;
            default: s.y = 1; break;
          }
        } else {
          s.y += (rng() >> 63) ? 1 : -1;
        }
        return s;
    }
    return s;
  }

  LatticeKind kind() const noexcept { return kind_; }

 private:
  LatticeKind kind_;
};

}  // namespace collisionlab
