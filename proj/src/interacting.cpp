#include "collisionlab/interacting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace collisionlab {

CollisionMeasure collision_measure(const JumpTrajectory& x, const JumpTrajectory& y) {
  if (x.segments.empty() || y.segments.empty() || x.start_time() != y.start_time() ||
      x.horizon() != y.horizon()) {
    throw Error(ErrorCode::HorizonMismatch, "paths do not cover the same time window", "T_max");
  }
  CollisionMeasure measure;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.segments.size() && j < y.segments.size()) {
    const JumpSegment& a = x.segments[i];
    const JumpSegment& b = y.segments[j];
    const double lo = std::max(a.entry_time, b.entry_time);
    const double hi = std::min(a.exit_time, b.exit_time);
    if (lo < hi && a.vertex == b.vertex) {
      if (!measure.intervals.empty() && lo <= measure.intervals.back().end) {
        measure.intervals.back().end = hi;
      } else {
        measure.intervals.push_back({lo, hi});
      }
    }
    if (a.exit_time <= b.exit_time) ++i;
    if (b.exit_time <= a.exit_time) ++j;
  }
  for (const TimeInterval& piece : measure.intervals) measure.total += piece.length();
  return measure;
}

double discretization_integral(const JumpTrajectory& x, const JumpTrajectory& y,
                               std::uint64_t grid) {
  if (grid == 0) throw Error(ErrorCode::InvalidArgument, "grid must be >= 1", "grid");
  if (x.segments.empty() || y.segments.empty() || x.start_time() != y.start_time() ||
      x.horizon() != y.horizon()) {
    throw Error(ErrorCode::HorizonMismatch, "paths do not cover the same time window", "T_max");
  }
  const double begin = x.start_time();
  const double end = x.horizon();
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < grid; ++k) {
    const double s = (static_cast<double>(k) + 0.5) / static_cast<double>(grid);
    double n = std::max(0.0, std::ceil(begin - s));
    std::size_t i = 0;
    std::size_t j = 0;
    for (double t = n + s; t < end; n += 1.0, t = n + s) {
      if (t < begin) continue;
      while (i + 1 < x.segments.size() && x.segments[i].exit_time <= t) ++i;
      while (j + 1 < y.segments.size() && y.segments[j].exit_time <= t) ++j;
      hits += x.segments[i].vertex == y.segments[j].vertex ? 1U : 0U;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(grid);
}

namespace {

struct VertexClock {
  std::vector<double> cumulative;
  double total = 0.0;
  bool uniform = true;

  VertexClock(const Network& net, ClockModel clock) : uniform(clock == ClockModel::constant_speed) {
    cumulative.reserve(net.vertex_count());
    for (VertexId u = 0; u < net.vertex_count(); ++u) {
      total += leave_rate(net, u, clock);
      cumulative.push_back(total);
    }
  }

  VertexId pick(Engine& rng) const {
    if (uniform) return static_cast<VertexId>(uniform_index(rng, cumulative.size()));
    const double r = uniform01(rng) * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    return static_cast<VertexId>(
        std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1));
  }
};

}  // namespace

VoterOutcome voter_simulate(const Network& net, const VoterConfiguration& initial, double t_max,
                            SeedSpec seed, ClockModel clock) {
  const std::size_t n = net.vertex_count();
  if (initial.opinions.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "initial configuration does not cover every vertex",
                "initial");
  }
  if (!(t_max >= 0.0)) throw Error(ErrorCode::InvalidArgument, "T_max must be >= 0", "T_max");
  VoterOutcome outcome;
  outcome.final_state = initial;
  std::vector<std::uint8_t>& op = outcome.final_state.opinions;
  std::size_t ones = 0;
  for (std::uint8_t& o : op) {
    if (o > 1) throw Error(ErrorCode::InvalidArgument, "opinions must be 0 or 1", "initial");
    ones += o;
  }
  const auto check_consensus = [&](double now) {
    if (ones == 0 || ones == n) {
      outcome.consensus_time = now;
      outcome.consensus_value = ones == 0 ? 0 : 1;
      return true;
    }
    return false;
  };

  double now = initial.time;
  outcome.final_state.time = std::max(now, t_max);
  if (check_consensus(now)) return outcome;

  const VertexClock clocks(net, clock);
  Engine rng = make_engine(seed);
  while (true) {
    now += exponential(rng, clocks.total);
    if (now >= t_max) break;
    const VertexId u = clocks.pick(rng);
    const VertexId v = sample_step(net, u, rng);
    if (op[u] == op[v]) continue;
    ones = ones + op[v] - op[u];
    op[u] = op[v];
    if (check_consensus(now)) break;
  }
  return outcome;
}

Coalescence coalescing_walks(const Network& net, const std::vector<VertexId>& starts,
                             double t_max, SeedSpec seed, ClockModel clock) {
  const std::size_t k = starts.size();
  for (VertexId s : starts) {
    if (!net.contains(s)) {
      throw Error(ErrorCode::EndpointOutOfRange, "start vertex is outside the network", "starts");
    }
  }
  std::vector<std::size_t> absorbed_into(k);
  std::vector<VertexId> position(starts.begin(), starts.end());
  Coalescence result;
  result.merge_time.assign(k, std::nullopt);

  std::vector<std::int64_t> occupant(net.vertex_count(), -1);
  std::vector<std::size_t> active;
  for (std::size_t id = 0; id < k; ++id) {
    absorbed_into[id] = id;
    const std::int64_t other = occupant[starts[id]];
    if (other >= 0) {
      absorbed_into[id] = static_cast<std::size_t>(other);
      result.merge_time[id] = 0.0;
    } else {
      occupant[starts[id]] = static_cast<std::int64_t>(id);
      active.push_back(id);
    }
  }

  Engine rng = make_engine(seed);
  double now = 0.0;
  std::vector<double> rates;
  while (!active.empty()) {
    rates.clear();
    double total = 0.0;
    for (std::size_t id : active) {
      total += leave_rate(net, position[id], clock);
      rates.push_back(total);
    }
    now += exponential(rng, total);
    if (now >= t_max) break;
    const double r = uniform01(rng) * total;
    std::size_t slot = static_cast<std::size_t>(
        std::upper_bound(rates.begin(), rates.end(), r) - rates.begin());
    slot = std::min(slot, active.size() - 1);
    const std::size_t id = active[slot];
    const VertexId from = position[id];
    const VertexId to = sample_step(net, from, rng);
    if (to == from) continue;
    occupant[from] = -1;
    const std::int64_t other = occupant[to];
    if (other < 0) {
      position[id] = to;
      occupant[to] = static_cast<std::int64_t>(id);
      continue;
    }
    const auto keeper = std::min(id, static_cast<std::size_t>(other));
    const auto absorbed = std::max(id, static_cast<std::size_t>(other));
    absorbed_into[absorbed] = keeper;
    result.merge_time[absorbed] = now;
    position[keeper] = to;
    occupant[to] = static_cast<std::int64_t>(keeper);
    active.erase(std::find(active.begin(), active.end(), absorbed));
  }

  result.representative.resize(k);
  result.positions.resize(k);
  for (std::size_t id = 0; id < k; ++id) {
    std::size_t root = id;
    while (absorbed_into[root] != root) root = absorbed_into[root];
    result.representative[id] = root;
    result.positions[id] = position[root];
  }
  return result;
}

}  // namespace collisionlab
