#include "collisionlab/walk.hpp"

#include <charconv>
#include <ostream>

namespace collisionlab {

VertexId JumpTrajectory::at(double t) const {
  auto it = std::upper_bound(segments.begin(), segments.end(), t,
                             [](double time, const JumpSegment& s) { return time < s.entry_time; });
  if (it == segments.begin()) return segments.front().vertex;
  return std::prev(it)->vertex;
}

JumpTrajectory restrict(const JumpTrajectory& path, double begin, double end) {
  if (!(begin < end) || begin < path.start_time() || end > path.horizon()) {
    throw Error(ErrorCode::InvalidArgument, "restriction window is outside the path", "window");
  }
  JumpTrajectory out;
  for (const JumpSegment& s : path.segments) {
    const double lo = std::max(s.entry_time, begin);
    const double hi = std::min(s.exit_time, end);
    if (lo < hi) out.segments.push_back({s.vertex, lo, hi});
  }
  return out;
}

SeedSpec walker_seed(SeedSpec pair_seed, std::uint64_t walker) {
  return {pair_seed.master_seed, hash64({pair_seed.stream_id, walker})};
}

namespace {

void check_start(const Network& net, VertexId start) {
  if (!net.contains(start)) {
    throw Error(ErrorCode::EndpointOutOfRange, "start vertex is outside the network", "start");
  }
}

}  // namespace

Trajectory walk_discrete(const Network& net, VertexId start, std::uint64_t steps, SeedSpec seed) {
  check_start(net, start);
  Engine rng = make_engine(seed);
  Trajectory path;
  path.steps.reserve(steps + 1);
  path.steps.push_back(start);
  VertexId u = start;
  for (std::uint64_t n = 0; n < steps; ++n) {
    u = sample_step(net, u, rng);
    path.steps.push_back(u);
  }
  return path;
}

JumpTrajectory walk_continuous(const Network& net, VertexId start, double t_max, SeedSpec seed,
                               ClockModel clock) {
  check_start(net, start);
  if (!(t_max > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "T_max must be positive", "T_max");
  }
  Engine rng = make_engine(seed);
  JumpTrajectory path;
  VertexId u = start;
  double now = 0.0;
  while (true) {
    const double exit = now + exponential(rng, leave_rate(net, u, clock));
    if (exit >= t_max) {
      path.segments.push_back({u, now, t_max});
      return path;
    }
    path.segments.push_back({u, now, exit});
    now = exit;
    u = sample_step(net, u, rng);
  }
}

std::pair<Trajectory, Trajectory> walk_pair(const Network& net, VertexId start_x,
                                            VertexId start_y, std::uint64_t steps,
                                            SeedSpec seed) {
  return {walk_discrete(net, start_x, steps, walker_seed(seed, 0)),
          walk_discrete(net, start_y, steps, walker_seed(seed, 1))};
}

namespace {

void put_double(std::ostream& out, double value) {
  char buffer[32];
  const auto res = std::to_chars(buffer, buffer + sizeof buffer, value);
  out.write(buffer, res.ptr - buffer);
}

}  // namespace

void write_trajectory_csv(std::ostream& out, std::uint64_t replica, std::uint64_t walker,
                          const Trajectory& path) {
  for (std::size_t n = 0; n < path.steps.size(); ++n) {
    out << replica << ',' << walker << ',' << n << ',' << path.steps[n] << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, std::uint64_t replica, std::uint64_t walker,
                          const JumpTrajectory& path) {
  for (const JumpSegment& s : path.segments) {
    out << replica << ',' << walker << ',';
    put_double(out, s.entry_time);
    out << ',' << s.vertex << '\n';
  }
}

}  // namespace collisionlab
