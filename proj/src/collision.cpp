#include "collisionlab/collision.hpp"

#include <numeric>
#include <string>

namespace collisionlab {

CollisionReport count_collisions(const Trajectory& x, const Trajectory& y) {
  if (x.steps.size() != y.steps.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "trajectories have " + std::to_string(x.steps.size()) + " and " +
                    std::to_string(y.steps.size()) + " positions",
                "trajectory");
  }
  CollisionReport report;
  if (x.steps.empty()) return report;
  report.includes_time_zero = x.steps[0] == y.steps[0];
  for (std::size_t n = 1; n < x.steps.size(); ++n) {
    if (x.steps[n] == y.steps[n]) report.collision_times.push_back(n);
  }
  report.collision_count = report.collision_times.size();
  return report;
}

namespace {

void require_pair_chain(const Network& net, const Limits& limits) {
  const std::uint64_t states = static_cast<std::uint64_t>(net.vertex_count()) * net.vertex_count();
  if (states > limits.pair_state_cap) {
    throw Error(ErrorCode::ResourceLimit,
                "pair chain has " + std::to_string(states) +
                    " states, above pair_state_cap = " + std::to_string(limits.pair_state_cap),
                "pair_state_cap");
  }
}

/// One step of the independent pair chain: mass <- (P x P)^T mass, then the
/// diagonal is cleared. `mass` is row-major |V| x |V|.
void pair_step(const Network& net, std::vector<double>& mass, std::vector<double>& scratch) {
  const std::size_t n = net.vertex_count();
  std::fill(scratch.begin(), scratch.end(), 0.0);
  // Move the second walker: scratch[x][y'] = sum_y mass[x][y] p(y,y').
  for (std::size_t x = 0; x < n; ++x) {
    const double* row = mass.data() + x * n;
    double* out = scratch.data() + x * n;
    for (VertexId y = 0; y < n; ++y) {
      const double m = row[y];
      if (m == 0.0) continue;
      const double cy = net.conductance(y);
      if (cy == 0.0) {
        out[y] += m;
        continue;
      }
      const auto ids = net.neighbors(y);
      const auto cs = net.neighbor_conductances(y);
      for (std::size_t k = 0; k < ids.size(); ++k) out[ids[k]] += m * cs[k] / cy;
    }
  }
  // Move the first walker: mass[x'][y'] = sum_x p(x,x') scratch[x][y'].
  std::fill(mass.begin(), mass.end(), 0.0);
  for (VertexId x = 0; x < n; ++x) {
    const double* row = scratch.data() + static_cast<std::size_t>(x) * n;
    const double cx = net.conductance(x);
    if (cx == 0.0) {
      double* out = mass.data() + static_cast<std::size_t>(x) * n;
      for (std::size_t y = 0; y < n; ++y) out[y] += row[y];
      continue;
    }
    const auto ids = net.neighbors(x);
    const auto cs = net.neighbor_conductances(x);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const double w = cs[k] / cx;
      double* out = mass.data() + static_cast<std::size_t>(ids[k]) * n;
      for (std::size_t y = 0; y < n; ++y) out[y] += w * row[y];
    }
  }
  for (std::size_t v = 0; v < n; ++v) mass[v * n + v] = 0.0;
}

std::vector<double> q0_series_unchecked(const Network& net, VertexId v, std::uint64_t m) {
  const std::size_t n = net.vertex_count();
  std::vector<double> mass(n * n, 0.0);
  std::vector<double> scratch(n * n, 0.0);
  mass[static_cast<std::size_t>(v) * n + v] = 1.0;
  std::vector<double> series;
  series.reserve(m + 1);
  series.push_back(1.0);
  for (std::uint64_t k = 1; k <= m; ++k) {
    pair_step(net, mass, scratch);
    double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    // Rounding can push a survival probability a hair outside [0, previous].
    total = std::clamp(total, 0.0, series.back());
    series.push_back(total);
  }
  return series;
}

void check_vertex(const Network& net, VertexId v, const char* field) {
  if (!net.contains(v)) {
    throw Error(ErrorCode::EndpointOutOfRange,
                "vertex " + std::to_string(v) + " is outside the network", field);
  }
}

}  // namespace

TabooTable::TabooTable(const Network& net, std::uint64_t max_window, const Limits& limits)
    : max_window_(max_window) {
  require_pair_chain(net, limits);
  table_.reserve(net.vertex_count());
  for (VertexId v = 0; v < net.vertex_count(); ++v) {
    table_.push_back(q0_series_unchecked(net, v, max_window));
  }
}

std::vector<double> q0_series(const Network& net, VertexId v, std::uint64_t m,
                              const Limits& limits) {
  check_vertex(net, v, "v");
  require_pair_chain(net, limits);
  return q0_series_unchecked(net, v, m);
}

double q0_exact(const Network& net, VertexId v, std::uint64_t m, const Limits& limits) {
  return q0_series(net, v, m, limits).back();
}

double qlast_horizon(const Network& net, VertexId u, VertexId v, std::uint64_t n,
                     std::uint64_t horizon, const Limits& limits) {
  check_vertex(net, u, "u");
  check_vertex(net, v, "v");
  if (n > horizon) {
    throw Error(ErrorCode::InvalidArgument, "collision time exceeds the window", "n");
  }
  require_pair_chain(net, limits);
  std::vector<double> row(net.vertex_count(), 0.0);
  row[u] = 1.0;
  for (std::uint64_t k = 0; k < n; ++k) row = push_forward(net, row);
  const double p = row[v];
  return p * p * q0_series_unchecked(net, v, horizon - n).back();
}

HorizonEstimates horizon_estimates(const Network& net, VertexId u, const TabooTable& taboo,
                                   std::uint64_t horizon) {
  check_vertex(net, u, "u");
  if (horizon > taboo.max_window()) {
    throw Error(ErrorCode::InvalidArgument, "taboo table is shorter than the horizon", "N");
  }
  const std::size_t n = net.vertex_count();
  HorizonEstimates est;
  est.horizon = horizon;
  est.source = u;
  est.q0_by_vertex.reserve(n);
  for (VertexId v = 0; v < n; ++v) {
    const auto s = taboo.series(v);
    est.q0_by_vertex.emplace_back(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(horizon + 1));
  }
  std::vector<double> row(n, 0.0);
  row[u] = 1.0;
  est.qlast_by_vertex_time.reserve(horizon + 1);
  for (std::uint64_t t = 0; t <= horizon; ++t) {
    if (t > 0) row = push_forward(net, row);
    std::vector<double> slice(n);
    for (VertexId v = 0; v < n; ++v) {
      slice[v] = row[v] * row[v] * taboo.q0(v, horizon - t);
      est.identity_total += slice[v];
    }
    est.qlast_by_vertex_time.push_back(std::move(slice));
  }
  return est;
}

HorizonEstimates horizon_estimates(const Network& net, VertexId u, std::uint64_t horizon,
                                   const Limits& limits) {
  check_vertex(net, u, "u");
  return horizon_estimates(net, u, TabooTable(net, horizon, limits), horizon);
}

double last_collision_identity(const Network& net, VertexId u, std::uint64_t horizon,
                               const TabooTable& taboo) {
  return horizon_estimates(net, u, taboo, horizon).identity_total;
}

double last_collision_identity(const Network& net, VertexId u, std::uint64_t horizon,
                               const Limits& limits) {
  return horizon_estimates(net, u, horizon, limits).identity_total;
}

Estimate empirical_q0(const Network& net, VertexId v, std::uint64_t m, std::uint64_t replicas,
                      std::uint64_t master_seed, unsigned workers) {
  check_vertex(net, v, "v");
  if (replicas == 0) throw Error(ErrorCode::InvalidArgument, "replicas must be >= 1", "replicas");
  std::vector<std::uint8_t> survived(replicas, 0);
  detail::parallel_for(replicas, workers, [&](std::uint64_t r) {
    Engine rx = make_engine({master_seed, derive_stream(master_seed, r, 0)});
    Engine ry = make_engine({master_seed, derive_stream(master_seed, r, 1)});
    VertexId x = v;
    VertexId y = v;
    for (std::uint64_t k = 0; k < m; ++k) {
      x = sample_step(net, x, rx);
      y = sample_step(net, y, ry);
      if (x == y) return;
    }
    survived[r] = 1;
  });
  const double hits = static_cast<double>(std::accumulate(survived.begin(), survived.end(), 0.0));
  const double p = hits / static_cast<double>(replicas);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(replicas)), replicas};
}

ParityVerdict parity_feasibility(const Network& net, VertexId u, VertexId v) {
  check_vertex(net, u, "u");
  check_vertex(net, v, "v");
  if (u == v) return ParityVerdict::feasible;
  const Bipartition parts = is_bipartite(net);
  if (parts.bipartite && parts.coloring[u] != parts.coloring[v]) {
    return ParityVerdict::always_infeasible;
  }
  return ParityVerdict::feasible;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

GrowthRow summarize_counts(std::uint64_t horizon, std::span<const std::uint64_t> counts) {
  GrowthRow row;
  row.horizon = horizon;
  row.replicas = counts.size();
  if (counts.empty()) return row;
  std::vector<double> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  // exact for integer counts
  const double sum = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  row.mean = sum / n;
  double ss = 0.0;
  for (double c : sorted) ss += (c - row.mean) * (c - row.mean);
  row.standard_error = sorted.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  row.median = quantile_sorted(sorted, 0.5);
  row.q10 = quantile_sorted(sorted, 0.1);
  row.q90 = quantile_sorted(sorted, 0.9);
  return row;
}

}  // namespace collisionlab
