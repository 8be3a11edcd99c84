#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "collisionlab/detail/parallel.hpp"
#include "collisionlab/models.hpp"
#include "collisionlab/network.hpp"
#include "collisionlab/walk.hpp"

namespace collisionlab {

struct CollisionReport {
  /// Times n >= 1 with X_n = Y_n, increasing.
  std::vector<std::uint64_t> collision_times;
  std::size_t collision_count = 0;
  bool includes_time_zero = false;
};

/// Throws LengthMismatch when the trajectories have different horizons.
CollisionReport count_collisions(const Trajectory& x, const Trajectory& y);

/// Finite-horizon taboo probabilities for the pair chain on V x V with the
/// diagonal forbidden after time zero: q0(v, m) is the probability that two
/// independent walks from v do not meet at any time 1..m. q0(v, 0) = 1.
///
/// Only one |V|^2 mass vector (plus a scratch buffer) is held per vertex at a
/// time. Throws ResourceLimit when |V|^2 exceeds limits.pair_state_cap.
class TabooTable {
 public:
  TabooTable(const Network& net, std::uint64_t max_window, const Limits& limits = {});

  std::uint64_t max_window() const noexcept { return max_window_; }
  double q0(VertexId v, std::uint64_t m) const { return table_[v][m]; }
  std::span<const double> series(VertexId v) const { return table_[v]; }

 private:
  std::uint64_t max_window_;
  std::vector<std::vector<double>> table_;
};

/// q0^{(0..m)}(v) for a single vertex.
std::vector<double> q0_series(const Network& net, VertexId v, std::uint64_t m,
                              const Limits& limits = {});
double q0_exact(const Network& net, VertexId v, std::uint64_t m, const Limits& limits = {});

/// p_n(u,v)^2 * q0^{(N-n)}(v): probability that the last collision in [0,N]
/// of two walks from u happens at vertex v at time n.
double qlast_horizon(const Network& net, VertexId u, VertexId v, std::uint64_t n,
                     std::uint64_t horizon, const Limits& limits = {});

struct HorizonEstimates {
  std::uint64_t horizon = 0;
  VertexId source = 0;
  /// q0_by_vertex[v][m] for m <= horizon.
  std::vector<std::vector<double>> q0_by_vertex;
  /// qlast_by_vertex_time[n][v].
  std::vector<std::vector<double>> qlast_by_vertex_time;
  double identity_total = 0.0;
};

HorizonEstimates horizon_estimates(const Network& net, VertexId u, const TabooTable& taboo,
                                   std::uint64_t horizon);
HorizonEstimates horizon_estimates(const Network& net, VertexId u, std::uint64_t horizon,
                                   const Limits& limits = {});

/// sum_{n<=N} sum_v p_n(u,v)^2 q0^{(N-n)}(v); equals 1 since the last
/// collision in [0,N] is unique and exists (both walks start at u).
double last_collision_identity(const Network& net, VertexId u, std::uint64_t horizon,
                               const Limits& limits = {});
double last_collision_identity(const Network& net, VertexId u, std::uint64_t horizon,
                               const TabooTable& taboo);

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

/// Monte Carlo estimate of q0^{(m)}(v).
Estimate empirical_q0(const Network& net, VertexId v, std::uint64_t m, std::uint64_t replicas,
                      std::uint64_t master_seed, unsigned workers = 1);

enum class ParityVerdict : std::uint8_t { always_infeasible, feasible };

/// Walks from u and v can never meet iff the network is bipartite and u, v
/// are in different classes.
ParityVerdict parity_feasibility(const Network& net, VertexId u, VertexId v);

struct GrowthRow {
  std::uint64_t horizon = 0;
  double mean = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
  double standard_error = 0.0;
  std::uint64_t replicas = 0;
};

struct GrowthResult {
  std::vector<GrowthRow> rows;
  /// counts[h][r]: collisions in times 1..horizons[h] for replica r.
  std::vector<std::vector<std::uint64_t>> counts;
};

/// Linear-interpolated sample quantile (Hyndman-Fan type 7) of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);
GrowthRow summarize_counts(std::uint64_t horizon, std::span<const std::uint64_t> counts);

/// Monte Carlo collision counts of two independent walks from `start`, for
/// every horizon at once (each horizon reads a prefix of the same pair of
/// paths). Replica r, walker w uses stream derive_stream(master_seed, r, w).
template <class Stepper>
GrowthResult collision_growth(const Stepper& stepper, typename Stepper::State start,
                              std::span<const std::uint64_t> horizons, std::uint64_t replicas,
                              std::uint64_t master_seed, unsigned workers = 1,
                              const TruncationCertificate* certificate = nullptr) {
  if (replicas == 0) throw Error(ErrorCode::InvalidArgument, "replicas must be >= 1", "replicas");
  if (horizons.empty()) throw Error(ErrorCode::InvalidArgument, "no horizons given", "horizons");
  if (certificate != nullptr) {
    for (std::uint64_t t : horizons) {
      if (!certificate->permits(t)) {
        throw Error(ErrorCode::CertificateViolation,
                    "horizon " + std::to_string(t) + " exceeds the certified horizon " +
                        std::to_string(*certificate->horizon),
                    "horizons");
      }
    }
  }
  std::vector<std::uint64_t> checkpoints(horizons.begin(), horizons.end());
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  // per_replica[r * checkpoints + k]
  std::vector<std::uint64_t> per_replica(replicas * checkpoints.size(), 0);
  detail::parallel_for(replicas, workers, [&](std::uint64_t r) {
    Engine rx = make_engine({master_seed, derive_stream(master_seed, r, 0)});
    Engine ry = make_engine({master_seed, derive_stream(master_seed, r, 1)});
    auto x = start;
    auto y = start;
    std::uint64_t count = 0;
    std::uint64_t t = 0;
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
      for (; t < checkpoints[k]; ++t) {
        x = stepper.step(x, rx);
        y = stepper.step(y, ry);
        count += (x == y) ? 1U : 0U;
      }
      per_replica[r * checkpoints.size() + k] = count;
    }
  });

  GrowthResult result;
  for (std::uint64_t t : horizons) {
    const auto k = static_cast<std::size_t>(
        std::lower_bound(checkpoints.begin(), checkpoints.end(), t) - checkpoints.begin());
    std::vector<std::uint64_t> column(replicas);
    for (std::uint64_t r = 0; r < replicas; ++r) column[r] = per_replica[r * checkpoints.size() + k];
    result.rows.push_back(summarize_counts(t, column));
    result.counts.push_back(std::move(column));
  }
  return result;
}

}  // namespace collisionlab
