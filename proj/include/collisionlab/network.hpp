#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "collisionlab/error.hpp"

namespace collisionlab {

/// Dense vertex label in [0, vertex_count).
using VertexId = std::uint32_t;

struct Edge {
  VertexId a = 0;
  VertexId b = 0;
  double conductance = 1.0;

  bool operator==(const Edge&) const = default;
};

/// Finite connected multigraph with positive edge conductances.
///
/// Parallel edges are aggregated into c(u,v) for the walk; the raw edge list
/// is kept for serialization and for algorithms that need edge identity
/// (Wilson's algorithm). A self-loop of conductance w adds w to c(u) once
/// and w to c(u,u).
///
/// A single vertex without edges is accepted; its walk stays put.
class Network {
 public:
  /// Validates and builds. Throws EndpointOutOfRange, NonpositiveConductance
  /// or DisconnectedGraph.
  static Network build(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  /// c(u)
  double conductance(VertexId u) const { return vertex_conductance_[u]; }
  /// c(u,v), zero when not adjacent.
  double conductance(VertexId u, VertexId v) const;
  double total_conductance() const noexcept { return total_conductance_; }

  /// Number of incident edges counted with multiplicity (a self-loop once).
  std::size_t degree(VertexId u) const { return edge_offsets_[u + 1] - edge_offsets_[u]; }

  /// Distinct neighbors of u in increasing order, with aggregated conductances
  /// and their running prefix sums.
  std::span<const VertexId> neighbors(VertexId u) const {
    return {neighbor_ids_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::span<const double> neighbor_conductances(VertexId u) const {
    return {neighbor_conductance_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::span<const double> cumulative_conductances(VertexId u) const {
    return {neighbor_cumulative_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }

  /// Ids into edges() of the edges incident to u (a self-loop listed once).
  std::span<const std::uint32_t> incident_edges(VertexId u) const {
    return {incident_.data() + edge_offsets_[u], edge_offsets_[u + 1] - edge_offsets_[u]};
  }

  bool contains(VertexId v) const noexcept { return v < vertex_count_; }

 private:
  Network() = default;

  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> vertex_conductance_;
  double total_conductance_ = 0.0;

  std::vector<std::size_t> offsets_;
  std::vector<VertexId> neighbor_ids_;
  std::vector<double> neighbor_conductance_;
  std::vector<double> neighbor_cumulative_;

  std::vector<std::size_t> edge_offsets_;
  std::vector<std::uint32_t> incident_;
};

Network build_network(std::size_t vertex_count, std::vector<Edge> edges);

/// p(u,v) = c(u,v) / c(u).
double transition_prob(const Network& net, VertexId u, VertexId v);

/// Row-stochastic matrix of n-step transition probabilities.
class TransitionKernel {
 public:
  explicit TransitionKernel(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(VertexId u, VertexId v) const { return entries_(u, v); }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }

  TransitionKernel operator*(const TransitionKernel& other) const {
    return TransitionKernel(entries_ * other.entries_);
  }

 private:
  Eigen::MatrixXd entries_;
};

/// Throws ResourceLimit when the network exceeds limits.dense_vertex_cap.
void require_dense(const Network& net, const Limits& limits);

TransitionKernel one_step_kernel(const Network& net, const Limits& limits = {});
TransitionKernel n_step_kernel(const Network& net, std::uint64_t n, const Limits& limits = {});

/// One step of the walk applied to a row distribution: mu -> mu P.
std::vector<double> push_forward(const Network& net, std::span<const double> mu);
/// One step applied to a column function: g -> P g.
std::vector<double> pull_back(const Network& net, std::span<const double> g);

enum class Side : std::uint8_t { A = 0, B = 1 };

struct Bipartition {
  bool bipartite = false;
  /// Valid two-coloring when bipartite, empty otherwise.
  std::vector<Side> coloring;
};

Bipartition is_bipartite(const Network& net);

/// pi(v) = c(v) / sum_u c(u); uniform on a single isolated vertex.
std::vector<double> stationary_distribution(const Network& net);

/// Hop distances from source (unreachable never occurs: networks are connected).
std::vector<std::uint32_t> bfs_distances(const Network& net, VertexId source);

}  // namespace collisionlab
