#include "collisionlab/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

namespace collisionlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NonpositiveConductance: return "NonpositiveConductance";
    case ErrorCode::EndpointOutOfRange: return "EndpointOutOfRange";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::CertificateViolation: return "CertificateViolation";
    case ErrorCode::HorizonMismatch: return "HorizonMismatch";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Network Network::build(std::size_t vertex_count, std::vector<Edge> edges) {
  if (vertex_count == 0) {
    throw Error(ErrorCode::InvalidArgument, "network needs at least one vertex", "vertices");
  }
  if (vertex_count > std::numeric_limits<VertexId>::max()) {
    throw Error(ErrorCode::ResourceLimit, "vertex count exceeds 32-bit labels", "vertices");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.a >= vertex_count || e.b >= vertex_count) {
      throw Error(ErrorCode::EndpointOutOfRange,
                  "edge " + std::to_string(i) + " has an endpoint outside [0, " +
                      std::to_string(vertex_count) + ")",
                  "edges");
    }
    if (!(e.conductance > 0.0) || !std::isfinite(e.conductance)) {
      throw Error(ErrorCode::NonpositiveConductance,
                  "edge " + std::to_string(i) + " has non-positive conductance", "edges");
    }
  }

  Network net;
  net.vertex_count_ = vertex_count;
  net.edges_ = std::move(edges);

  // Incident edge lists (CSR).
  std::vector<std::size_t> edge_count(vertex_count + 1, 0);
  for (const Edge& e : net.edges_) {
    ++edge_count[e.a + 1];
    if (e.b != e.a) ++edge_count[e.b + 1];
  }
  std::partial_sum(edge_count.begin(), edge_count.end(), edge_count.begin());
  net.edge_offsets_ = edge_count;
  net.incident_.resize(edge_count.back());
  {
    std::vector<std::size_t> cursor(edge_count.begin(), edge_count.end() - 1);
    for (std::uint32_t id = 0; id < net.edges_.size(); ++id) {
      const Edge& e = net.edges_[id];
      net.incident_[cursor[e.a]++] = id;
      if (e.b != e.a) net.incident_[cursor[e.b]++] = id;
    }
  }

  // Aggregated neighbor lists, sorted by neighbor id.
  net.vertex_conductance_.assign(vertex_count, 0.0);
  net.offsets_.assign(vertex_count + 1, 0);
  std::vector<std::pair<VertexId, double>> scratch;
  for (VertexId u = 0; u < vertex_count; ++u) {
    scratch.clear();
    for (std::size_t k = net.edge_offsets_[u]; k < net.edge_offsets_[u + 1]; ++k) {
      const Edge& e = net.edges_[net.incident_[k]];
      scratch.emplace_back(e.a == u ? e.b : e.a, e.conductance);
    }
    std::sort(scratch.begin(), scratch.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    double running = 0.0;
    for (std::size_t k = 0; k < scratch.size(); ++k) {
      running += scratch[k].second;
      if (k > 0 && scratch[k].first == scratch[k - 1].first) {
        net.neighbor_conductance_.back() += scratch[k].second;
        net.neighbor_cumulative_.back() = running;
        continue;
      }
      net.neighbor_ids_.push_back(scratch[k].first);
      net.neighbor_conductance_.push_back(scratch[k].second);
      net.neighbor_cumulative_.push_back(running);
    }
    net.vertex_conductance_[u] = running;
    net.offsets_[u + 1] = net.neighbor_ids_.size();
  }
  net.total_conductance_ =
      std::accumulate(net.vertex_conductance_.begin(), net.vertex_conductance_.end(), 0.0);

  if (vertex_count > 1) {
    const auto dist = bfs_distances(net, 0);
    const auto unreachable = std::find(dist.begin(), dist.end(), UINT32_MAX);
    if (unreachable != dist.end()) {
      throw Error(ErrorCode::DisconnectedGraph,
                  "vertex " + std::to_string(unreachable - dist.begin()) +
                      " is not reachable from vertex 0",
                  "edges");
    }
  }
  return net;
}

double Network::conductance(VertexId u, VertexId v) const {
  const auto ids = neighbors(u);
  const auto it = std::lower_bound(ids.begin(), ids.end(), v);
  if (it == ids.end() || *it != v) return 0.0;
  return neighbor_conductances(u)[static_cast<std::size_t>(it - ids.begin())];
}

Network build_network(std::size_t vertex_count, std::vector<Edge> edges) {
  return Network::build(vertex_count, std::move(edges));
}

namespace {

void check_vertex(const Network& net, VertexId v, const char* field) {
  if (!net.contains(v)) {
    throw Error(ErrorCode::EndpointOutOfRange,
                "vertex " + std::to_string(v) + " is outside the network", field);
  }
}

}  // namespace

double transition_prob(const Network& net, VertexId u, VertexId v) {
  check_vertex(net, u, "u");
  check_vertex(net, v, "v");
  const double cu = net.conductance(u);
  if (cu == 0.0) return u == v ? 1.0 : 0.0;
  return net.conductance(u, v) / cu;
}

void require_dense(const Network& net, const Limits& limits) {
  if (net.vertex_count() > limits.dense_vertex_cap) {
    throw Error(ErrorCode::ResourceLimit,
                "network has " + std::to_string(net.vertex_count()) +
                    " vertices, above dense_vertex_cap = " +
                    std::to_string(limits.dense_vertex_cap),
                "dense_vertex_cap");
  }
}

TransitionKernel one_step_kernel(const Network& net, const Limits& limits) {
  require_dense(net, limits);
  const auto n = static_cast<Eigen::Index>(net.vertex_count());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (VertexId u = 0; u < net.vertex_count(); ++u) {
    const double cu = net.conductance(u);
    if (cu == 0.0) {
      p(u, u) = 1.0;
      continue;
    }
    const auto ids = net.neighbors(u);
    const auto cs = net.neighbor_conductances(u);
    for (std::size_t k = 0; k < ids.size(); ++k) p(u, ids[k]) = cs[k] / cu;
  }
  return TransitionKernel(std::move(p));
}

TransitionKernel n_step_kernel(const Network& net, std::uint64_t n, const Limits& limits) {
  TransitionKernel base = one_step_kernel(net, limits);
  const auto size = static_cast<Eigen::Index>(net.vertex_count());
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(size, size);
  Eigen::MatrixXd power = base.matrix();
  while (n > 0) {
    if (n & 1U) result = result * power;
    n >>= 1U;
    if (n > 0) power = power * power;
  }
  return TransitionKernel(std::move(result));
}

std::vector<double> push_forward(const Network& net, std::span<const double> mu) {
  std::vector<double> out(net.vertex_count(), 0.0);
  for (VertexId u = 0; u < net.vertex_count(); ++u) {
    const double mass = mu[u];
    if (mass == 0.0) continue;
    const double cu = net.conductance(u);
    if (cu == 0.0) {
      out[u] += mass;
      continue;
    }
    const auto ids = net.neighbors(u);
    const auto cs = net.neighbor_conductances(u);
    for (std::size_t k = 0; k < ids.size(); ++k) out[ids[k]] += mass * cs[k] / cu;
  }
  return out;
}

std::vector<double> pull_back(const Network& net, std::span<const double> g) {
  std::vector<double> out(net.vertex_count(), 0.0);
  for (VertexId u = 0; u < net.vertex_count(); ++u) {
    const double cu = net.conductance(u);
    if (cu == 0.0) {
      out[u] = g[u];
      continue;
    }
    const auto ids = net.neighbors(u);
    const auto cs = net.neighbor_conductances(u);
    double acc = 0.0;
    for (std::size_t k = 0; k < ids.size(); ++k) acc += cs[k] * g[ids[k]];
    out[u] = acc / cu;
  }
  return out;
}

Bipartition is_bipartite(const Network& net) {
  std::vector<int> color(net.vertex_count(), -1);
  std::deque<VertexId> queue;
  for (VertexId root = 0; root < net.vertex_count(); ++root) {
    if (color[root] >= 0) continue;
    color[root] = 0;
    queue.push_back(root);
    while (!queue.empty()) {
      const VertexId u = queue.front();
      queue.pop_front();
      for (VertexId v : net.neighbors(u)) {
        if (color[v] < 0) {
          color[v] = 1 - color[u];
          queue.push_back(v);
        } else if (color[v] == color[u]) {
          return {};
        }
      }
    }
  }
  Bipartition result;
  result.bipartite = true;
  result.coloring.reserve(color.size());
  for (int c : color) result.coloring.push_back(c == 0 ? Side::A : Side::B);
  return result;
}

std::vector<double> stationary_distribution(const Network& net) {
  std::vector<double> pi(net.vertex_count());
  if (net.total_conductance() == 0.0) {
    std::fill(pi.begin(), pi.end(), 1.0 / static_cast<double>(pi.size()));
    return pi;
  }
  for (VertexId v = 0; v < pi.size(); ++v) pi[v] = net.conductance(v) / net.total_conductance();
  return pi;
}

std::vector<std::uint32_t> bfs_distances(const Network& net, VertexId source) {
  std::vector<std::uint32_t> dist(net.vertex_count(), UINT32_MAX);
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (VertexId v : net.neighbors(u)) {
      if (dist[v] == UINT32_MAX) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

}  // namespace collisionlab
