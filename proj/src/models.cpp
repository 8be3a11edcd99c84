#include "collisionlab/models.hpp"

#include <algorithm>
#include <numeric>

#include "collisionlab/detail/union_find.hpp"

namespace collisionlab {

const char* to_string(RootLawKind kind) noexcept {
  switch (kind) {
    case RootLawKind::uniform: return "uniform";
    case RootLawKind::conductance_biased: return "conductance_biased";
    case RootLawKind::fixed: return "fixed";
  }
  return "unknown";
}

RootLawKind parse_root_law_kind(const std::string& text) {
  if (text == "uniform") return RootLawKind::uniform;
  if (text == "conductance_biased") return RootLawKind::conductance_biased;
  if (text == "fixed") return RootLawKind::fixed;
  throw Error(ErrorCode::ConfigInvalid, "unknown root law '" + text + "'", "root_law");
}

RootLaw::RootLaw(RootLawKind kind, std::vector<double> probabilities, VertexId fixed_vertex)
    : kind_(kind), fixed_vertex_(fixed_vertex), probabilities_(std::move(probabilities)) {
  cumulative_.resize(probabilities_.size());
  std::partial_sum(probabilities_.begin(), probabilities_.end(), cumulative_.begin());
}

VertexId RootLaw::sample(Engine& rng) const {
  const double r = uniform01(rng) * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  const auto k = static_cast<std::size_t>(it - cumulative_.begin());
  return static_cast<VertexId>(std::min(k, cumulative_.size() - 1));
}

RootLaw apply_root_law(const Network& net, RootLawKind kind, VertexId fixed_vertex) {
  const std::size_t n = net.vertex_count();
  std::vector<double> probs(n, 0.0);
  switch (kind) {
    case RootLawKind::uniform:
      std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(n));
      break;
    case RootLawKind::conductance_biased:
      probs = stationary_distribution(net);
      break;
    case RootLawKind::fixed:
      if (!net.contains(fixed_vertex)) {
        throw Error(ErrorCode::EndpointOutOfRange, "fixed root is outside the network", "root");
      }
      probs[fixed_vertex] = 1.0;
      break;
  }
  return RootLaw(kind, std::move(probs), fixed_vertex);
}

namespace {

void require_radius(std::int64_t radius, const char* field) {
  if (radius < 1) throw Error(ErrorCode::InvalidArgument, "radius must be at least 1", field);
}

void require_generator_cap(std::uint64_t vertices, const Limits& limits, const char* field) {
  if (vertices > limits.generator_vertex_cap) {
    throw Error(ErrorCode::ResourceLimit,
                "model would have " + std::to_string(vertices) +
                    " vertices, above generator_vertex_cap = " +
                    std::to_string(limits.generator_vertex_cap),
                field);
  }
}

TruncationCertificate lattice_certificate(std::int64_t radius, VertexId start) {
  return {static_cast<std::uint64_t>(radius - 1), static_cast<std::uint64_t>(radius), start};
}

}  // namespace

std::uint64_t lattice_vertex_count(const std::string& family, std::int64_t radius) {
  const auto side = static_cast<std::uint64_t>(2 * radius + 1);
  if (family == "path") return side;
  if (family == "grid") return side * side;
  if (family == "comb") return side * static_cast<std::uint64_t>(radius + 1);
  if (family == "torus") return static_cast<std::uint64_t>(radius) * static_cast<std::uint64_t>(radius);
  throw Error(ErrorCode::InvalidArgument, "not a lattice family: " + family, "model");
}

GeneratedModel gen_path_segment(std::int64_t radius, const Limits& limits) {
  require_radius(radius, "R");
  require_generator_cap(lattice_vertex_count("path", radius), limits, "R");
  const auto n = static_cast<std::size_t>(2 * radius + 1);
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (VertexId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  std::vector<LatticeCoord> coords(n);
  for (std::size_t i = 0; i < n; ++i) coords[i] = {static_cast<std::int64_t>(i) - radius, 0};
  const auto center = static_cast<VertexId>(radius);
  return {Network::build(n, std::move(edges)), center, RootLawKind::fixed,
          lattice_certificate(radius, center), std::move(coords)};
}

GeneratedModel gen_grid_box(std::int64_t radius, const Limits& limits) {
  require_radius(radius, "R");
  require_generator_cap(lattice_vertex_count("grid", radius), limits, "R");
  const auto side = static_cast<std::size_t>(2 * radius + 1);
  const auto index = [side](std::size_t x, std::size_t y) {
    return static_cast<VertexId>(y * side + x);
  };
  std::vector<Edge> edges;
  edges.reserve(2 * side * (side - 1));
  std::vector<LatticeCoord> coords(side * side);
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      coords[index(x, y)] = {static_cast<std::int64_t>(x) - radius,
                             static_cast<std::int64_t>(y) - radius};
      if (x + 1 < side) edges.push_back({index(x, y), index(x + 1, y), 1.0});
      if (y + 1 < side) edges.push_back({index(x, y), index(x, y + 1), 1.0});
    }
  }
  const VertexId center = index(static_cast<std::size_t>(radius), static_cast<std::size_t>(radius));
  return {Network::build(side * side, std::move(edges)), center, RootLawKind::fixed,
          lattice_certificate(radius, center), std::move(coords)};
}

GeneratedModel gen_comb(std::int64_t radius, const Limits& limits) {
  require_radius(radius, "R");
  require_generator_cap(lattice_vertex_count("comb", radius), limits, "R");
  const auto spine = static_cast<std::size_t>(2 * radius + 1);
  const auto column = static_cast<std::size_t>(radius + 1);
  // Column-major: vertex (x, y) sits at (x+R)(R+1) + y.
  const auto index = [column](std::size_t x, std::size_t y) {
    return static_cast<VertexId>(x * column + y);
  };
  std::vector<Edge> edges;
  std::vector<LatticeCoord> coords(spine * column);
  for (std::size_t x = 0; x < spine; ++x) {
    for (std::size_t y = 0; y < column; ++y) {
      coords[index(x, y)] = {static_cast<std::int64_t>(x) - radius, static_cast<std::int64_t>(y)};
      if (y + 1 < column) edges.push_back({index(x, y), index(x, y + 1), 1.0});
    }
    if (x + 1 < spine) edges.push_back({index(x, 0), index(x + 1, 0), 1.0});
  }
  const VertexId origin = index(static_cast<std::size_t>(radius), 0);
  return {Network::build(spine * column, std::move(edges)), origin, RootLawKind::fixed,
          lattice_certificate(radius, origin), std::move(coords)};
}

GeneratedModel gen_torus(std::int64_t side, const Limits& limits) {
  if (side < 3) throw Error(ErrorCode::InvalidArgument, "torus side must be at least 3", "L");
  require_generator_cap(lattice_vertex_count("torus", side), limits, "L");
  const auto l = static_cast<std::size_t>(side);
  const auto index = [l](std::size_t x, std::size_t y) { return static_cast<VertexId>(y * l + x); };
  std::vector<Edge> edges;
  edges.reserve(2 * l * l);
  std::vector<LatticeCoord> coords(l * l);
  for (std::size_t y = 0; y < l; ++y) {
    for (std::size_t x = 0; x < l; ++x) {
      coords[index(x, y)] = {static_cast<std::int64_t>(x), static_cast<std::int64_t>(y)};
      edges.push_back({index(x, y), index((x + 1) % l, y), 1.0});
      edges.push_back({index(x, y), index(x, (y + 1) % l), 1.0});
    }
  }
  return {Network::build(l * l, std::move(edges)), VertexId{0}, RootLawKind::uniform,
          TruncationCertificate{std::nullopt, 0, 0}, std::move(coords)};
}

GeneratedModel gen_percolation_cluster(std::int64_t n, double p, std::uint64_t seed,
                                       const Limits& limits) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "box size must be at least 1", "n");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "bond probability must lie in [0,1]", "p");
  }
  const auto side = static_cast<std::size_t>(n + 1);
  require_generator_cap(static_cast<std::uint64_t>(side) * side, limits, "n");
  const std::size_t sites = side * side;

  Engine rng = make_engine({seed, 0});
  std::vector<Edge> open;
  detail::UnionFind clusters(sites);
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      const auto s = static_cast<VertexId>(y * side + x);
      if (x + 1 < side && uniform01(rng) < p) {
        open.push_back({s, s + 1, 1.0});
        clusters.unite(s, s + 1);
      }
      if (y + 1 < side && uniform01(rng) < p) {
        open.push_back({s, static_cast<VertexId>(s + side), 1.0});
        clusters.unite(s, s + side);
      }
    }
  }

  std::size_t best_root = clusters.find(0);
  std::size_t best_size = clusters.size_of(0);
  for (std::size_t s = 1; s < sites; ++s) {
    const std::size_t size = clusters.size_of(s);
    if (size > best_size) {
      best_size = size;
      best_root = clusters.find(s);
    }
  }

  std::vector<VertexId> relabel(sites, UINT32_MAX);
  std::vector<LatticeCoord> coords;
  coords.reserve(best_size);
  VertexId next = 0;
  for (std::size_t s = 0; s < sites; ++s) {
    if (clusters.find(s) != best_root) continue;
    relabel[s] = next++;
    coords.push_back({static_cast<std::int64_t>(s % side), static_cast<std::int64_t>(s / side)});
  }
  std::vector<Edge> edges;
  for (const Edge& e : open) {
    if (relabel[e.a] != UINT32_MAX) edges.push_back({relabel[e.a], relabel[e.b], 1.0});
  }
  return {Network::build(best_size, std::move(edges)), std::nullopt, RootLawKind::uniform,
          TruncationCertificate{std::nullopt, 0, 0}, std::move(coords)};
}

Network gen_wilson_ust(const Network& base, std::uint64_t seed) {
  const std::size_t n = base.vertex_count();
  // Prefix sums of conductance over each vertex's incident edge list.
  std::vector<double> prefix;
  std::vector<std::size_t> start(n + 1, 0);
  for (VertexId u = 0; u < n; ++u) {
    double running = 0.0;
    for (std::uint32_t id : base.incident_edges(u)) {
      running += base.edges()[id].conductance;
      prefix.push_back(running);
    }
    start[u + 1] = prefix.size();
  }
  const auto other_end = [&](std::uint32_t id, VertexId u) {
    const Edge& e = base.edges()[id];
    return e.a == u ? e.b : e.a;
  };

  Engine rng = make_engine({seed, 0});
  std::vector<bool> in_tree(n, false);
  std::vector<std::uint32_t> next_edge(n, UINT32_MAX);
  std::vector<bool> chosen(base.edges().size(), false);
  in_tree[0] = true;
  for (VertexId i = 0; i < n; ++i) {
    VertexId u = i;
    while (!in_tree[u]) {
      const auto incident = base.incident_edges(u);
      const double* lo = prefix.data() + start[u];
      const double* hi = prefix.data() + start[u + 1];
      const double r = uniform01(rng) * *(hi - 1);
      auto k = static_cast<std::size_t>(std::upper_bound(lo, hi, r) - lo);
      k = std::min(k, incident.size() - 1);
      next_edge[u] = incident[k];
      u = other_end(next_edge[u], u);
    }
    // Retrace the loop-erased path into the tree.
    u = i;
    while (!in_tree[u]) {
      in_tree[u] = true;
      chosen[next_edge[u]] = true;
      u = other_end(next_edge[u], u);
    }
  }

  std::vector<Edge> tree;
  tree.reserve(n - 1);
  for (std::size_t id = 0; id < chosen.size(); ++id) {
    if (chosen[id]) tree.push_back(base.edges()[id]);
  }
  return Network::build(n, std::move(tree));
}

}  // namespace collisionlab
