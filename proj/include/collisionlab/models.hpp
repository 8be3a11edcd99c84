#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collisionlab/network.hpp"
#include "collisionlab/rng.hpp"

namespace collisionlab {

enum class RootLawKind : std::uint8_t { uniform, conductance_biased, fixed };

const char* to_string(RootLawKind kind) noexcept;
RootLawKind parse_root_law_kind(const std::string& text);

/// Law of the root over the vertices of one network. Uniform roots give
/// unimodular laws, conductance-biased roots give reversible ones.
class RootLaw {
 public:
  RootLaw(RootLawKind kind, std::vector<double> probabilities, VertexId fixed_vertex = 0);

  RootLawKind kind() const noexcept { return kind_; }
  VertexId fixed_vertex() const noexcept { return fixed_vertex_; }
  double probability(VertexId v) const { return probabilities_[v]; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }

  VertexId sample(Engine& rng) const;

 private:
  RootLawKind kind_;
  VertexId fixed_vertex_;
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
};

RootLaw apply_root_law(const Network& net, RootLawKind kind, VertexId fixed_vertex = 0);

/// Walks of at most `horizon` steps from `start_vertex` cannot tell the
/// truncation from the infinite model. An empty horizon means the network is
/// the model itself (no truncation), so any horizon is exact.
struct TruncationCertificate {
  std::optional<std::uint64_t> horizon;
  std::uint64_t safety_radius = 0;
  VertexId start_vertex = 0;

  bool permits(std::uint64_t steps) const { return !horizon || steps <= *horizon; }
};

using LatticeCoord = std::array<std::int64_t, 2>;

struct GeneratedModel {
  Network network;
  /// Designated start (lattice center / comb origin). Random models have none
  /// and draw their root from `root_law` instead.
  std::optional<VertexId> start;
  RootLawKind root_law = RootLawKind::uniform;
  TruncationCertificate certificate;
  /// Lattice coordinates per vertex (empty for non-lattice models).
  std::vector<LatticeCoord> coords;
};

/// Z truncated to {-R..R}; vertex index = x + R.
GeneratedModel gen_path_segment(std::int64_t radius, const Limits& limits = {});
/// Z^2 truncated to the box [-R,R]^2; vertex index = (y+R)(2R+1) + (x+R).
GeneratedModel gen_grid_box(std::int64_t radius, const Limits& limits = {});
/// Comb: spine {-R..R} x {0} with a tooth {x} x {1..R} at every spine vertex.
GeneratedModel gen_comb(std::int64_t radius, const Limits& limits = {});
/// L x L discrete torus (L >= 3), unit conductances.
GeneratedModel gen_torus(std::int64_t side, const Limits& limits = {});

/// Bond percolation on the (n+1) x (n+1) box; returns the largest open
/// cluster (ties: the one containing the smallest site index) relabeled in
/// increasing site order, with a uniform root law.
GeneratedModel gen_percolation_cluster(std::int64_t n, double p, std::uint64_t seed,
                                       const Limits& limits = {});
inline constexpr double kCriticalBondProbabilityZ2 = 0.5;

/// Uniform spanning tree (conductance-weighted) of `base` by Wilson's
/// algorithm rooted at vertex 0. Tree edges keep their base conductance and
/// are listed in base edge order.
Network gen_wilson_ust(const Network& base, std::uint64_t seed);

/// Vertex count of a lattice family without building it.
std::uint64_t lattice_vertex_count(const std::string& family, std::int64_t radius);

}  // namespace collisionlab
