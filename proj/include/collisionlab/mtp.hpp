#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "collisionlab/models.hpp"
#include "collisionlab/network.hpp"

namespace collisionlab {

/// Nonnegative function of (network, source, target): the mass sent from
/// source to target. Evaluated on labeled graphs.
class MassTransport {
 public:
  virtual ~MassTransport() = default;

  virtual std::string name() const = 0;
  virtual double operator()(const Network& net, VertexId source, VertexId target) const = 0;

  /// Full |V| x |V| table, entry (source, target). Override when the whole
  /// table is cheaper than |V|^2 single evaluations.
  virtual Eigen::MatrixXd evaluate_all(const Network& net) const;
};

/// f(u,v) = 1{u ~ v} (a self-loop makes u ~ u).
class AdjacencyTransport final : public MassTransport {
 public:
  std::string name() const override { return "adjacency"; }
  double operator()(const Network& net, VertexId u, VertexId v) const override;
};

/// f(u,v) = 1{u ~ v, deg(u) = 1}.
class LeafAdjacencyTransport final : public MassTransport {
 public:
  std::string name() const override { return "leaf_adjacency"; }
  double operator()(const Network& net, VertexId u, VertexId v) const override;
};

/// f(u,v) = c(u) * qlast_horizon(u, v, n, N): the last-collision transport at
/// finite horizon (c(u) = deg(u) for unit conductances).
class LastCollisionTransport final : public MassTransport {
 public:
  LastCollisionTransport(std::uint64_t n, std::uint64_t horizon, Limits limits = {})
      : n_(n), horizon_(horizon), limits_(limits) {}

  std::string name() const override;
  double operator()(const Network& net, VertexId u, VertexId v) const override;
  Eigen::MatrixXd evaluate_all(const Network& net) const override;

 private:
  std::uint64_t n_;
  std::uint64_t horizon_;
  Limits limits_;
};

/// Seeded pseudo-random transport supported on pairs at graph distance <= 2;
/// values are a pure function of (seed, source, target).
class RandomLocalTransport final : public MassTransport {
 public:
  explicit RandomLocalTransport(std::uint64_t seed, double scale = 1.0)
      : seed_(seed), scale_(scale) {}

  std::string name() const override { return "random_local:" + std::to_string(seed_); }
  double operator()(const Network& net, VertexId u, VertexId v) const override;
  Eigen::MatrixXd evaluate_all(const Network& net) const override;

 private:
  std::uint64_t seed_;
  double scale_;
};

/// Wraps any callable.
class FunctionTransport final : public MassTransport {
 public:
  using Fn = std::function<double(const Network&, VertexId, VertexId)>;
  FunctionTransport(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  std::string name() const override { return name_; }
  double operator()(const Network& net, VertexId u, VertexId v) const override {
    return fn_(net, u, v);
  }

 private:
  std::string name_;
  Fn fn_;
};

/// Built-ins by name: `adjacency`, `leaf_adjacency`, `qlast:<n>:<N>`.
std::unique_ptr<MassTransport> make_transport(std::string_view spec, const Limits& limits = {});

struct RootedComponent {
  Network network;
  RootLaw root_law;
  double weight = 1.0;
};

/// Finite mixture of rooted networks: a random rooted graph with finite support.
class RootedDistribution {
 public:
  explicit RootedDistribution(std::vector<RootedComponent> support);
  /// A single network with the given root law.
  RootedDistribution(Network net, RootLawKind kind);

  std::span<const RootedComponent> support() const noexcept { return support_; }

 private:
  std::vector<RootedComponent> support_;
};

enum class MassDirection : std::uint8_t { out, in };

/// out: E[sum_v f(G, rho, v)]; in: E[sum_u f(G, u, rho)]. Returns +inf when a
/// transport value exceeds limits.transport_cap or is not finite.
double expected_mass(const RootedDistribution& dist, const MassTransport& f,
                     MassDirection direction, const Limits& limits = {});

struct MtpVerdict {
  enum class Kind : std::uint8_t { holds, violated, indeterminate };
  Kind kind = Kind::holds;
  double mass_out = 0.0;
  double mass_in = 0.0;
};

const char* to_string(MtpVerdict::Kind kind) noexcept;

MtpVerdict check_mtp(const RootedDistribution& dist, const MassTransport& f, double tolerance,
                     const Limits& limits = {});

/// max_{u,v} |c(u) p_n(u,v) - c(v) p_n(v,u)|.
double check_detailed_balance_n(const Network& net, std::uint64_t n, const Limits& limits = {});

struct ReceivedMassTerm {
  std::uint64_t n = 0;
  /// sum_u c(u) p_n(u,v)^2, from n pushes of the column p_.(v).
  double lhs = 0.0;
  /// c(v) p_{2n}(v,v), from the 2n-step kernel.
  double rhs = 0.0;
};

/// Both sides of the received-mass computation for n = 0..N at vertex v.
std::vector<ReceivedMassTerm> received_mass_identity(const Network& net, VertexId v,
                                                     std::uint64_t max_n,
                                                     const Limits& limits = {});

/// max_{a,b} |P(rho=a, X_n=b) - P(rho=b, X_n=a)| for rho ~ root_law.
double check_reversibility_labeled(const Network& net, const RootLaw& root_law, std::uint64_t n,
                                   const Limits& limits = {});

}  // namespace collisionlab
