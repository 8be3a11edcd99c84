#include "collisionlab/mtp.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "collisionlab/collision.hpp"

namespace collisionlab {

Eigen::MatrixXd MassTransport::evaluate_all(const Network& net) const {
  const auto n = static_cast<Eigen::Index>(net.vertex_count());
  Eigen::MatrixXd table(n, n);
  for (VertexId u = 0; u < net.vertex_count(); ++u) {
    for (VertexId v = 0; v < net.vertex_count(); ++v) table(u, v) = (*this)(net, u, v);
  }
  return table;
}

double AdjacencyTransport::operator()(const Network& net, VertexId u, VertexId v) const {
  return net.conductance(u, v) > 0.0 ? 1.0 : 0.0;
}

double LeafAdjacencyTransport::operator()(const Network& net, VertexId u, VertexId v) const {
  return net.degree(u) == 1 && net.conductance(u, v) > 0.0 ? 1.0 : 0.0;
}

std::string LastCollisionTransport::name() const {
  return "qlast:" + std::to_string(n_) + ":" + std::to_string(horizon_);
}

double LastCollisionTransport::operator()(const Network& net, VertexId u, VertexId v) const {
  return net.conductance(u) * qlast_horizon(net, u, v, n_, horizon_, limits_);
}

Eigen::MatrixXd LastCollisionTransport::evaluate_all(const Network& net) const {
  if (n_ > horizon_) {
    throw Error(ErrorCode::InvalidArgument, "collision time exceeds the window", "transport");
  }
  const TransitionKernel kernel = n_step_kernel(net, n_, limits_);
  const TabooTable taboo(net, horizon_ - n_, limits_);
  const auto size = static_cast<Eigen::Index>(net.vertex_count());
  Eigen::MatrixXd table(size, size);
  for (VertexId u = 0; u < net.vertex_count(); ++u) {
    for (VertexId v = 0; v < net.vertex_count(); ++v) {
      const double p = kernel(u, v);
      table(u, v) = net.conductance(u) * p * p * taboo.q0(v, horizon_ - n_);
    }
  }
  return table;
}

double RandomLocalTransport::operator()(const Network& net, VertexId u, VertexId v) const {
  const auto dist = bfs_distances(net, u);
  if (dist[v] > 2) return 0.0;
  return scale_ * static_cast<double>(hash64({seed_, u, v}) >> 11) * 0x1.0p-53;
}

Eigen::MatrixXd RandomLocalTransport::evaluate_all(const Network& net) const {
  const auto size = static_cast<Eigen::Index>(net.vertex_count());
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(size, size);
  for (VertexId u = 0; u < net.vertex_count(); ++u) {
    const auto dist = bfs_distances(net, u);
    for (VertexId v = 0; v < net.vertex_count(); ++v) {
      if (dist[v] <= 2) {
        table(u, v) = scale_ * static_cast<double>(hash64({seed_, u, v}) >> 11) * 0x1.0p-53;
      }
    }
  }
  return table;
}

std::unique_ptr<MassTransport> make_transport(std::string_view spec, const Limits& limits) {
  if (spec == "adjacency") return std::make_unique<AdjacencyTransport>();
  if (spec == "leaf_adjacency") return std::make_unique<LeafAdjacencyTransport>();
  constexpr std::string_view prefix = "qlast:";
  if (spec.substr(0, prefix.size()) == prefix) {
    const std::string_view rest = spec.substr(prefix.size());
    const auto colon = rest.find(':');
    std::uint64_t n = 0;
    std::uint64_t horizon = 0;
    if (colon != std::string_view::npos) {
      const auto a = std::from_chars(rest.data(), rest.data() + colon, n);
      const auto b = std::from_chars(rest.data() + colon + 1, rest.data() + rest.size(), horizon);
      if (a.ec == std::errc{} && a.ptr == rest.data() + colon && b.ec == std::errc{} &&
          b.ptr == rest.data() + rest.size() && n <= horizon) {
        return std::make_unique<LastCollisionTransport>(n, horizon, limits);
      }
    }
    throw Error(ErrorCode::ConfigInvalid,
                "expected qlast:<n>:<N> with n <= N, got '" + std::string(spec) + "'",
                "transport");
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown transport '" + std::string(spec) + "'",
              "transport");
}

RootedDistribution::RootedDistribution(std::vector<RootedComponent> support)
    : support_(std::move(support)) {
  if (support_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "distribution has empty support", "support");
  }
  double total = 0.0;
  for (const RootedComponent& c : support_) {
    if (!(c.weight > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "support weights must be positive", "weight");
    }
    if (c.root_law.probabilities().size() != c.network.vertex_count()) {
      throw Error(ErrorCode::InvalidArgument, "root law does not match its network", "root_law");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "support weights must sum to 1", "weight");
  }
}

RootedDistribution::RootedDistribution(Network net, RootLawKind kind)
    : RootedDistribution([&] {
        RootLaw law = apply_root_law(net, kind);
        std::vector<RootedComponent> support;
        support.push_back({std::move(net), std::move(law), 1.0});
        return support;
      }()) {}

double expected_mass(const RootedDistribution& dist, const MassTransport& f,
                     MassDirection direction, const Limits& limits) {
  double total = 0.0;
  for (const RootedComponent& c : dist.support()) {
    require_dense(c.network, limits);
    const Eigen::MatrixXd table = f.evaluate_all(c.network);
    for (Eigen::Index i = 0; i < table.size(); ++i) {
      const double value = table.data()[i];
      if (value < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "transport " + f.name() + " produced negative mass",
                    "transport");
      }
      if (!std::isfinite(value) || value > limits.transport_cap) {
        return std::numeric_limits<double>::infinity();
      }
    }
    double component = 0.0;
    for (VertexId root = 0; root < c.network.vertex_count(); ++root) {
      const double p = c.root_law.probability(root);
      if (p == 0.0) continue;
      const double mass =
          direction == MassDirection::out ? table.row(root).sum() : table.col(root).sum();
      component += p * mass;
    }
    total += c.weight * component;
  }
  return total;
}

const char* to_string(MtpVerdict::Kind kind) noexcept {
  switch (kind) {
    case MtpVerdict::Kind::holds: return "holds";
    case MtpVerdict::Kind::violated: return "violated";
    case MtpVerdict::Kind::indeterminate: return "indeterminate";
  }
  return "unknown";
}

MtpVerdict check_mtp(const RootedDistribution& dist, const MassTransport& f, double tolerance,
                     const Limits& limits) {
  MtpVerdict verdict;
  verdict.mass_out = expected_mass(dist, f, MassDirection::out, limits);
  verdict.mass_in = expected_mass(dist, f, MassDirection::in, limits);
  if (!std::isfinite(verdict.mass_out) || !std::isfinite(verdict.mass_in)) {
    verdict.kind = MtpVerdict::Kind::indeterminate;
    return verdict;
  }
  // Absolute below 1, relative above.
  const double scale = std::max({1.0, std::abs(verdict.mass_out), std::abs(verdict.mass_in)});
  verdict.kind = std::abs(verdict.mass_out - verdict.mass_in) <= tolerance * scale
                     ? MtpVerdict::Kind::holds
                     : MtpVerdict::Kind::violated;
  return verdict;
}

double check_detailed_balance_n(const Network& net, std::uint64_t n, const Limits& limits) {
  const TransitionKernel kernel = n_step_kernel(net, n, limits);
  Eigen::VectorXd c(static_cast<Eigen::Index>(net.vertex_count()));
  for (VertexId v = 0; v < net.vertex_count(); ++v) c(v) = net.conductance(v);
  const Eigen::MatrixXd flow = c.asDiagonal() * kernel.matrix();
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

std::vector<ReceivedMassTerm> received_mass_identity(const Network& net, VertexId v,
                                                     std::uint64_t max_n, const Limits& limits) {
  if (!net.contains(v)) {
    throw Error(ErrorCode::EndpointOutOfRange, "vertex is outside the network", "v");
  }
  const Eigen::MatrixXd two_step = n_step_kernel(net, 2, limits).matrix();
  const auto size = static_cast<Eigen::Index>(net.vertex_count());
  Eigen::MatrixXd even_power = Eigen::MatrixXd::Identity(size, size);

  std::vector<double> column(net.vertex_count(), 0.0);
  column[v] = 1.0;
  std::vector<ReceivedMassTerm> terms;
  terms.reserve(max_n + 1);
  for (std::uint64_t n = 0; n <= max_n; ++n) {
    if (n > 0) {
      column = pull_back(net, column);
      even_power = even_power * two_step;
    }
    ReceivedMassTerm term;
    term.n = n;
    for (VertexId u = 0; u < net.vertex_count(); ++u) {
      term.lhs += net.conductance(u) * column[u] * column[u];
    }
    term.rhs = net.conductance(v) * even_power(v, v);
    terms.push_back(term);
  }
  return terms;
}

double check_reversibility_labeled(const Network& net, const RootLaw& root_law, std::uint64_t n,
                                   const Limits& limits) {
  const TransitionKernel kernel = n_step_kernel(net, n, limits);
  Eigen::VectorXd law(static_cast<Eigen::Index>(net.vertex_count()));
  for (VertexId v = 0; v < net.vertex_count(); ++v) law(v) = root_law.probability(v);
  const Eigen::MatrixXd joint = law.asDiagonal() * kernel.matrix();
  return (joint - joint.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace collisionlab
