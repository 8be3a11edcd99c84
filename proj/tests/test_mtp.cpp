#include <doctest.h>

#include <cmath>

#include "collisionlab/collision.hpp"
#include "collisionlab/mtp.hpp"
#include "support/networks.hpp"
#include "support/oracles.hpp"

using namespace collisionlab;

namespace {

std::vector<std::unique_ptr<MassTransport>> builtin_transports() {
  std::vector<std::unique_ptr<MassTransport>> out;
  out.push_back(make_transport("adjacency"));
  out.push_back(make_transport("leaf_adjacency"));
  out.push_back(make_transport("qlast:2:6"));
  out.push_back(make_transport("qlast:0:3"));
  out.push_back(std::make_unique<RandomLocalTransport>(5));
  return out;
}

}  // namespace

TEST_SUITE("mtp_check") {

TEST_CASE("P3 biased root breaks the leaf transport") {
  const RootedDistribution biased(testnets::p3().build(), RootLawKind::conductance_biased);
  const LeafAdjacencyTransport leaf;
  CHECK(expected_mass(biased, leaf, MassDirection::out) == 0.5);
  CHECK(expected_mass(biased, leaf, MassDirection::in) == 1.0);
  const auto verdict = check_mtp(biased, leaf, 1e-9);
  CHECK(verdict.kind == MtpVerdict::Kind::violated);
  CHECK(verdict.mass_out == 0.5);
  CHECK(verdict.mass_in == 1.0);
  const RootedDistribution uniform(testnets::p3().build(), RootLawKind::uniform);
  CHECK(check_mtp(uniform, leaf, 1e-9).kind == MtpVerdict::Kind::holds);
}

TEST_CASE("uniform roots satisfy the transport principle") {
  const auto transports = builtin_transports();
  for (const auto& g : testnets::battery()) {
    CAPTURE(g.name);
    const RootedDistribution dist(g.build(), RootLawKind::uniform);
    for (const auto& f : transports) {
      CAPTURE(f->name());
      const auto v = check_mtp(dist, *f, 1e-9);
      CHECK(v.kind == MtpVerdict::Kind::holds);
    }
  }
  const RootedDistribution one(build_network(1, {}), RootLawKind::uniform);
  for (const auto& f : transports) CHECK(check_mtp(one, *f, 1e-9).kind == MtpVerdict::Kind::holds);
}

TEST_CASE("expected mass against a direct double sum") {
  const auto g = testnets::random_network(9, 5, 61);
  const Network net = g.build();
  const RandomLocalTransport f(12);
  const auto c = oracle::vertex_conductance(g.n, g.edges);
  double total_c = 0.0;
  for (double x : c) total_c += x;
  double out = 0.0;
  double in = 0.0;
  for (VertexId r = 0; r < g.n; ++r) {
    for (VertexId v = 0; v < g.n; ++v) {
      out += c[r] / total_c * f(net, r, v);
      in += c[r] / total_c * f(net, v, r);
    }
  }
  const RootedDistribution dist(net, RootLawKind::conductance_biased);
  CHECK(expected_mass(dist, f, MassDirection::out) == doctest::Approx(out).epsilon(1e-13));
  CHECK(expected_mass(dist, f, MassDirection::in) == doctest::Approx(in).epsilon(1e-13));
}

TEST_CASE("last collision transport values") {
  const auto g = testnets::c5_weighted();
  const Network net = g.build();
  const LastCollisionTransport f(2, 5);
  const auto table = f.evaluate_all(net);
  for (VertexId u = 0; u < 5; ++u) {
    for (VertexId v = 0; v < 5; ++v) {
      const double expect = net.conductance(u) * qlast_horizon(net, u, v, 2, 5);
      CHECK(f(net, u, v) == doctest::Approx(expect).epsilon(1e-14));
      CHECK(table(u, v) == doctest::Approx(expect).epsilon(1e-14));
    }
  }
  CHECK(f.name() == "qlast:2:5");
}

TEST_CASE("mixtures and infinite mass") {
  std::vector<RootedComponent> parts;
  const Network p3 = testnets::p3().build();
  const Network k4 = testnets::k4().build();
  parts.push_back({p3, apply_root_law(p3, RootLawKind::uniform), 0.25});
  parts.push_back({k4, apply_root_law(k4, RootLawKind::uniform), 0.75});
  const RootedDistribution mix(std::move(parts));
  const AdjacencyTransport adj;
  CHECK(expected_mass(mix, adj, MassDirection::out) == doctest::Approx(0.25 * 4.0 / 3 + 0.75 * 3));
  std::vector<RootedComponent> bad;
  bad.push_back({p3, apply_root_law(p3, RootLawKind::uniform), 0.5});
  CHECK_THROWS_AS(RootedDistribution(std::move(bad)), Error);

  const FunctionTransport huge("huge", [](const Network&, VertexId, VertexId) { return 1e300; });
  const RootedDistribution dist(p3, RootLawKind::uniform);
  CHECK(std::isinf(expected_mass(dist, huge, MassDirection::out)));
  CHECK(check_mtp(dist, huge, 1e-9).kind == MtpVerdict::Kind::indeterminate);
  const FunctionTransport negative("neg", [](const Network&, VertexId, VertexId) { return -1.0; });
  CHECK_THROWS_AS(expected_mass(dist, negative, MassDirection::out), Error);
}

TEST_CASE("make_transport") {
  CHECK(make_transport("adjacency")->name() == "adjacency");
  CHECK(make_transport("qlast:3:7")->name() == "qlast:3:7");
  CHECK_THROWS_AS(make_transport("qlast:8:7"), Error);
  CHECK_THROWS_AS(make_transport("qlast:x"), Error);
  CHECK_THROWS_AS(make_transport("teleport"), Error);
}

TEST_CASE("detailed balance") {
  CHECK(check_detailed_balance_n(testnets::weighted_triangle().build(), 3) <= 1e-12);
  for (const auto& g : testnets::battery()) CHECK(check_detailed_balance_n(g.build(), 5) <= 1e-12);
}

TEST_CASE("received mass identity") {
  const auto tri = received_mass_identity(testnets::triangle().build(), 0, 1);
  REQUIRE(tri.size() == 2);
  CHECK(tri[1].lhs == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tri[1].rhs == doctest::Approx(1.0).epsilon(1e-15));
  for (const auto& g : testnets::battery()) {
    CAPTURE(g.name);
    const Network net = g.build();
    for (VertexId v = 0; v < net.vertex_count(); v += 5) {
      for (const auto& term : received_mass_identity(net, v, 12)) {
        CHECK(std::abs(term.lhs - term.rhs) <= 1e-10);
      }
    }
  }
}

TEST_CASE("labeled reversibility") {
  const Network p3 = testnets::p3().build();
  CHECK(check_reversibility_labeled(p3, apply_root_law(p3, RootLawKind::uniform), 1) ==
        doctest::Approx(1.0 / 6).epsilon(1e-15));
  const Network k4 = testnets::k4().build();
  for (std::uint64_t n = 0; n < 6; ++n) {
    CHECK(check_reversibility_labeled(k4, apply_root_law(k4, RootLawKind::uniform), n) <= 1e-12);
  }
  for (const auto& g : testnets::battery()) {
    const Network net = g.build();
    CHECK(check_reversibility_labeled(net, apply_root_law(net, RootLawKind::conductance_biased), 4) <= 1e-10);
  }
}

}
