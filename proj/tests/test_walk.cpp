#include <doctest.h>

#include <sstream>

#include "collisionlab/walk.hpp"
#include "support/networks.hpp"
#include "support/oracles.hpp"

using namespace collisionlab;

TEST_SUITE("walk_engine") {

TEST_CASE("deterministic chains") {
  const Network e = testnets::single_edge().build();
  CHECK(walk_discrete(e, 0, 3, {1, 1}).steps == std::vector<VertexId>{0, 1, 0, 1});
  CHECK(walk_discrete(testnets::k4().build(), 2, 0, {1, 1}).steps == std::vector<VertexId>{2});
  const auto [x, y] = walk_pair(e, 0, 0, 2, {9, 9});
  CHECK(x.steps == std::vector<VertexId>{0, 1, 0});
  CHECK(y.steps == std::vector<VertexId>{0, 1, 0});
  CHECK_THROWS_AS(walk_discrete(e, 2, 3, {1, 1}), Error);
}

TEST_CASE("P3 first step from the center") {
  const Network p3 = testnets::p3().build();
  const std::uint64_t runs = 100'000;
  std::uint64_t zeros = 0;
  for (std::uint64_t r = 0; r < runs; ++r) zeros += walk_discrete(p3, 1, 1, {3, r}).steps[1] == 0 ? 1U : 0U;
  const double est = static_cast<double>(zeros) / runs;
  CHECK(oracle::within_sigma(est, 0.5, std::sqrt(0.25 / runs)));
}

TEST_CASE("discrete walk law matches the kernel") {
  const auto g = testnets::c5_weighted();
  const Network net = g.build();
  Eigen::MatrixXd p4 = oracle::kernel_from_edges(g.n, g.edges);
  p4 = p4 * p4 * p4 * p4;
  std::vector<std::uint64_t> counts(g.n, 0);
  for (std::uint64_t r = 0; r < 50'000; ++r) ++counts[walk_discrete(net, 0, 4, {11, r}).steps[4]];
  std::vector<double> probs(g.n);
  for (std::size_t v = 0; v < g.n; ++v) probs[v] = p4(0, static_cast<Eigen::Index>(v));
  CHECK(oracle::chi_square_pvalue(counts, probs) > 0.01);
}

TEST_CASE("trajectories are reproducible") {
  const Network net = testnets::random_network(20, 10, 3).build();
  CHECK(walk_discrete(net, 4, 500, {42, 7}) == walk_discrete(net, 4, 500, {42, 7}));
  CHECK_FALSE(walk_discrete(net, 4, 500, {42, 7}) == walk_discrete(net, 4, 500, {42, 8}));
  CHECK(walk_continuous(net, 4, 30.0, {42, 7}) == walk_continuous(net, 4, 30.0, {42, 7}));
}

TEST_CASE("continuous path shape") {
  const Network net = testnets::loop_path().build();
  const auto path = walk_continuous(net, 0, 25.0, {5, 5});
  CHECK(path.start_time() == 0.0);
  CHECK(path.horizon() == 25.0);
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    const auto& s = path.segments[i];
    CHECK(s.entry_time < s.exit_time);
    if (i > 0) {
      CHECK(path.segments[i - 1].exit_time == s.entry_time);
      CHECK(net.conductance(path.segments[i - 1].vertex, s.vertex) > 0.0);
    }
  }
  const auto short_path = walk_continuous(net, 1, 1e-12, {5, 5});
  REQUIRE(short_path.segments.size() == 1);
  CHECK(short_path.segments[0].vertex == 1);
  CHECK(path.at(0.0) == 0);
  CHECK(path.at(25.0) == path.segments.back().vertex);
}

TEST_CASE("holding time at rate 2") {
  const Network net = build_network(2, {{0, 1, 2.0}});
  const std::uint64_t runs = 100'000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::uint64_t r = 0; r < runs; ++r) {
    const double h = walk_continuous(net, 0, 60.0, {8, r}).segments.front().exit_time;
    sum += h;
    sum2 += h * h;
  }
  const double mean = sum / runs;
  const double sd = std::sqrt(sum2 / runs - mean * mean);
  CHECK(oracle::within_sigma(mean, 0.5, sd / std::sqrt(static_cast<double>(runs))));
  // constant speed leaves at rate 1 whatever the conductance
  double sum_c = 0.0;
  for (std::uint64_t r = 0; r < runs; ++r) {
    sum_c += walk_continuous(net, 0, 60.0, {9, r}, ClockModel::constant_speed).segments.front().exit_time;
  }
  CHECK(oracle::within_sigma(sum_c / runs, 1.0, 1.0 / std::sqrt(static_cast<double>(runs))));
}

TEST_CASE("continuous law matches the matrix exponential") {
  const auto g = testnets::weighted_triangle();
  const Network net = g.build();
  for (const bool variable : {true, false}) {
    CAPTURE(variable);
    const double t = 0.6;
    const Eigen::MatrixXd law = oracle::expm(oracle::walk_generator(g.n, g.edges, variable), t);
    std::vector<std::uint64_t> counts(g.n, 0);
    const auto clock = variable ? ClockModel::variable_speed : ClockModel::constant_speed;
    for (std::uint64_t r = 0; r < 60'000; ++r) {
      ++counts[walk_continuous(net, 0, 5.0, {21, r}, clock).at(t)];
    }
    std::vector<double> probs(g.n);
    for (std::size_t v = 0; v < g.n; ++v) probs[v] = law(0, static_cast<Eigen::Index>(v));
    CHECK(oracle::chi_square_pvalue(counts, probs) > 0.01);
  }
}

TEST_CASE("pair walks are independent") {
  const Network tri = testnets::triangle().build();
  const std::uint64_t runs = 100'000;
  std::uint64_t same = 0;
  double sx = 0, sy = 0, sxy = 0;
  for (std::uint64_t r = 0; r < runs; ++r) {
    const auto [x, y] = walk_pair(tri, 0, 0, 1, {31, r});
    same += x.steps[1] == y.steps[1] ? 1U : 0U;
    const double a = x.steps[1] == 1 ? 1.0 : 0.0;
    const double b = y.steps[1] == 2 ? 1.0 : 0.0;
    sx += a;
    sy += b;
    sxy += a * b;
  }
  CHECK(oracle::within_sigma(static_cast<double>(same) / runs, 0.5, std::sqrt(0.25 / runs)));
  const double cov = sxy / runs - (sx / runs) * (sy / runs);
  // each indicator has variance 1/4, so the product has sd 1/4
  CHECK(std::abs(cov) <= 3 * 0.25 / std::sqrt(static_cast<double>(runs)));
}

TEST_CASE("restrict keeps the clock") {
  const Network net = testnets::p3().build();
  const auto path = walk_continuous(net, 1, 10.0, {1, 3});
  const auto part = restrict(path, 2.0, 7.5);
  CHECK(part.start_time() == 2.0);
  CHECK(part.horizon() == 7.5);
  for (double t : {2.0, 3.3, 5.1, 7.4}) CHECK(part.at(t) == path.at(t));
  CHECK_THROWS_AS(restrict(path, 3.0, 11.0), Error);
}

TEST_CASE("trajectory csv") {
  std::ostringstream out;
  write_trajectory_csv(out, 2, 1, Trajectory{{0, 1, 0}});
  CHECK(out.str() == "2,1,0,0\n2,1,1,1\n2,1,2,0\n");
  std::ostringstream jump;
  write_trajectory_csv(jump, 0, 0, JumpTrajectory{{{0, 0.0, 0.5}, {1, 0.5, 2.0}}});
  CHECK(jump.str() == "0,0,0,0\n0,0,0.5,1\n");
}

TEST_CASE("lattice steppers") {
  Engine rng = make_engine({4, 4});
  const LatticeStepper comb(LatticeKind::comb);
  std::uint64_t up = 0;
  const std::uint64_t runs = 90'000;
  for (std::uint64_t i = 0; i < runs; ++i) up += comb.step({5, 0}, rng).y == 1 ? 1U : 0U;
  CHECK(oracle::within_sigma(static_cast<double>(up) / runs, 1.0 / 3, std::sqrt(2.0 / 9 / runs)));
  for (int i = 0; i < 100; ++i) {
    const auto s = comb.step({2, 3}, rng);
    CHECK(s.x == 2);
    CHECK(std::abs(s.y - 3) == 1);
  }
  const LatticeStepper plane(LatticeKind::plane);
  std::vector<std::uint64_t> dirs(4, 0);
  for (std::uint64_t i = 0; i < 40'000; ++i) {
    const auto s = plane.step({0, 0}, rng);
    dirs[s.x == 1 ? 0 : s.x == -1 ? 1 : s.y == 1 ? 2 : 3]++;
  }
  CHECK(oracle::chi_square_pvalue(dirs, {0.25, 0.25, 0.25, 0.25}) > 0.01);
}

}
