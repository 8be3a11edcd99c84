// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "collisionlab/collision.hpp"
#include "collisionlab/experiment.hpp"
#include "collisionlab/interacting.hpp"
#include "collisionlab/mtp.hpp"
#include "support/networks.hpp"
#include "support/oracles.hpp"

using namespace collisionlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned workers() { return std::max(1U, std::thread::hardware_concurrency()); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Outcome partition_identity() {
  double worst = 0.0;
  std::size_t nets = 0;
  for (const auto& g : testnets::battery()) {
    const Network net = g.build();
    const TabooTable taboo(net, 50);
    for (VertexId u = 0; u < net.vertex_count(); ++u) {
      for (std::uint64_t n = 0; n <= 50; ++n) {
        worst = std::max(worst, std::abs(last_collision_identity(net, u, n, taboo) - 1.0));
      }
    }
    ++nets;
  }
  return {worst <= 1e-9 && nets >= 20, std::to_string(nets) + " networks, max |total-1| = " + fmt("%.3g", worst)};
}

Outcome received_mass() {
  double worst = 0.0;
  for (const auto& g : testnets::battery()) {
    const Network net = g.build();
    for (VertexId v = 0; v < net.vertex_count(); ++v) {
      for (const auto& t : received_mass_identity(net, v, 32)) worst = std::max(worst, std::abs(t.lhs - t.rhs));
    }
  }
  return {worst <= 1e-10, "max |lhs-rhs| = " + fmt("%.3g", worst)};
}

Outcome brute_force() {
  double worst = 0.0;
  std::size_t nets = 0;
  for (const auto& g : testnets::tiny_battery()) {
    const Network net = g.build();
    const oracle::PairPaths brute(g.n, g.edges);
    for (int horizon = 0; horizon <= 6; ++horizon) {
      for (VertexId v = 0; v < g.n; ++v) {
        worst = std::max(worst, std::abs(q0_exact(net, v, horizon) - brute.q0(v, horizon)));
      }
      for (VertexId u = 0; u < g.n; ++u) {
        const auto last = brute.last_collision(u, horizon);
        for (int n = 0; n <= horizon; ++n) {
          for (VertexId v = 0; v < g.n; ++v) {
            worst = std::max(worst, std::abs(qlast_horizon(net, u, v, n, horizon) - last[n][v]));
          }
        }
      }
    }
    ++nets;
  }
  return {worst <= 1e-12, std::to_string(nets) + " networks, max deviation = " + fmt("%.3g", worst)};
}

Outcome mtp_certification() {
  const char* specs[] = {"adjacency", "leaf_adjacency", "qlast:0:4", "qlast:2:5", "qlast:5:5"};
  std::size_t failures = 0;
  for (const auto& g : testnets::battery()) {
    const RootedDistribution dist(g.build(), RootLawKind::uniform);
    for (const char* s : specs) {
      if (check_mtp(dist, *make_transport(s), 1e-9).kind != MtpVerdict::Kind::holds) ++failures;
    }
  }
  const RootedDistribution biased(testnets::p3().build(), RootLawKind::conductance_biased);
  const auto v = check_mtp(biased, LeafAdjacencyTransport{}, 1e-9);
  const bool p3_ok = v.kind == MtpVerdict::Kind::violated && v.mass_out == 0.5 && v.mass_in == 1.0;
  return {failures == 0 && p3_ok, std::to_string(failures) + " uniform failures; P3 biased out = " +
                                      fmt2("%.17g, in = %.17g", v.mass_out, v.mass_in)};
}

Outcome reversibility() {
  double worst = 0.0;
  for (const auto& g : testnets::battery()) {
    const Network net = g.build();
    const RootLaw law = apply_root_law(net, RootLawKind::conductance_biased);
    for (std::uint64_t n = 0; n <= 16; ++n) worst = std::max(worst, check_reversibility_labeled(net, law, n));
  }
  const Network p3 = testnets::p3().build();
  const double uniform = check_reversibility_labeled(p3, apply_root_law(p3, RootLawKind::uniform), 1);
  return {worst <= 1e-10 && std::abs(uniform - 1.0 / 6) <= 1e-15,
          "biased max = " + fmt("%.3g", worst) + ", P3 uniform = " + fmt("%.17g", uniform)};
}

ResultEnvelope run_json(const std::string& text) {
  return run(parse_config(nlohmann::json::parse(text)), {workers(), false});
}

Outcome growth_on_z() {
  const auto env = run_json(R"({"kind":"collide","model":{"name":"path","R":10001},)"
                            R"("horizons":[100,1000,10000],"replicas":10000,"master_seed":6})");
  const auto& rows = env.payload.at("rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& row : rows) {
    const double x = std::log(row.at("horizon").get<double>());
    const double y = std::log(row.at("mean").get<double>());
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(rows.size());
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return {slope >= 0.4 && slope <= 0.6, "slope = " + fmt("%.4f", slope)};
}

Outcome comb_contrast() {
  const auto env = run_json(R"({"kind":"collide","model":{"name":"comb","R":100001},)"
                            R"("horizons":[10000,100000],"replicas":4000,"master_seed":7})");
  const auto& rows = env.payload.at("rows");
  const double med4 = rows[0]["median"], med5 = rows[1]["median"];
  const double mean4 = rows[0]["mean"], mean5 = rows[1]["mean"];
  const bool ok = med5 <= 2 * med4 && mean5 >= 1.3 * mean4;
  return {ok, fmt2("median %.1f -> %.1f, ", med4, med5) + fmt2("mean %.3f -> %.3f", mean4, mean5)};
}

std::string growth_check(const Network& net, VertexId start, std::uint64_t seed, bool& ok) {
  const std::vector<std::uint64_t> hs = {1000, 10000};
  const std::uint64_t replicas = 4000;
  const auto r = collision_growth(NetworkStepper(net), start, hs, replicas, seed, workers());
  double s = 0, s2 = 0;
  for (std::uint64_t i = 0; i < replicas; ++i) {
    const double d = static_cast<double>(r.counts[1][i]) - static_cast<double>(r.counts[0][i]);
    s += d;
    s2 += d * d;
  }
  const double mean = s / replicas;
  const double se = std::sqrt((s2 - replicas * mean * mean) / (replicas - 1.0) / replicas);
  const double z = mean / se;
  ok = ok && z >= 5.0;
  return fmt2("diff %.3f (%.1f SE)", mean, z);
}

Outcome recurrent_growth() {
  bool ok = true;
  const auto perc = gen_percolation_cluster(200, 0.5, 8);
  Engine rng = make_engine({8, 1});
  const VertexId root = apply_root_law(perc.network, perc.root_law).sample(rng);
  std::string detail = "percolation |V|=" + std::to_string(perc.network.vertex_count()) + " " +
                       growth_check(perc.network, root, 81, ok);
  const Network ust = gen_wilson_ust(gen_torus(64).network, 8);
  const VertexId ust_root = apply_root_law(ust, RootLawKind::uniform).sample(rng);
  detail += "; wilson " + growth_check(ust, ust_root, 82, ok);
  return {ok, detail};
}

Outcome continuous_measure() {
  const Network two = build_network(2, {{0, 1, 1.0}});
  const std::uint64_t runs = 100'000;
  std::vector<double> totals(runs);
  detail::parallel_for(runs, workers(), [&](std::uint64_t r) {
    totals[r] = collision_measure(walk_continuous(two, 0, 5.0, {9, derive_stream(9, r, 0)}),
                                  walk_continuous(two, 0, 5.0, {9, derive_stream(9, r, 1)}))
                    .total;
  });
  double s = 0, s2 = 0;
  for (double t : totals) {
    s += t;
    s2 += t * t;
  }
  const double mean = s / runs;
  const double se = std::sqrt((s2 / runs - mean * mean) / runs);
  const double exact = 2.5 + (1 - std::exp(-20.0)) / 8;
  const bool mean_ok = oracle::within_sigma(mean, exact, se);

  const auto g = testnets::random_network(8, 5, 91);
  const Network net = g.build();
  std::size_t outside = 0;
  const std::uint64_t grid = 10'000;
  const double t_max = 10.0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const auto x = walk_continuous(net, static_cast<VertexId>(r % 8), t_max, {10, 2 * r});
    const auto y = walk_continuous(net, static_cast<VertexId>((r * 3) % 8), t_max, {10, 2 * r + 1});
    const auto m = collision_measure(x, y);
    const double bound = (2 * t_max + static_cast<double>(m.intervals.size())) / grid;
    if (std::abs(discretization_integral(x, y, grid) - m.total) > bound) ++outside;
  }
  return {mean_ok && outside == 0, fmt2("mean %.5f vs %.5f", mean, exact) + fmt(" (se %.2g), ", se) +
                                       std::to_string(outside) + "/100 pairs outside bound"};
}

Outcome voter_duality() {
  std::size_t stuck = 0;
  std::size_t trials = 0;
  std::string first_stuck;
  for (const auto& g : testnets::battery()) {
    const Network net = g.build();
    const double t_max = 50.0 * static_cast<double>(g.n * g.n);
    for (std::uint64_t r = 0; r < 10'000; ++r) {
      Engine rng = make_engine({12, r});
      VoterConfiguration init{std::vector<std::uint8_t>(g.n), 0.0};
      for (auto& o : init.opinions) o = static_cast<std::uint8_t>(rng() >> 63);
      if (!voter_simulate(net, init, t_max, {13, r}).consensus_time) {
        if (stuck == 0) first_stuck = " (first stuck: " + g.name + " seed 13/" + std::to_string(r) + ")";
        ++stuck;
      }
      ++trials;
    }
  }

  const auto p3g = testnets::p3();
  const Network p3 = p3g.build();
  const std::uint64_t runs = 100'000;
  const std::vector<std::uint8_t> init = {0, 1, 0};
  std::vector<std::uint8_t> wins(runs);
  detail::parallel_for(runs, workers(), [&](std::uint64_t r) {
    wins[r] = *voter_simulate(p3, {init, 0.0}, 1e6, {14, r}).consensus_value;
  });
  double ones = 0;
  for (auto w : wins) ones += w;
  const double frac = ones / runs;
  const bool half_ok = oracle::within_sigma(frac, 0.5, std::sqrt(0.25 / runs));

  bool dual_ok = true;
  double worst_z = 0.0;
  for (const double t : {0.5, 1.0, 2.0}) {
    const Eigen::MatrixXd law = oracle::expm(oracle::voter_generator(3, p3g.edges), t);
    for (VertexId u = 0; u < 3; ++u) {
      double exact = 0.0;
      for (Eigen::Index s = 0; s < 8; ++s) {
        if ((s >> u) & 1) exact += law(0b010, s);
      }
      std::vector<std::uint8_t> voter(runs), dual(runs);
      detail::parallel_for(runs, workers(), [&](std::uint64_t r) {
        voter[r] = voter_simulate(p3, {init, 0.0}, t, {15, r}).final_state.opinions[u];
        dual[r] = init[coalescing_walks(p3, {u}, t, {16, r}).positions[0]];
      });
      double a = 0, b = 0;
      for (std::uint64_t r = 0; r < runs; ++r) {
        a += voter[r];
        b += dual[r];
      }
      a /= runs;
      b /= runs;
      const double se = std::sqrt(std::max(exact * (1 - exact), 1e-12) / runs);
      worst_z = std::max({worst_z, std::abs(a - exact) / se, std::abs(b - exact) / se,
                          std::abs(a - b) / (se * std::sqrt(2.0))});
      dual_ok = dual_ok && oracle::within_sigma(a, exact, se) && oracle::within_sigma(b, exact, se) &&
                oracle::within_sigma(a - b, 0.0, se * std::sqrt(2.0));
    }
  }
  return {stuck == 0 && half_ok && dual_ok,
          std::to_string(trials - stuck) + "/" + std::to_string(trials) + " consensus" + first_stuck + "; P3 center " +
              fmt("%.4f", frac) + "; duality worst " + fmt("%.2f sigma", worst_z)};
}

Outcome parity() {
  std::uint64_t collisions = 0;
  std::size_t pairs = 0;
  bool classifier_ok = true;
  for (const auto& g : testnets::bipartite_battery()) {
    const Network net = g.build();
    const auto colors = is_bipartite(net).coloring;
    for (VertexId v = 0; v < net.vertex_count(); ++v) {
      if (colors[v] == colors[0]) continue;
      classifier_ok = classifier_ok && parity_feasibility(net, 0, v) == ParityVerdict::always_infeasible;
      ++pairs;
      std::vector<std::uint64_t> hits(10'000, 0);
      detail::parallel_for(10'000, workers(), [&](std::uint64_t r) {
        const auto [x, y] = walk_pair(net, 0, v, 100, {17, derive_stream(17, r, v)});
        hits[r] = count_collisions(x, y).collision_count;
      });
      for (auto h : hits) collisions += h;
    }
  }
  return {collisions == 0 && classifier_ok,
          std::to_string(pairs) + " odd-class pairs x 10000 replicas, " + std::to_string(collisions) + " collisions"};
}

Outcome determinism() {
  const char* configs[] = {
      R"({"kind":"collide","model":{"name":"comb","R":501},"horizons":[100,500],"replicas":2000})",
      R"({"kind":"collide","model":{"name":"wilson","base":{"name":"torus","L":16},"seed":2},"horizons":[300],"replicas":1000})",
      R"({"kind":"identity","model":{"name":"grid","R":3},"N":12})",
      R"({"kind":"mtp","model":{"name":"percolation","n":8,"seed":3},"transport":"qlast:2:6"})",
      R"({"kind":"voter","model":{"name":"torus","L":3},"replicas":500})",
      R"({"kind":"ctcollide","model":{"name":"path","R":3},"replicas":500,"T_max":4,"grid":200})",
      R"({"kind":"gen","model":{"name":"percolation","n":30,"seed":5}})"};
  std::size_t mismatches = 0;
  for (const char* text : configs) {
    const auto cfg = parse_config(nlohmann::json::parse(text));
    const std::string one = run(cfg, {1, false}).serialize();
    for (unsigned w : {2U, 8U}) mismatches += run(cfg, {w, false}).serialize() == one ? 0U : 1U;
  }
  return {mismatches == 0, std::to_string(std::size(configs)) + " configs, " + std::to_string(mismatches) +
                               " mismatching envelopes"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"partition identity", partition_identity},
      {"received-mass identity", received_mass},
      {"brute-force oracle equivalence", brute_force},
      {"MTP certification", mtp_certification},
      {"reversibility certification", reversibility},
      {"collision growth on Z", growth_on_z},
      {"comb contrast", comb_contrast},
      {"recurrent-model growth", recurrent_growth},
      {"continuous-time measure", continuous_measure},
      {"voter duality and consensus", voter_duality},
      {"parity", parity},
      {"determinism", determinism}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto started = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
