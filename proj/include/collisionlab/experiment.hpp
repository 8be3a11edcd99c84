#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "collisionlab/models.hpp"
#include "collisionlab/walk.hpp"

namespace collisionlab {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr std::uint64_t kDefaultMasterSeed = 20140917;

/// Which model to build. JSON forms:
///   {"name": "path"|"grid"|"comb", "R": r}
///   {"name": "torus", "L": l}
///   {"name": "percolation", "n": n, "p": p, "seed": s}
///   {"name": "wilson", "base": {...}, "seed": s}
///   {"name": "network", "network": {...}}  or  {"name": "network", "file": "net.json"}
struct ModelSpec {
  std::string name = "path";
  std::int64_t size = 1;
  double p = kCriticalBondProbabilityZ2;
  std::uint64_t seed = 0;
  std::vector<ModelSpec> base;
  std::optional<nlohmann::json> network;
  std::string file;

  bool is_lattice() const { return name == "path" || name == "grid" || name == "comb"; }
  bool operator==(const ModelSpec&) const = default;
};

enum class ExperimentKind : std::uint8_t { gen, collide, identity, mtp, voter, ctcollide };

const char* to_string(ExperimentKind kind) noexcept;

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::collide;
  ModelSpec model;
  std::vector<std::uint64_t> horizons;
  std::uint64_t replicas = 1000;
  std::uint64_t master_seed = kDefaultMasterSeed;
  std::string output;
  /// Start / root vertex; defaults to the model's designated start, else a
  /// root drawn from the model's root law.
  std::optional<VertexId> start;
  /// Window N of the `identity` experiment.
  std::uint64_t window = 10;
  std::string transport = "adjacency";
  RootLawKind root_law = RootLawKind::uniform;
  double tolerance = 1e-9;
  std::optional<double> t_max;
  std::uint64_t grid = 10'000;
  std::vector<VertexId> initial_ones;
  std::optional<ClockModel> clock;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Execution knobs that never change the payload.
struct RunOptions {
  unsigned workers = 1;
  bool record_timing = false;
};

/// Throws ConfigInvalid naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);
ModelSpec parse_model(const nlohmann::json& doc);
nlohmann::json model_to_json(const ModelSpec& model);

struct Violation {
  ErrorCode code = ErrorCode::ConfigInvalid;
  std::string field;
  std::string message;
};

/// All certificate, cap and parameter checks, without running the experiment.
std::vector<Violation> validate(const ExperimentConfig& config, const Limits& limits = {});

/// Builds the model a spec describes.
GeneratedModel materialize(const ModelSpec& spec, const Limits& limits = {});

struct ResultEnvelope {
  ExperimentConfig config;
  std::string version = kVersion;
  std::optional<double> wall_clock_seconds;
  nlohmann::json payload;

  nlohmann::json to_json() const;
  /// Canonical serialization (sorted keys, two-space indent, trailing LF).
  std::string serialize() const;
};

/// Validates, dispatches and, when config.output is set, writes the rendered
/// output there. Payloads do not depend on options.workers.
ResultEnvelope run(const ExperimentConfig& config, const RunOptions& options = {},
                   const Limits& limits = {});

/// The experiment's primary output: CSV for collide/voter/ctcollide, JSON
/// for gen/identity/mtp.
std::string render_output(const ResultEnvelope& envelope);

}  // namespace collisionlab
