#include "collisionlab/experiment.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

#include "collisionlab/collision.hpp"
#include "collisionlab/detail/parallel.hpp"
#include "collisionlab/interacting.hpp"
#include "collisionlab/json_io.hpp"
#include "collisionlab/mtp.hpp"

namespace collisionlab {

using nlohmann::json;

const char* to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::gen: return "gen";
    case ExperimentKind::collide: return "collide";
    case ExperimentKind::identity: return "identity";
    case ExperimentKind::mtp: return "mtp";
    case ExperimentKind::voter: return "voter";
    case ExperimentKind::ctcollide: return "ctcollide";
  }
  return "unknown";
}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::ConfigInvalid, message, field);
}

ExperimentKind parse_kind(const std::string& text) {
  for (auto kind : {ExperimentKind::gen, ExperimentKind::collide, ExperimentKind::identity,
                    ExperimentKind::mtp, ExperimentKind::voter, ExperimentKind::ctcollide}) {
    if (text == to_string(kind)) return kind;
  }
  invalid("kind", "unknown experiment kind '" + text + "'");
}

const char* to_string(ClockModel clock) {
  return clock == ClockModel::variable_speed ? "variable_speed" : "constant_speed";
}

ClockModel parse_clock(const std::string& text) {
  if (text == "variable_speed") return ClockModel::variable_speed;
  if (text == "constant_speed") return ClockModel::constant_speed;
  invalid("clock", "clock must be variable_speed or constant_speed");
}

template <class T>
T get_field(const json& doc, const char* key, const std::string& path) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(path.empty() ? key : path + "." + key, std::string("bad value for '") + key + "'");
  }
}

std::uint64_t get_unsigned(const json& doc, const char* key, const std::string& path = {}) {
  const json& v = doc.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    invalid(path.empty() ? key : path + "." + key,
            std::string("'") + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::int64_t get_signed(const json& doc, const char* key, const std::string& path) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) {
    invalid(path + "." + key, std::string("'") + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

void reject_unknown(const json& doc, std::initializer_list<const char*> allowed,
                    const std::string& path) {
  for (const auto& item : doc.items()) {
    bool ok = false;
    for (const char* key : allowed) ok = ok || item.key() == key;
    if (!ok) invalid(path.empty() ? item.key() : path + "." + item.key(), "unknown key '" + item.key() + "'");
  }
}

ModelSpec parse_model_at(const json& doc, const std::string& path) {
  if (!doc.is_object() || !doc.contains("name") || !doc.at("name").is_string()) {
    invalid(path, "model must be an object with a string \"name\"");
  }
  ModelSpec spec;
  spec.name = doc.at("name").get<std::string>();
  if (spec.is_lattice()) {
    reject_unknown(doc, {"name", "R"}, path);
    if (!doc.contains("R")) invalid(path + ".R", "missing radius R");
    spec.size = get_signed(doc, "R", path);
  } else if (spec.name == "torus") {
    reject_unknown(doc, {"name", "L"}, path);
    if (!doc.contains("L")) invalid(path + ".L", "missing side L");
    spec.size = get_signed(doc, "L", path);
  } else if (spec.name == "percolation") {
    reject_unknown(doc, {"name", "n", "p", "seed"}, path);
    if (!doc.contains("n")) invalid(path + ".n", "missing box size n");
    spec.size = get_signed(doc, "n", path);
    if (doc.contains("p")) spec.p = get_field<double>(doc, "p", path);
    if (doc.contains("seed")) spec.seed = get_unsigned(doc, "seed", path);
  } else if (spec.name == "wilson") {
    reject_unknown(doc, {"name", "base", "seed"}, path);
    if (!doc.contains("base")) invalid(path + ".base", "missing base model");
    spec.size = 0;
    spec.base.push_back(parse_model_at(doc.at("base"), path + ".base"));
    if (doc.contains("seed")) spec.seed = get_unsigned(doc, "seed", path);
  } else if (spec.name == "network") {
    reject_unknown(doc, {"name", "network", "file"}, path);
    spec.size = 0;
    if (doc.contains("network")) {
      spec.network = doc.at("network");
    } else if (doc.contains("file") && doc.at("file").is_string()) {
      spec.file = doc.at("file").get<std::string>();
    } else {
      invalid(path + ".network", "network model needs \"network\" or \"file\"");
    }
  } else {
    invalid(path + ".name", "unknown model '" + spec.name + "'");
  }
  return spec;
}

std::vector<VertexId> get_vertex_list(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_array()) invalid(key, std::string("'") + key + "' must be an array");
  std::vector<VertexId> out;
  for (const json& item : v) {
    if (!item.is_number_integer() || item.get<long long>() < 0 || item.get<long long>() > UINT32_MAX) {
      invalid(key, std::string("'") + key + "' must hold vertex ids");
    }
    out.push_back(item.get<VertexId>());
  }
  return out;
}

}  // namespace

ModelSpec parse_model(const json& doc) { return parse_model_at(doc, "model"); }

json model_to_json(const ModelSpec& model) {
  json out = {{"name", model.name}};
  if (model.is_lattice()) {
    out["R"] = model.size;
  } else if (model.name == "torus") {
    out["L"] = model.size;
  } else if (model.name == "percolation") {
    out["n"] = model.size;
    out["p"] = model.p;
    out["seed"] = model.seed;
  } else if (model.name == "wilson") {
    out["base"] = model_to_json(model.base.front());
    out["seed"] = model.seed;
  } else if (model.name == "network") {
    if (model.network) {
      out["network"] = *model.network;
    } else {
      out["file"] = model.file;
    }
  }
  return out;
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) invalid("config", "configuration must be a JSON object");
  reject_unknown(doc,
                 {"kind", "model", "horizons", "replicas", "master_seed", "output", "start", "u",
                  "N", "transport", "root_law", "tolerance", "T_max", "grid", "initial_ones",
                  "clock"},
                 "");
  ExperimentConfig cfg;
  if (!doc.contains("kind")) invalid("kind", "missing experiment kind");
  cfg.kind = parse_kind(get_field<std::string>(doc, "kind", ""));
  if (!doc.contains("model")) invalid("model", "missing model");
  cfg.model = parse_model(doc.at("model"));
  if (doc.contains("horizons")) {
    const json& h = doc.at("horizons");
    if (!h.is_array()) invalid("horizons", "'horizons' must be an array");
    for (const json& t : h) {
      if (!t.is_number_integer() || t.get<long long>() < 0) {
        invalid("horizons", "horizons must be nonnegative integers");
      }
      cfg.horizons.push_back(t.get<std::uint64_t>());
    }
  }
  if (doc.contains("replicas")) cfg.replicas = get_unsigned(doc, "replicas");
  if (doc.contains("master_seed")) cfg.master_seed = get_unsigned(doc, "master_seed");
  if (doc.contains("output")) cfg.output = get_field<std::string>(doc, "output", "");
  for (const char* key : {"start", "u"}) {
    if (doc.contains(key)) {
      const std::uint64_t v = get_unsigned(doc, key);
      if (v > UINT32_MAX) invalid(key, "vertex id too large");
      cfg.start = static_cast<VertexId>(v);
    }
  }
  if (doc.contains("N")) cfg.window = get_unsigned(doc, "N");
  if (doc.contains("transport")) cfg.transport = get_field<std::string>(doc, "transport", "");
  if (doc.contains("root_law")) {
    cfg.root_law = parse_root_law_kind(get_field<std::string>(doc, "root_law", ""));
  }
  if (doc.contains("tolerance")) cfg.tolerance = get_field<double>(doc, "tolerance", "");
  if (doc.contains("T_max")) cfg.t_max = get_field<double>(doc, "T_max", "");
  if (doc.contains("grid")) cfg.grid = get_unsigned(doc, "grid");
  if (doc.contains("initial_ones")) cfg.initial_ones = get_vertex_list(doc, "initial_ones");
  if (doc.contains("clock")) cfg.clock = parse_clock(get_field<std::string>(doc, "clock", ""));
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json out = {{"kind", to_string(cfg.kind)},
              {"model", model_to_json(cfg.model)},
              {"horizons", cfg.horizons},
              {"replicas", cfg.replicas},
              {"master_seed", cfg.master_seed},
              {"output", cfg.output},
              {"N", cfg.window},
              {"transport", cfg.transport},
              {"root_law", to_string(cfg.root_law)},
              {"tolerance", cfg.tolerance},
              {"grid", cfg.grid},
              {"initial_ones", cfg.initial_ones}};
  if (cfg.start) out["start"] = *cfg.start;
  if (cfg.t_max) out["T_max"] = *cfg.t_max;
  if (cfg.clock) out["clock"] = to_string(*cfg.clock);
  return out;
}

GeneratedModel materialize(const ModelSpec& spec, const Limits& limits) {
  if (spec.name == "path") return gen_path_segment(spec.size, limits);
  if (spec.name == "grid") return gen_grid_box(spec.size, limits);
  if (spec.name == "comb") return gen_comb(spec.size, limits);
  if (spec.name == "torus") return gen_torus(spec.size, limits);
  if (spec.name == "percolation") return gen_percolation_cluster(spec.size, spec.p, spec.seed, limits);
  if (spec.name == "wilson") {
    const GeneratedModel base = materialize(spec.base.front(), limits);
    return {gen_wilson_ust(base.network, spec.seed), std::nullopt, RootLawKind::uniform,
            TruncationCertificate{std::nullopt, 0, 0}, {}};
  }
  if (spec.name == "network") {
    Network net = [&] {
      if (spec.network) return network_from_json(*spec.network);
      std::ifstream in(spec.file);
      if (!in) throw Error(ErrorCode::ParseError, "cannot read network file " + spec.file, "model.file");
      std::stringstream text;
      text << in.rdbuf();
      return network_from_json_text(text.str());
    }();
    return {std::move(net), std::nullopt, RootLawKind::uniform,
            TruncationCertificate{std::nullopt, 0, 0}, {}};
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown model '" + spec.name + "'", "model.name");
}

namespace {

std::uint64_t box_bound(const ModelSpec& spec) {
  if (spec.is_lattice() || spec.name == "torus") return lattice_vertex_count(spec.name, spec.size);
  if (spec.name == "percolation") {
    const auto side = static_cast<std::uint64_t>(spec.size + 1);
    return side * side;
  }
  if (spec.name == "wilson") return box_bound(spec.base.front());
  return 0;
}

void check_model(const ModelSpec& spec, const std::string& path, std::vector<Violation>& out) {
  if (spec.is_lattice() && spec.size < 1) {
    out.push_back({ErrorCode::ConfigInvalid, path + ".R", "radius must be at least 1"});
  } else if (spec.name == "torus" && spec.size < 3) {
    out.push_back({ErrorCode::ConfigInvalid, path + ".L", "torus side must be at least 3"});
  } else if (spec.name == "percolation") {
    if (spec.size < 1) out.push_back({ErrorCode::ConfigInvalid, path + ".n", "box size must be at least 1"});
    if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
      out.push_back({ErrorCode::ConfigInvalid, path + ".p", "bond probability must lie in [0,1]"});
    }
  } else if (spec.name == "wilson") {
    if (spec.base.size() != 1) {
      out.push_back({ErrorCode::ConfigInvalid, path + ".base", "wilson needs exactly one base model"});
    } else {
      check_model(spec.base.front(), path + ".base", out);
    }
  }
}

bool uses_implicit_lattice(const ExperimentConfig& cfg) {
  return cfg.kind == ExperimentKind::collide && cfg.model.is_lattice();
}

ClockModel clock_for(const ExperimentConfig& cfg) {
  if (cfg.clock) return *cfg.clock;
  return cfg.kind == ExperimentKind::voter ? ClockModel::constant_speed : ClockModel::variable_speed;
}

}  // namespace

std::vector<Violation> validate(const ExperimentConfig& cfg, const Limits& limits) {
  std::vector<Violation> out;
  if (cfg.replicas == 0) {
    out.push_back({ErrorCode::ConfigInvalid, "replicas", "replicas must be at least 1"});
  }
  if (!(cfg.tolerance >= 0.0)) {
    out.push_back({ErrorCode::ConfigInvalid, "tolerance", "tolerance must be nonnegative"});
  }
  if (cfg.t_max && !(*cfg.t_max > 0.0)) {
    out.push_back({ErrorCode::ConfigInvalid, "T_max", "T_max must be positive"});
  }
  if (cfg.grid == 0) out.push_back({ErrorCode::ConfigInvalid, "grid", "grid must be at least 1"});
  if (cfg.kind == ExperimentKind::collide && cfg.horizons.empty()) {
    out.push_back({ErrorCode::ConfigInvalid, "horizons", "collide needs at least one horizon"});
  }
  if (cfg.kind == ExperimentKind::mtp) {
    try {
      make_transport(cfg.transport, limits);
    } catch (const Error& e) {
      out.push_back({e.code(), "transport", e.what()});
    }
  }
  const std::size_t before_model = out.size();
  check_model(cfg.model, "model", out);
  if (out.size() > before_model) return out;

  if (uses_implicit_lattice(cfg)) {
    const std::uint64_t certified = static_cast<std::uint64_t>(cfg.model.size - 1);
    for (std::uint64_t t : cfg.horizons) {
      if (t > certified) {
        out.push_back({ErrorCode::CertificateViolation, "horizons",
                       "horizon " + std::to_string(t) + " needs R >= " + std::to_string(t + 1) +
                           " but R = " + std::to_string(cfg.model.size)});
        break;
      }
    }
    if (cfg.start) {
      const std::uint64_t center = cfg.model.name == "comb"
                                       ? static_cast<std::uint64_t>(cfg.model.size) * (cfg.model.size + 1)
                                   : cfg.model.name == "path"
                                       ? static_cast<std::uint64_t>(cfg.model.size)
                                       : lattice_vertex_count("grid", cfg.model.size) / 2;
      if (*cfg.start != center) {
        out.push_back({ErrorCode::CertificateViolation, "start",
                       "lattice truncations are certified only from their designated start"});
      }
    }
    return out;
  }

  const std::uint64_t bound = box_bound(cfg.model);
  if (bound > limits.generator_vertex_cap) {
    out.push_back({ErrorCode::ResourceLimit, "generator_vertex_cap",
                   "model would have up to " + std::to_string(bound) +
                       " vertices, above generator_vertex_cap = " +
                       std::to_string(limits.generator_vertex_cap)});
    return out;
  }
  // Exact experiments are capped by vertex count; known up front for lattices.
  const bool dense = cfg.kind == ExperimentKind::identity || cfg.kind == ExperimentKind::mtp;
  std::uint64_t vertices = 0;
  if (cfg.model.is_lattice() || cfg.model.name == "torus") {
    vertices = bound;
  } else {
    try {
      vertices = materialize(cfg.model, limits).network.vertex_count();
    } catch (const Error& e) {
      out.push_back({e.code(), e.field().empty() ? "model" : e.field(), e.what()});
      return out;
    }
  }
  if (dense && vertices > limits.dense_vertex_cap) {
    out.push_back({ErrorCode::ResourceLimit, "dense_vertex_cap",
                   "model has " + std::to_string(vertices) + " vertices, above dense_vertex_cap = " +
                       std::to_string(limits.dense_vertex_cap)});
  }
  const bool pair_chain = cfg.kind == ExperimentKind::identity ||
                          (cfg.kind == ExperimentKind::mtp && cfg.transport.rfind("qlast:", 0) == 0);
  if (pair_chain && vertices * vertices > limits.pair_state_cap) {
    out.push_back({ErrorCode::ResourceLimit, "pair_state_cap",
                   "pair chain has " + std::to_string(vertices * vertices) +
                       " states, above pair_state_cap = " + std::to_string(limits.pair_state_cap)});
  }
  if (cfg.start && *cfg.start >= vertices) {
    out.push_back({ErrorCode::EndpointOutOfRange, "start", "start vertex is outside the model"});
  }
  for (VertexId v : cfg.initial_ones) {
    if (v >= vertices) {
      out.push_back({ErrorCode::EndpointOutOfRange, "initial_ones", "vertex outside the model"});
      break;
    }
  }
  return out;
}

json ResultEnvelope::to_json() const {
  json out = {{"artifact", "collisionlab"},
              {"version", version},
              {"config", config_to_json(config)},
              {"payload", payload}};
  if (wall_clock_seconds) out["wall_clock_seconds"] = *wall_clock_seconds;
  return out;
}

std::string ResultEnvelope::serialize() const { return to_json().dump(2) + "\n"; }

namespace {

VertexId resolve_start(const ExperimentConfig& cfg, const GeneratedModel& model) {
  if (cfg.start) return *cfg.start;
  if (model.start) return *model.start;
  Engine rng = make_engine({cfg.master_seed, hash64({cfg.master_seed, 0x726f6f74ULL})});
  return apply_root_law(model.network, model.root_law).sample(rng);
}

json growth_payload(const GrowthResult& result, std::uint64_t seed) {
  json rows = json::array();
  for (const GrowthRow& row : result.rows) {
    rows.push_back({{"horizon", row.horizon},
                    {"mean", row.mean},
                    {"median", row.median},
                    {"q10", row.q10},
                    {"q90", row.q90},
                    {"stderr", row.standard_error},
                    {"replicas", row.replicas},
                    {"seed", seed}});
  }
  return rows;
}

json run_collide(const ExperimentConfig& cfg, const RunOptions& opts, const Limits& limits) {
  if (uses_implicit_lattice(cfg)) {
    const LatticeKind kind = cfg.model.name == "path"   ? LatticeKind::line
                             : cfg.model.name == "grid" ? LatticeKind::plane
                                                        : LatticeKind::comb;
    const TruncationCertificate cert{static_cast<std::uint64_t>(cfg.model.size - 1),
                                     static_cast<std::uint64_t>(cfg.model.size), 0};
    const auto result = collision_growth(LatticeStepper(kind), LatticeStepper::State{}, cfg.horizons,
                                         cfg.replicas, cfg.master_seed, opts.workers, &cert);
    return {{"rows", growth_payload(result, cfg.master_seed)}, {"start", "origin"}};
  }
  const GeneratedModel model = materialize(cfg.model, limits);
  const VertexId start = resolve_start(cfg, model);
  const auto result = collision_growth(NetworkStepper(model.network), start, cfg.horizons,
                                       cfg.replicas, cfg.master_seed, opts.workers,
                                       &model.certificate);
  return {{"rows", growth_payload(result, cfg.master_seed)}, {"start", start}};
}

json run_voter(const ExperimentConfig& cfg, const RunOptions& opts, const Limits& limits) {
  const GeneratedModel model = materialize(cfg.model, limits);
  const Network& net = model.network;
  const double n = static_cast<double>(net.vertex_count());
  const double t_max = cfg.t_max.value_or(50.0 * n * n);
  VoterConfiguration initial;
  initial.opinions.assign(net.vertex_count(), 0);
  if (cfg.initial_ones.empty()) {
    initial.opinions[resolve_start(cfg, model)] = 1;
  } else {
    for (VertexId v : cfg.initial_ones) initial.opinions[v] = 1;
  }
  std::vector<VoterOutcome> outcomes(cfg.replicas);
  detail::parallel_for(cfg.replicas, opts.workers, [&](std::uint64_t r) {
    outcomes[r] = voter_simulate(net, initial, t_max,
                                 {cfg.master_seed, derive_stream(cfg.master_seed, r, 0)},
                                 clock_for(cfg));
  });
  json rows = json::array();
  std::uint64_t reached = 0;
  std::uint64_t ones = 0;
  for (std::uint64_t r = 0; r < cfg.replicas; ++r) {
    const VoterOutcome& o = outcomes[r];
    json row = {{"replica", r}};
    row["consensus_value"] = o.consensus_value ? json(*o.consensus_value) : json(nullptr);
    row["consensus_time"] = o.consensus_time ? json(*o.consensus_time) : json(nullptr);
    rows.push_back(std::move(row));
    reached += o.consensus_time ? 1U : 0U;
    ones += o.consensus_value == std::optional<std::uint8_t>(1) ? 1U : 0U;
  }
  return {{"rows", std::move(rows)},
          {"T_max", t_max},
          {"clock", to_string(clock_for(cfg))},
          {"consensus_fraction", static_cast<double>(reached) / static_cast<double>(cfg.replicas)},
          {"ones_fraction", static_cast<double>(ones) / static_cast<double>(cfg.replicas)}};
}

json run_ctcollide(const ExperimentConfig& cfg, const RunOptions& opts, const Limits& limits) {
  const GeneratedModel model = materialize(cfg.model, limits);
  const VertexId start = resolve_start(cfg, model);
  const double t_max = cfg.t_max.value_or(10.0);
  struct Row {
    double measure = 0.0;
    double integral = 0.0;
  };
  std::vector<Row> rows(cfg.replicas);
  detail::parallel_for(cfg.replicas, opts.workers, [&](std::uint64_t r) {
    const auto x = walk_continuous(model.network, start, t_max,
                                   {cfg.master_seed, derive_stream(cfg.master_seed, r, 0)},
                                   clock_for(cfg));
    const auto y = walk_continuous(model.network, start, t_max,
                                   {cfg.master_seed, derive_stream(cfg.master_seed, r, 1)},
                                   clock_for(cfg));
    rows[r] = {collision_measure(x, y).total, discretization_integral(x, y, cfg.grid)};
  });
  json out = json::array();
  for (std::uint64_t r = 0; r < cfg.replicas; ++r) {
    out.push_back({{"replica", r},
                   {"T_max", t_max},
                   {"measure", rows[r].measure},
                   {"integral_grid_estimate", rows[r].integral}});
  }
  return {{"rows", std::move(out)}, {"start", start}, {"clock", to_string(clock_for(cfg))}};
}

json dispatch(const ExperimentConfig& cfg, const RunOptions& opts, const Limits& limits) {
  switch (cfg.kind) {
    case ExperimentKind::gen: {
      const GeneratedModel model = materialize(cfg.model, limits);
      return {{"network", network_to_json(model.network)}, {"sidecar", sidecar_json(model)}};
    }
    case ExperimentKind::collide:
      return run_collide(cfg, opts, limits);
    case ExperimentKind::identity: {
      const GeneratedModel model = materialize(cfg.model, limits);
      const VertexId u = resolve_start(cfg, model);
      const double total = last_collision_identity(model.network, u, cfg.window, limits);
      return {{"u", u}, {"N", cfg.window}, {"total", total}};
    }
    case ExperimentKind::mtp: {
      GeneratedModel model = materialize(cfg.model, limits);
      const auto transport = make_transport(cfg.transport, limits);
      const RootedDistribution dist(std::move(model.network), cfg.root_law);
      const MtpVerdict verdict = check_mtp(dist, *transport, cfg.tolerance, limits);
      return {{"out", verdict.mass_out},
              {"in", verdict.mass_in},
              {"verdict", to_string(verdict.kind)},
              {"transport", transport->name()},
              {"root_law", to_string(cfg.root_law)}};
    }
    case ExperimentKind::voter:
      return run_voter(cfg, opts, limits);
    case ExperimentKind::ctcollide:
      return run_ctcollide(cfg, opts, limits);
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown experiment kind", "kind");
}

void put_number(std::string& out, const json& value) {
  if (value.is_null()) return;
  if (value.is_number_float()) {
    char buffer[32];
    const auto res = std::to_chars(buffer, buffer + sizeof buffer, value.get<double>());
    out.append(buffer, res.ptr);
    return;
  }
  out += value.dump();
}

std::string render_csv(const json& rows, const std::string& header,
                       std::initializer_list<const char*> columns) {
  std::string out = header + "\n";
  for (const json& row : rows) {
    bool first = true;
    for (const char* column : columns) {
      if (!first) out += ',';
      first = false;
      put_number(out, row.at(column));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

ResultEnvelope run(const ExperimentConfig& cfg, const RunOptions& opts, const Limits& limits) {
  const auto violations = validate(cfg, limits);
  if (!violations.empty()) {
    const Violation& first = violations.front();
    throw Error(first.code, first.message, first.field);
  }
  const auto started = std::chrono::steady_clock::now();
  ResultEnvelope envelope;
  envelope.config = cfg;
  envelope.payload = dispatch(cfg, opts, limits);
  if (opts.record_timing) {
    envelope.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + cfg.output, "output");
    out << render_output(envelope);
    if (cfg.kind == ExperimentKind::gen) {
      std::ofstream sidecar(cfg.output + ".sidecar.json", std::ios::binary);
      sidecar << envelope.payload.at("sidecar").dump(2) << '\n';
    }
  }
  return envelope;
}

std::string render_output(const ResultEnvelope& envelope) {
  const json& payload = envelope.payload;
  switch (envelope.config.kind) {
    case ExperimentKind::gen:
      return payload.at("network").dump() + "\n";
    case ExperimentKind::collide:
      return render_csv(payload.at("rows"), "horizon,mean,median,q10,q90,replicas,seed",
                        {"horizon", "mean", "median", "q10", "q90", "replicas", "seed"});
    case ExperimentKind::identity:
      return json{{"u", payload.at("u")}, {"N", payload.at("N")}, {"total", payload.at("total")}}
                 .dump() +
             "\n";
    case ExperimentKind::mtp:
      return json{{"out", payload.at("out")},
                  {"in", payload.at("in")},
                  {"verdict", payload.at("verdict")}}
                 .dump() +
             "\n";
    case ExperimentKind::voter:
      return render_csv(payload.at("rows"), "replica,consensus_value,consensus_time",
                        {"replica", "consensus_value", "consensus_time"});
    case ExperimentKind::ctcollide:
      return render_csv(payload.at("rows"), "replica,T_max,measure,integral_grid_estimate",
                        {"replica", "T_max", "measure", "integral_grid_estimate"});
  }
  return {};
}

}  // namespace collisionlab
