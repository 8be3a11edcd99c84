#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "collisionlab/collisionlab.h"

using nlohmann::json;

namespace {

struct Flags {
  std::string config_path;
  std::string kind;
  std::optional<std::string> model;
  std::optional<long long> size;
  std::optional<double> p;
  std::optional<unsigned long long> model_seed;
  std::optional<std::string> base_model;
  std::optional<long long> base_size;
  std::optional<std::string> network;
  std::vector<unsigned long long> horizons;
  std::optional<unsigned long long> replicas;
  std::optional<unsigned long long> seed;
  std::optional<unsigned long long> start;
  std::optional<unsigned long long> window;
  std::optional<std::string> transport;
  std::optional<std::string> root_law;
  std::optional<double> tolerance;
  std::optional<double> t_max;
  std::optional<unsigned long long> grid;
  std::vector<unsigned long long> initial_ones;
  std::optional<std::string> clock;
  std::optional<std::string> output;
  std::string envelope_path;
  unsigned workers = 1;
  bool timing = false;
};

const char* size_key(const std::string& model) {
  if (model == "torus") return "L";
  if (model == "percolation") return "n";
  return "R";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream text;
  text << in.rdbuf();
  return text.str();
}

json build_config(const Flags& f, const std::string& subcommand) {
  json cfg = json::object();
  if (!f.config_path.empty()) cfg = json::parse(read_file(f.config_path));
  if (subcommand != "validate") {
    cfg["kind"] = subcommand;
  } else if (!f.kind.empty()) {
    cfg["kind"] = f.kind;
  }

  if (f.network) {
    cfg["model"] = {{"name", "network"}, {"file", *f.network}};
  } else if (f.model) {
    cfg["model"] = {{"name", *f.model}};
  }
  if (cfg.contains("model") && cfg["model"].is_object()) {
    json& m = cfg["model"];
    const std::string name = m.value("name", "");
    if (f.size) m[size_key(name)] = *f.size;
    if (f.p) m["p"] = *f.p;
    if (f.model_seed) m["seed"] = *f.model_seed;
    if (f.base_model) {
      m["base"] = {{"name", *f.base_model}};
      if (f.base_size) m["base"][size_key(*f.base_model)] = *f.base_size;
    }
  }

  if (!f.horizons.empty()) cfg["horizons"] = f.horizons;
  if (f.replicas) cfg["replicas"] = *f.replicas;
  if (const char* env = std::getenv("COLLISIONLAB_SEED"); env != nullptr && *env != '\0') {
    cfg["master_seed"] = std::stoull(env);
  }
  if (f.seed) cfg["master_seed"] = *f.seed;
  if (f.start) cfg["start"] = *f.start;
  if (f.window) cfg["N"] = *f.window;
  if (f.transport) cfg["transport"] = *f.transport;
  if (f.root_law) cfg["root_law"] = *f.root_law;
  if (f.tolerance) cfg["tolerance"] = *f.tolerance;
  if (f.t_max) cfg["T_max"] = *f.t_max;
  if (f.grid) cfg["grid"] = *f.grid;
  if (!f.initial_ones.empty()) cfg["initial_ones"] = f.initial_ones;
  if (f.clock) cfg["clock"] = *f.clock;
  if (f.output) cfg["output"] = *f.output;
  return cfg;
}

int report(cl_status status) {
  std::cerr << "error: " << cl_status_string(status);
  const std::string field = cl_last_error_field();
  if (!field.empty()) std::cerr << " [" << field << "]";
  std::cerr << ": " << cl_last_error_message() << "\n";
  switch (status) {
    case CL_CONFIG_INVALID:
    case CL_CERTIFICATE_VIOLATION:
    case CL_RESOURCE_LIMIT:
    case CL_PARSE_ERROR:
      return 2;
    default:
      return 1;
  }
}

void write_text(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int execute(const Flags& f, const std::string& subcommand) {
  const std::string cfg = build_config(f, subcommand).dump();
  if (subcommand == "validate") {
    char* violations = nullptr;
    const cl_status status = cl_validate_config(cfg.c_str(), &violations);
    if (violations == nullptr) return report(status);
    std::cout << json::parse(violations).dump(2) << "\n";
    cl_string_free(violations);
    return status == CL_OK ? 0 : 2;
  }
  char* envelope = nullptr;
  char* rendered = nullptr;
  const cl_status status = cl_run_experiment(cfg.c_str(), f.workers, f.timing ? 1 : 0,
                                             f.envelope_path.empty() ? nullptr : &envelope,
                                             f.output ? nullptr : &rendered);
  if (status != CL_OK) return report(status);
  if (envelope != nullptr) {
    write_text(f.envelope_path, envelope);
    cl_string_free(envelope);
  }
  if (rendered != nullptr) {
    std::cout << rendered;
    cl_string_free(rendered);
  }
  return 0;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON configuration file");
  sub->add_option("--model", f.model, "path | grid | comb | torus | percolation | wilson | network");
  sub->add_option("--size,--R,--L,--n", f.size, "model size (R, L or n by model)");
  sub->add_option("--p", f.p, "bond probability (percolation)");
  sub->add_option("--model-seed", f.model_seed, "seed of a random model");
  sub->add_option("--base-model", f.base_model, "base model of wilson");
  sub->add_option("--base-size", f.base_size, "size of the base model");
  sub->add_option("--network", f.network, "network JSON file");
  sub->add_option("--horizons", f.horizons, "collision horizons")->delimiter(',');
  sub->add_option("--replicas", f.replicas, "Monte Carlo replicas");
  sub->add_option("--seed", f.seed, "master seed (overrides COLLISIONLAB_SEED)");
  sub->add_option("--start,--u", f.start, "start / root vertex");
  sub->add_option("--N", f.window, "identity window");
  sub->add_option("--transport", f.transport, "adjacency | leaf_adjacency | qlast:n:N");
  sub->add_option("--root-law", f.root_law, "uniform | conductance_biased");
  sub->add_option("--tolerance", f.tolerance, "mtp tolerance");
  sub->add_option("--T_max,--t-max", f.t_max, "continuous-time horizon");
  sub->add_option("--grid", f.grid, "discretization grid");
  sub->add_option("--initial-ones", f.initial_ones, "vertices holding opinion 1")->delimiter(',');
  sub->add_option("--clock", f.clock, "variable_speed | constant_speed");
  sub->add_option("--output,-o", f.output, "write the output here instead of stdout");
  sub->add_option("--envelope", f.envelope_path, "write the result envelope here");
  sub->add_option("--workers,-j", f.workers, "worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("--timing", f.timing, "record wall-clock time in the envelope");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collision experiments for random walks on networks"};
  app.set_version_flag("--version", std::string(cl_version()));
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"gen", "generate a model network and its sidecar"},
      {"collide", "collision counts of two walks"},
      {"identity", "last-collision partition total"},
      {"mtp", "mass transport check"},
      {"voter", "voter model consensus"},
      {"ctcollide", "continuous-time collision measure"},
      {"validate", "check a configuration without running it"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    if (std::string(name) == "validate") sub->add_option("--kind", flags.kind, "experiment kind");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();
  try {
    return execute(flags, subcommand);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
