#include "collisionlab/collisionlab.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "collisionlab/collision.hpp"
#include "collisionlab/experiment.hpp"
#include "collisionlab/json_io.hpp"
#include "collisionlab/walk.hpp"

struct cl_network {
  collisionlab::Network net;
};

namespace {

using collisionlab::Error;
using collisionlab::ErrorCode;

thread_local std::string last_message;
thread_local std::string last_field;

cl_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::DisconnectedGraph: return CL_DISCONNECTED_GRAPH;
    case ErrorCode::NonpositiveConductance: return CL_NONPOSITIVE_CONDUCTANCE;
    case ErrorCode::EndpointOutOfRange: return CL_ENDPOINT_OUT_OF_RANGE;
    case ErrorCode::ResourceLimit: return CL_RESOURCE_LIMIT;
    case ErrorCode::LengthMismatch: return CL_LENGTH_MISMATCH;
    case ErrorCode::CertificateViolation: return CL_CERTIFICATE_VIOLATION;
    case ErrorCode::HorizonMismatch: return CL_HORIZON_MISMATCH;
    case ErrorCode::ConfigInvalid: return CL_CONFIG_INVALID;
    case ErrorCode::ParseError: return CL_PARSE_ERROR;
    case ErrorCode::InvalidArgument: return CL_INVALID_ARGUMENT;
  }
  return CL_INTERNAL_ERROR;
}

cl_status fail(cl_status status, std::string message, std::string field = {}) {
  last_message = std::move(message);
  last_field = std::move(field);
  return status;
}

template <class Fn>
cl_status guarded(Fn&& fn) {
  try {
    last_message.clear();
    last_field.clear();
    return fn();
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what(), e.field());
  } catch (const nlohmann::json::exception& e) {
    return fail(CL_PARSE_ERROR, e.what());
  } catch (const std::exception& e) {
    return fail(CL_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(CL_INTERNAL_ERROR, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse_json(const char* text, const char* field) {
  if (text == nullptr) throw Error(ErrorCode::InvalidArgument, "null JSON text", field);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what(), field);
  }
}

#define CL_REQUIRE(ptr, name)                                               \
  if ((ptr) == nullptr) {                                                   \
    return fail(CL_INVALID_ARGUMENT, std::string(name) + " is null", name); \
  }

}  // namespace

extern "C" {

const char* cl_version(void) { return collisionlab::kVersion; }

const char* cl_status_string(cl_status status) {
  switch (status) {
    case CL_OK: return "Ok";
    case CL_INTERNAL_ERROR: return "InternalError";
    case CL_DISCONNECTED_GRAPH: return collisionlab::to_string(ErrorCode::DisconnectedGraph);
    case CL_NONPOSITIVE_CONDUCTANCE: return collisionlab::to_string(ErrorCode::NonpositiveConductance);
    case CL_ENDPOINT_OUT_OF_RANGE: return collisionlab::to_string(ErrorCode::EndpointOutOfRange);
    case CL_RESOURCE_LIMIT: return collisionlab::to_string(ErrorCode::ResourceLimit);
    case CL_LENGTH_MISMATCH: return collisionlab::to_string(ErrorCode::LengthMismatch);
    case CL_CERTIFICATE_VIOLATION: return collisionlab::to_string(ErrorCode::CertificateViolation);
    case CL_HORIZON_MISMATCH: return collisionlab::to_string(ErrorCode::HorizonMismatch);
    case CL_CONFIG_INVALID: return collisionlab::to_string(ErrorCode::ConfigInvalid);
    case CL_PARSE_ERROR: return collisionlab::to_string(ErrorCode::ParseError);
    case CL_INVALID_ARGUMENT: return collisionlab::to_string(ErrorCode::InvalidArgument);
  }
  return "Unknown";
}

const char* cl_last_error_message(void) { return last_message.c_str(); }
const char* cl_last_error_field(void) { return last_field.c_str(); }
void cl_string_free(char* s) { std::free(s); }

cl_status cl_network_create(size_t vertex_count, const uint32_t* endpoints_a,
                            const uint32_t* endpoints_b, const double* conductances,
                            size_t edge_count, cl_network** out) {
  CL_REQUIRE(out, "out");
  if (edge_count > 0) {
    CL_REQUIRE(endpoints_a, "endpoints_a");
    CL_REQUIRE(endpoints_b, "endpoints_b");
    CL_REQUIRE(conductances, "conductances");
  }
  return guarded([&] {
    std::vector<collisionlab::Edge> edges(edge_count);
    for (size_t i = 0; i < edge_count; ++i) edges[i] = {endpoints_a[i], endpoints_b[i], conductances[i]};
    *out = new cl_network{collisionlab::build_network(vertex_count, std::move(edges))};
    return CL_OK;
  });
}

cl_status cl_network_from_json(const char* json, cl_network** out) {
  CL_REQUIRE(out, "out");
  return guarded([&] {
    *out = new cl_network{collisionlab::network_from_json(parse_json(json, "network"))};
    return CL_OK;
  });
}

cl_status cl_network_to_json(const cl_network* net, char** out) {
  CL_REQUIRE(net, "net");
  CL_REQUIRE(out, "out");
  return guarded([&] {
    *out = dup(collisionlab::network_to_json(net->net).dump());
    return CL_OK;
  });
}

void cl_network_destroy(cl_network* net) { delete net; }

size_t cl_network_vertex_count(const cl_network* net) {
  return net == nullptr ? 0 : net->net.vertex_count();
}

cl_status cl_transition_prob(const cl_network* net, uint32_t u, uint32_t v, double* out) {
  CL_REQUIRE(net, "net");
  CL_REQUIRE(out, "out");
  return guarded([&] {
    *out = collisionlab::transition_prob(net->net, u, v);
    return CL_OK;
  });
}

cl_status cl_stationary_distribution(const cl_network* net, double* out) {
  CL_REQUIRE(net, "net");
  CL_REQUIRE(out, "out");
  return guarded([&] {
    const auto pi = collisionlab::stationary_distribution(net->net);
    std::copy(pi.begin(), pi.end(), out);
    return CL_OK;
  });
}

cl_status cl_q0_exact(const cl_network* net, uint32_t v, uint64_t m, double* out) {
  CL_REQUIRE(net, "net");
  CL_REQUIRE(out, "out");
  return guarded([&] {
    *out = collisionlab::q0_exact(net->net, v, m);
    return CL_OK;
  });
}

cl_status cl_last_collision_identity(const cl_network* net, uint32_t u, uint64_t horizon,
                                     double* out) {
  CL_REQUIRE(net, "net");
  CL_REQUIRE(out, "out");
  return guarded([&] {
    *out = collisionlab::last_collision_identity(net->net, u, horizon, collisionlab::Limits{});
    return CL_OK;
  });
}

cl_status cl_walk_discrete(const cl_network* net, uint32_t start, uint64_t steps,
                           uint64_t master_seed, uint64_t stream_id, uint32_t* out) {
  CL_REQUIRE(net, "net");
  CL_REQUIRE(out, "out");
  return guarded([&] {
    const auto path = collisionlab::walk_discrete(net->net, start, steps, {master_seed, stream_id});
    std::copy(path.steps.begin(), path.steps.end(), out);
    return CL_OK;
  });
}

cl_status cl_validate_config(const char* config_json, char** violations) {
  CL_REQUIRE(violations, "violations");
  return guarded([&] {
    const auto cfg = collisionlab::parse_config(parse_json(config_json, "config"));
    const auto found = collisionlab::validate(cfg);
    nlohmann::json list = nlohmann::json::array();
    for (const auto& v : found) {
      list.push_back({{"code", collisionlab::to_string(v.code)}, {"field", v.field}, {"message", v.message}});
    }
    *violations = dup(list.dump());
    if (found.empty()) return CL_OK;
    return fail(status_of(found.front().code), found.front().message, found.front().field);
  });
}

cl_status cl_run_experiment(const char* config_json, unsigned workers, int record_timing,
                            char** envelope, char** rendered) {
  return guarded([&] {
    const auto cfg = collisionlab::parse_config(parse_json(config_json, "config"));
    const auto result = collisionlab::run(cfg, {workers == 0 ? 1U : workers, record_timing != 0});
    std::string env_text = envelope != nullptr ? result.serialize() : std::string();
    std::string out_text = rendered != nullptr ? collisionlab::render_output(result) : std::string();
    if (envelope != nullptr) *envelope = dup(env_text);
    if (rendered != nullptr) {
      try {
        *rendered = dup(out_text);
      } catch (...) {
        if (envelope != nullptr) std::free(*envelope);
        throw;
      }
    }
    return CL_OK;
  });
}

cl_status cl_generate_model(const char* model_json, char** network, char** sidecar) {
  CL_REQUIRE(network, "network");
  return guarded([&] {
    const auto spec = collisionlab::parse_model(parse_json(model_json, "model"));
    const auto model = collisionlab::materialize(spec);
    std::string side = collisionlab::sidecar_json(model).dump();
    *network = dup(collisionlab::network_to_json(model.network).dump());
    if (sidecar != nullptr) *sidecar = dup(side);
    return CL_OK;
  });
}

}  // extern "C"
