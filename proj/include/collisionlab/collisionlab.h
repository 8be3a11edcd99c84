/* C interface to collisionlab. All functions return a cl_status; on failure
 * cl_last_error_message() and cl_last_error_field() describe the error for the
 * calling thread. Strings returned through char** are owned by the caller and
 * released with cl_string_free. */
#ifndef COLLISIONLAB_H
#define COLLISIONLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(COLLISIONLAB_BUILDING)
#    define CL_API __declspec(dllexport)
#  else
#    define CL_API __declspec(dllimport)
#  endif
#else
#  define CL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cl_status {
  CL_OK = 0,
  CL_DISCONNECTED_GRAPH = 1,
  CL_NONPOSITIVE_CONDUCTANCE = 2,
  CL_ENDPOINT_OUT_OF_RANGE = 3,
  CL_RESOURCE_LIMIT = 4,
  CL_LENGTH_MISMATCH = 5,
  CL_CERTIFICATE_VIOLATION = 6,
  CL_HORIZON_MISMATCH = 7,
  CL_CONFIG_INVALID = 8,
  CL_PARSE_ERROR = 9,
  CL_INVALID_ARGUMENT = 10,
  CL_INTERNAL_ERROR = 99
} cl_status;

typedef struct cl_network cl_network;

CL_API const char* cl_version(void);
/* Symbolic name, e.g. "CertificateViolation". */
CL_API const char* cl_status_string(cl_status status);
CL_API const char* cl_last_error_message(void);
CL_API const char* cl_last_error_field(void);
CL_API void cl_string_free(char* s);

/* edges: edge_count triples (a, b) with conductances[i]. */
CL_API cl_status cl_network_create(size_t vertex_count, const uint32_t* endpoints_a,
                                   const uint32_t* endpoints_b, const double* conductances,
                                   size_t edge_count, cl_network** out);
CL_API cl_status cl_network_from_json(const char* json, cl_network** out);
CL_API cl_status cl_network_to_json(const cl_network* net, char** out);
CL_API void cl_network_destroy(cl_network* net);
CL_API size_t cl_network_vertex_count(const cl_network* net);

CL_API cl_status cl_transition_prob(const cl_network* net, uint32_t u, uint32_t v, double* out);
/* out must hold vertex_count doubles. */
CL_API cl_status cl_stationary_distribution(const cl_network* net, double* out);
CL_API cl_status cl_q0_exact(const cl_network* net, uint32_t v, uint64_t m, double* out);
CL_API cl_status cl_last_collision_identity(const cl_network* net, uint32_t u, uint64_t horizon,
                                            double* out);
/* out must hold steps + 1 vertex ids. */
CL_API cl_status cl_walk_discrete(const cl_network* net, uint32_t start, uint64_t steps,
                                  uint64_t master_seed, uint64_t stream_id, uint32_t* out);

/* Experiment configurations are JSON documents. cl_validate_config returns
 * CL_OK with *violations = "[]" when the config is acceptable, otherwise the
 * status of the first violation and a JSON array of {code, field, message}. */
CL_API cl_status cl_validate_config(const char* config_json, char** violations);
/* Runs an experiment; envelope and rendered may be NULL. */
CL_API cl_status cl_run_experiment(const char* config_json, unsigned workers, int record_timing,
                                   char** envelope, char** rendered);
/* Builds a model from a model JSON ({"name": ...}); network and sidecar are JSON. */
CL_API cl_status cl_generate_model(const char* model_json, char** network, char** sidecar);

#ifdef __cplusplus
}
#endif

#endif
