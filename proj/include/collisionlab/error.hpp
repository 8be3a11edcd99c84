#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collisionlab {

enum class ErrorCode {
  DisconnectedGraph,
  NonpositiveConductance,
  EndpointOutOfRange,
  ResourceLimit,
  LengthMismatch,
  CertificateViolation,
  HorizonMismatch,
  ConfigInvalid,
  ParseError,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `field()` names the offending
/// parameter or configuration key when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string field = {})
      : std::runtime_error(std::move(message)), code_(code), field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

/// Caps for the exact (dense) computations and for generated models.
struct Limits {
  std::size_t dense_vertex_cap = 512;
  std::size_t pair_state_cap = 250'000;
  double transport_cap = 1e12;
  std::size_t generator_vertex_cap = 4'000'000;
};

}  // namespace collisionlab
