#pragma once

#include <string>

#include <json.hpp>

#include "collisionlab/models.hpp"
#include "collisionlab/network.hpp"

namespace collisionlab {

/// {"vertices": N, "edges": [[a, b, c], ...]}
nlohmann::json network_to_json(const Network& net);
/// Throws ParseError on malformed input and the build_network errors otherwise.
Network network_from_json(const nlohmann::json& doc);
Network network_from_json_text(const std::string& text);

/// {"root_law": ..., "certificate": {"horizon": T|null, "safety_radius": R, "start": v}}
nlohmann::json sidecar_json(const GeneratedModel& model);

}  // namespace collisionlab
