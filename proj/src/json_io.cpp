#include "collisionlab/json_io.hpp"

namespace collisionlab {

nlohmann::json network_to_json(const Network& net) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : net.edges()) edges.push_back({e.a, e.b, e.conductance});
  return {{"vertices", net.vertex_count()}, {"edges", std::move(edges)}};
}

Network network_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges")) {
    throw Error(ErrorCode::ParseError, "network JSON needs \"vertices\" and \"edges\"", "network");
  }
  const auto& vertices = doc.at("vertices");
  if (!vertices.is_number_unsigned() && !(vertices.is_number_integer() && vertices.get<long long>() >= 0)) {
    throw Error(ErrorCode::ParseError, "\"vertices\" must be a nonnegative integer", "vertices");
  }
  const auto& list = doc.at("edges");
  if (!list.is_array()) throw Error(ErrorCode::ParseError, "\"edges\" must be an array", "edges");
  std::vector<Edge> edges;
  edges.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& e = list[i];
    const bool shape_ok = e.is_array() && e.size() == 3 && e[0].is_number_integer() &&
                          e[1].is_number_integer() && e[2].is_number();
    if (!shape_ok || e[0].get<long long>() < 0 || e[1].get<long long>() < 0) {
      throw Error(ErrorCode::ParseError,
                  "edge " + std::to_string(i) + " must be [a, b, conductance]", "edges");
    }
    const auto a = e[0].get<unsigned long long>();
    const auto b = e[1].get<unsigned long long>();
    if (a > UINT32_MAX || b > UINT32_MAX) {
      throw Error(ErrorCode::EndpointOutOfRange, "edge " + std::to_string(i) + " endpoint too large",
                  "edges");
    }
    edges.push_back({static_cast<VertexId>(a), static_cast<VertexId>(b), e[2].get<double>()});
  }
  return Network::build(vertices.get<std::size_t>(), std::move(edges));
}

Network network_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what(), "network");
  }
  return network_from_json(doc);
}

nlohmann::json sidecar_json(const GeneratedModel& model) {
  nlohmann::json cert = {{"safety_radius", model.certificate.safety_radius},
                         {"start", model.certificate.start_vertex}};
  cert["horizon"] = model.certificate.horizon ? nlohmann::json(*model.certificate.horizon)
                                              : nlohmann::json(nullptr);
  nlohmann::json root_law = {{"kind", to_string(model.root_law)}};
  if (model.root_law == RootLawKind::fixed && model.start) root_law["vertex"] = *model.start;
  return {{"root_law", std::move(root_law)}, {"certificate", std::move(cert)}};
}

}  // namespace collisionlab
