#pragma once

#include <string>

#include <json.hpp>

#include "vlab/certify.hpp"

namespace vlab {

using Json = nlohmann::ordered_json;

/// Deterministic JSON forms: keys in fixed order, numbers via the shortest
/// round-trip representation, no timestamps.
Json to_json(const CertificateReport& rep);
Json to_json(const FlowLine& line);

std::string dump_report(const CertificateReport& rep);
void write_report(const std::string& path, const Json& j);
Json read_json(const std::string& path);

}  // namespace vlab
