#pragma once

#include <vector>

#include <json.hpp>

#include "bootlex/store.hpp"

namespace bootlex {

nlohmann::json evidence_json(const std::vector<EvidenceRef>& ev);
nlohmann::json payload_json(const Payload& p);
nlohmann::json coverage_json(const CoverageReport& c);

}  // namespace bootlex
