#pragma once

#include <string>

#include "kanood/detector.hpp"
#include "kanood/network.hpp"

#include <json.hpp>

namespace kanood {

// Versioned JSON forms. Doubles survive dump/parse round trips bit-exactly
// (shortest round-trip serialization), and ordered_json keeps the dump
// deterministic, so identical fits produce byte-identical files.
using Json = nlohmann::ordered_json;

Json network_to_json(const KanNetwork& net);
KanNetwork network_from_json(const Json& j);

Json detector_config_to_json(const DetectorConfig& cfg);
DetectorConfig detector_config_from_json(const Json& j);

// User-facing variant: missing keys take defaults, unknown keys are rejected.
DetectorConfig detector_config_from_user_json(const Json& j);

Json bundle_to_json(const PartitionedDetector& pdet);
PartitionedDetector bundle_from_json(const Json& j);

void save_bundle(const PartitionedDetector& pdet, const std::string& path);
PartitionedDetector load_bundle(const std::string& path);

// Writes via a temp file + rename, so a failed write never leaves a partial
// file behind.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace kanood
