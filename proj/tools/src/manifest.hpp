#pragma once

#include <string>

#include <json.hpp>

#include "geolangevin/analytic.hpp"
#include "geolangevin/config.hpp"
#include "geolangevin/ensemble.hpp"
#include "geolangevin/spectral.hpp"
#include "geolangevin/validation.hpp"

namespace geolangevin::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Envelope shared by every command: schema version, tool version, command, seed and the full
/// flat config. Contains nothing that depends on the wall clock or the thread count.
Json manifest(const RunConfig& config, const std::string& command, Json results);

/// Recovers the RunConfig stored in a manifest.
RunConfig config_from_manifest(const Json& manifest);

Json to_json(const Predictions& p, const AdiabaticityReport& a);
Json to_json(const ValidationReport& report);
Json to_json(const ShiftEnsemble& e);
Json to_json(const ScalingTable& t);

}  // namespace geolangevin::cli
