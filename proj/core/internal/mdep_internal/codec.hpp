#pragma once

// nlohmann::json views of the public types, for tools that embed them in
// larger documents.

#include <json.hpp>

#include "mdep/inequalities.hpp"
#include "mdep/infotheory.hpp"
#include "mdep/lhv.hpp"
#include "mdep/teleport.hpp"

namespace mdep::detail {

nlohmann::json encode(const LhvModel& model);
nlohmann::json encode(const CorrelationTable& table);
nlohmann::json encode(const CmdReport& report);
nlohmann::json encode(const TeleportTranscript& transcript);
nlohmann::json encode(const StateVector& state);
nlohmann::json encode(const ChshScenario& scenario);
nlohmann::json encode(const KcbsScenario& scenario);

LhvModel decode_model(const nlohmann::json& j);
CorrelationTable decode_correlations(const nlohmann::json& j);
ChshScenario decode_chsh_scenario(const nlohmann::json& j);
KcbsScenario decode_kcbs_scenario(const nlohmann::json& j);

/// Parses text, mapping syntax errors to InvalidInput.
nlohmann::json parse(std::string_view text);

}  // namespace mdep::detail
