#pragma once

// JSON file formats. Writers print every real with 17 significant digits, so
// a write/read round trip is bit-exact. Readers raise InvalidInput naming the
// offending field.
//
//   model:         {"lambda_count", "settings": {"alice","bob","marginal"},
//                   "lambda_given_settings": rows per joint setting,
//                   "alice_response": rows per Alice setting, "bob_response": ...}
//   correlations:  {"alice","bob","correlators": [[E..]], "joint_probabilities": [[p++,p+-,p-+,p--]..]}
//   chsh scenario: {"alice": [M,M], "bob": [M,M], "state": [[re,im]..]}, M a matrix of [re,im]
//   kcbs scenario: {"vectors": [[x,y,z] x5], "state": [[re,im] x3]}

#include <filesystem>
#include <string>
#include <string_view>

#include "mdep/inequalities.hpp"
#include "mdep/infotheory.hpp"
#include "mdep/lhv.hpp"
#include "mdep/teleport.hpp"

namespace mdep {

std::string model_to_json(const LhvModel& model);
LhvModel model_from_json(std::string_view text);

std::string correlations_to_json(const CorrelationTable& table);
CorrelationTable correlations_from_json(std::string_view text);

std::string cmd_report_to_json(const CmdReport& report);
std::string transcript_to_json(const TeleportTranscript& transcript);

std::string chsh_scenario_to_json(const ChshScenario& scenario);
ChshScenario chsh_scenario_from_json(std::string_view text);

std::string kcbs_scenario_to_json(const KcbsScenario& scenario);
KcbsScenario kcbs_scenario_from_json(std::string_view text);

/// Whole-file helpers; read_text_file raises InvalidInput if unreadable.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace mdep
