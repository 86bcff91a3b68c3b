#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "generators.hpp"
#include "mdep/errors.hpp"
#include "mdep/serialize.hpp"

using namespace mdep;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

LhvModel random_model(gen::Engine& e) {
    const SettingSpace s(2, 2, gen::simplex(e, 4));
    const std::size_t L = 1 + std::size_t(gen::uniform(e, 0, 9));
    std::vector<double> given;
    for (std::size_t z = 0; z < 4; ++z) {
        const auto col = gen::simplex(e, L, 0.3);
        given.insert(given.end(), col.begin(), col.end());
    }
    return LhvModel(s, L, given, gen::probabilities(e, 2 * L), gen::probabilities(e, 2 * L));
}

std::string expect_error(auto&& f) {
    try {
        f();
    } catch (const InvalidInput& e) {
        return e.what();
    }
    FAIL("expected InvalidInput");
    return {};
}

}  // namespace

TEST_CASE("models round-trip bit-exactly") {
    gen::Engine e(53);
    for (int n = 0; n < 200; ++n) {
        const auto m = random_model(e);
        const std::string text = model_to_json(m);
        const auto back = model_from_json(text);
        CHECK(back == m);
        CHECK(model_to_json(back) == text);
        for (std::size_t i = 0; i < m.lambda_given_settings().size(); ++i)
            CHECK(bit_equal(back.lambda_given_settings()[i], m.lambda_given_settings()[i]));
    }
}

TEST_CASE("numbers are written with 17 significant digits") {
    const LhvModel m(SettingSpace(1, 1), 2, {0.1, 0.9}, {1.0 / 3.0, 0.0}, {0.5, 1.0});
    const std::string text = model_to_json(m);
    CHECK(text.find("0.10000000000000001") != std::string::npos);
    CHECK(text.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("flat tables are accepted") {
    const auto m = model_from_json(R"({"lambda_count": 1, "settings": {"alice": 2, "bob": 2},
        "lambda_given_settings": [1, 1, 1, 1], "alice_response": [1, 0], "bob_response": [0.5, 0.5]})");
    CHECK(m.settings().marginal()[0] == 0.25);
    CHECK(m.p_alice_plus(1, 0) == 0.0);
}

TEST_CASE("malformed models name the offending field") {
    CHECK(expect_error([] { model_from_json("{"); }).find("malformed JSON") != std::string::npos);
    CHECK(expect_error([] { model_from_json(R"({"settings": {"alice": 2, "bob": 2}})"); }) ==
          "missing field 'model.lambda_count'");
    CHECK(expect_error([] {
              model_from_json(R"({"lambda_count": 1, "settings": {"alice": 2},
                  "lambda_given_settings": [1,1,1,1], "alice_response": [1,0], "bob_response": [1,0]})");
          }) == "missing field 'model.settings.bob'");
    CHECK(expect_error([] {
              model_from_json(R"({"lambda_count": 1, "settings": {"alice": 2, "bob": 2},
                  "lambda_given_settings": [1,1,"x",1], "alice_response": [1,0], "bob_response": [1,0]})");
          }).find("model.lambda_given_settings[2]") != std::string::npos);
    CHECK(expect_error([] {
              model_from_json(R"({"lambda_count": -1, "settings": {"alice": 2, "bob": 2},
                  "lambda_given_settings": [1,1,1,1], "alice_response": [1,0], "bob_response": [1,0]})");
          }).find("model.lambda_count") != std::string::npos);
    CHECK(expect_error([] {
              model_from_json(R"({"lambda_count": 1, "settings": {"alice": 2, "bob": 2, "marginal": [1, 0]},
                  "lambda_given_settings": [1,1,1,1], "alice_response": [1,0], "bob_response": [1,0]})");
          }).find("model.settings.marginal") != std::string::npos);
}

TEST_CASE("correlation tables round-trip") {
    const auto t = chsh_quantum(tsirelson_scenario());
    const auto back = correlations_from_json(correlations_to_json(t));
    CHECK(back.correlators == t.correlators);
    CHECK(back.joint_probabilities == t.joint_probabilities);
    const auto simple = correlations_from_json(R"({"alice": 2, "bob": 2, "correlators": [[1, 1], [1, -1]]})");
    CHECK(chsh_value(simple) == 4.0);
}

TEST_CASE("scenarios round-trip") {
    const auto s = tsirelson_scenario();
    const auto back = chsh_scenario_from_json(chsh_scenario_to_json(s));
    CHECK(chsh_value(chsh_quantum(back)) == chsh_value(chsh_quantum(s)));

    const auto k = pentagram_scenario();
    const auto kb = kcbs_scenario_from_json(kcbs_scenario_to_json(k));
    CHECK(kcbs_value(kb) == kcbs_value(k));
}

TEST_CASE("malformed scenarios name the offending field") {
    CHECK(expect_error([] { chsh_scenario_from_json(R"({"bob": [], "state": []})"); }) ==
          "missing field 'scenario.alice'");
    CHECK(expect_error([] {
              chsh_scenario_from_json(R"({"alice": [[[1,0],[0,1]]], "bob": [], "state": []})");
          }).find("scenario.alice") != std::string::npos);
    CHECK(expect_error([] {
              kcbs_scenario_from_json(R"({"vectors": [[1,0,0],[0,1,0],[0,0,1],[1,0,0]], "state": [1,0,0]})");
          }).find("scenario.vectors") != std::string::npos);
    CHECK(expect_error([] {
              kcbs_scenario_from_json(R"({"vectors": [[1,0,0],[0,1,0],[0,0,1],[1,0,0],[0,1]], "state": [1,0,0]})");
          }).find("scenario.vectors[4]") != std::string::npos);
    const std::string bad_state = expect_error([] {
        auto doc = nlohmann::json::parse(kcbs_scenario_to_json(pentagram_scenario()));
        doc["state"] = {{1, 0}, {1, 0}, {0, 0}};
        kcbs_scenario_from_json(doc.dump());
    });
    INFO(bad_state);
    CHECK(bad_state.find("scenario.state") != std::string::npos);
}

TEST_CASE("transcripts and reports serialize") {
    const auto t = run_teleportation(TeleportInput(0.6, 0.8), 2, 0);
    const std::string text = transcript_to_json(t);
    CHECK(text.find("\"correction_applied\": \"X\"") != std::string::npos);
    CHECK(text.find("\"outcome_index\": 2") != std::string::npos);
    CHECK(cmd_report_to_json(CmdReport{2, 1, 2}).find("\"raw_bits\": 2") != std::string::npos);
}

TEST_CASE("file helpers") {
    const auto dir = std::filesystem::temp_directory_path() / "mdep-serialize-test";
    const auto path = dir / "nested" / "x.json";
    write_text_file(path, "abc");
    CHECK(read_text_file(path) == "abc");
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(read_text_file(path), InvalidInput);
}
