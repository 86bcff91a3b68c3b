#include "mdep/serialize.hpp"

#include <fstream>
#include <sstream>

#include "mdep/errors.hpp"
#include "mdep_internal/codec.hpp"
#include "mdep_internal/json_emit.hpp"

namespace mdep {
namespace detail {

using nlohmann::json;

namespace {

const json& field(const json& j, const std::string& name, const std::string& where) {
    if (!j.is_object()) throw InvalidInput(where + ": expected an object");
    const auto it = j.find(name);
    if (it == j.end()) throw InvalidInput("missing field '" + where + "." + name + "'");
    return *it;
}

double real(const json& j, const std::string& path) {
    if (!j.is_number()) throw InvalidInput("field '" + path + "' must be a number");
    return j.get<double>();
}

std::size_t count(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw InvalidInput("field '" + path + "' must be a nonnegative integer");
    return j.get<std::size_t>();
}

const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) throw InvalidInput("field '" + path + "' must be an array");
    return j;
}

// Accepts a flat list or a list of rows; returns the row-major flattening.
std::vector<double> table(const json& j, const std::string& path) {
    std::vector<double> out;
    std::size_t i = 0;
    for (const auto& item : array(j, path)) {
        const std::string p = path + "[" + std::to_string(i++) + "]";
        if (item.is_array()) {
            std::size_t k = 0;
            for (const auto& v : item) out.push_back(real(v, p + "[" + std::to_string(k++) + "]"));
        } else {
            out.push_back(real(item, p));
        }
    }
    return out;
}

json rows(std::span<const double> flat, std::size_t row_count) {
    json out = json::array();
    const std::size_t width = row_count ? flat.size() / row_count : 0;
    for (std::size_t r = 0; r < row_count; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < width; ++c) row.push_back(flat[r * width + c]);
        out.push_back(std::move(row));
    }
    return out;
}

json complex_pair(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_value(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw InvalidInput("field '" + path + "' must be a [re, im] pair");
    return {real(j[0], path + "[0]"), real(j[1], path + "[1]")};
}

std::vector<Complex> amplitudes(const json& j, const std::string& path) {
    std::vector<Complex> out;
    std::size_t i = 0;
    for (const auto& v : array(j, path)) {
        out.push_back(complex_value(v, path + "[" + std::to_string(i) + "]"));
        ++i;
    }
    return out;
}

StateVector decode_state(const json& j, const std::string& path) {
    try {
        return StateVector(amplitudes(j, path));
    } catch (const InvalidInput& e) {
        throw InvalidInput("field '" + path + "': " + e.what());
    }
}

json encode_matrix(const OperatorMatrix& m) {
    json out = json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(complex_pair(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

OperatorMatrix decode_observable(const json& j, const std::string& path) {
    const auto& rows_json = array(j, path);
    const std::size_t n = rows_json.size();
    std::vector<Complex> e;
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = amplitudes(rows_json[r], path + "[" + std::to_string(r) + "]");
        if (row.size() != n) throw InvalidInput("field '" + path + "' must be a square matrix");
        e.insert(e.end(), row.begin(), row.end());
    }
    try {
        return OperatorMatrix(n, std::move(e), true);
    } catch (const InvalidInput& ex) {
        throw InvalidInput("field '" + path + "': " + ex.what());
    }
}

template <typename F>
auto wrap(const std::string& what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InvalidInput& e) {
        const std::string msg = e.what();
        if (msg.rfind("field '", 0) == 0 || msg.rfind("missing field", 0) == 0) throw;
        throw InvalidInput(what + ": " + msg);
    }
}

}  // namespace

json parse(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

json encode(const LhvModel& m) {
    const auto& s = m.settings();
    json settings = {{"alice", s.alice_count()}, {"bob", s.bob_count()},
                     {"marginal", std::vector<double>(s.marginal().begin(), s.marginal().end())}};
    return json{{"lambda_count", m.lambda_count()},
                {"settings", settings},
                {"lambda_given_settings", rows(m.lambda_given_settings(), s.joint_count())},
                {"alice_response", rows(m.alice_response(), s.alice_count())},
                {"bob_response", rows(m.bob_response(), s.bob_count())}};
}

LhvModel decode_model(const json& j) {
    const std::size_t lambdas = count(field(j, "lambda_count", "model"), "model.lambda_count");
    const json& sj = field(j, "settings", "model");
    const std::size_t alice = count(field(sj, "alice", "model.settings"), "model.settings.alice");
    const std::size_t bob = count(field(sj, "bob", "model.settings"), "model.settings.bob");
    SettingSpace settings = wrap("field 'model.settings.marginal'", [&] {
        return sj.contains("marginal")
                   ? SettingSpace(alice, bob, table(sj["marginal"], "model.settings.marginal"))
                   : SettingSpace(alice, bob);
    });
    auto given = table(field(j, "lambda_given_settings", "model"), "model.lambda_given_settings");
    auto ar = table(field(j, "alice_response", "model"), "model.alice_response");
    auto br = table(field(j, "bob_response", "model"), "model.bob_response");
    return wrap("model", [&] { return LhvModel(settings, lambdas, std::move(given), std::move(ar), std::move(br)); });
}

json encode(const CorrelationTable& t) {
    json probs = json::array();
    for (const auto& p : t.joint_probabilities) probs.push_back(json::array({p[0], p[1], p[2], p[3]}));
    return json{{"alice", t.alice_count},
                {"bob", t.bob_count},
                {"correlators", rows(t.correlators, t.alice_count)},
                {"joint_probabilities", probs}};
}

CorrelationTable decode_correlations(const json& j) {
    const std::size_t alice = count(field(j, "alice", "table"), "table.alice");
    const std::size_t bob = count(field(j, "bob", "table"), "table.bob");
    auto corr = table(field(j, "correlators", "table"), "table.correlators");
    if (!j.contains("joint_probabilities"))
        return wrap("table", [&] { return CorrelationTable::from_correlators(alice, bob, std::move(corr)); });
    auto flat = table(j["joint_probabilities"], "table.joint_probabilities");
    if (flat.size() % 4 != 0) throw InvalidInput("field 'table.joint_probabilities' must hold 4 entries per setting");
    std::vector<OutcomeTable> probs;
    for (std::size_t i = 0; i < flat.size(); i += 4) probs.push_back({flat[i], flat[i + 1], flat[i + 2], flat[i + 3]});
    return wrap("table", [&] { return CorrelationTable(alice, bob, std::move(corr), std::move(probs)); });
}

json encode(const CmdReport& r) {
    return json{{"raw_bits", r.raw_bits},
                {"normalized", r.normalized},
                {"setting_entropy_bits", r.setting_entropy_bits}};
}

json encode(const StateVector& s) {
    json out = json::array();
    for (const auto& a : s.amplitudes()) out.push_back(complex_pair(a));
    return out;
}

json encode(const TeleportTranscript& t) {
    return json{{"outcome_index", t.outcome_index},
                {"outcome_probability", t.outcome_probability},
                {"correction_applied", std::string(label(t.correction_applied))},
                {"bob_final", encode(t.bob_final)},
                {"fidelity", t.fidelity}};
}

json encode(const ChshScenario& s) {
    return json{{"alice", json::array({encode_matrix(s.alice()[0]), encode_matrix(s.alice()[1])})},
                {"bob", json::array({encode_matrix(s.bob()[0]), encode_matrix(s.bob()[1])})},
                {"state", encode(s.state())}};
}

ChshScenario decode_chsh_scenario(const json& j) {
    const auto& a = array(field(j, "alice", "scenario"), "scenario.alice");
    const auto& b = array(field(j, "bob", "scenario"), "scenario.bob");
    if (a.size() != 2) throw InvalidInput("field 'scenario.alice' must list exactly two observables");
    if (b.size() != 2) throw InvalidInput("field 'scenario.bob' must list exactly two observables");
    std::array<OperatorMatrix, 2> alice{decode_observable(a[0], "scenario.alice[0]"),
                                        decode_observable(a[1], "scenario.alice[1]")};
    std::array<OperatorMatrix, 2> bob{decode_observable(b[0], "scenario.bob[0]"),
                                      decode_observable(b[1], "scenario.bob[1]")};
    StateVector state = decode_state(field(j, "state", "scenario"), "scenario.state");
    return wrap("scenario", [&] { return ChshScenario(alice, bob, state); });
}

json encode(const KcbsScenario& s) {
    json vecs = json::array();
    for (const auto& v : s.vectors()) vecs.push_back(json::array({v[0], v[1], v[2]}));
    return json{{"vectors", vecs}, {"state", encode(s.state())}};
}

KcbsScenario decode_kcbs_scenario(const json& j) {
    const auto& vj = array(field(j, "vectors", "scenario"), "scenario.vectors");
    if (vj.size() != 5) throw InvalidInput("field 'scenario.vectors' must list exactly five vectors");
    std::array<Vec3, 5> vecs{};
    for (std::size_t i = 0; i < 5; ++i) {
        const std::string p = "scenario.vectors[" + std::to_string(i) + "]";
        const auto& v = array(vj[i], p);
        if (v.size() != 3) throw InvalidInput("field '" + p + "' must be a real triple");
        for (std::size_t k = 0; k < 3; ++k) vecs[i][k] = real(v[k], p + "[" + std::to_string(k) + "]");
    }
    StateVector state = decode_state(field(j, "state", "scenario"), "scenario.state");
    return wrap("scenario", [&] { return KcbsScenario(vecs, state); });
}

}  // namespace detail

std::string model_to_json(const LhvModel& model) { return detail::dump_json(detail::encode(model)); }
LhvModel model_from_json(std::string_view text) { return detail::decode_model(detail::parse(text)); }

std::string correlations_to_json(const CorrelationTable& table) { return detail::dump_json(detail::encode(table)); }
CorrelationTable correlations_from_json(std::string_view text) {
    return detail::decode_correlations(detail::parse(text));
}

std::string cmd_report_to_json(const CmdReport& report) { return detail::dump_json(detail::encode(report)); }
std::string transcript_to_json(const TeleportTranscript& t) { return detail::dump_json(detail::encode(t)); }

std::string chsh_scenario_to_json(const ChshScenario& s) { return detail::dump_json(detail::encode(s)); }
ChshScenario chsh_scenario_from_json(std::string_view text) {
    return detail::decode_chsh_scenario(detail::parse(text));
}

std::string kcbs_scenario_to_json(const KcbsScenario& s) { return detail::dump_json(detail::encode(s)); }
KcbsScenario kcbs_scenario_from_json(std::string_view text) {
    return detail::decode_kcbs_scenario(detail::parse(text));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + path.string());
    out << text;
}

}  // namespace mdep
