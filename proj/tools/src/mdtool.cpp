// mdtool: batch front end for the mdep library.
//
// Exit codes: 0 success, 2 usage or input error, 3 internal invariant breach.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdep/errors.hpp"
#include "mdep/inequalities.hpp"
#include "mdep/infotheory.hpp"
#include "mdep/lhv.hpp"
#include "mdep/mdsearch.hpp"
#include "mdep/random.hpp"
#include "mdep/serialize.hpp"
#include "mdep/teleport.hpp"
#include "mdep_internal/codec.hpp"
#include "mdep_internal/json_emit.hpp"
#include "run_manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kConfigEnv = "MDEP_CONFIG";

void print(const json& j) { std::cout << mdep::detail::dump_json(j); }

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw mdep::InvalidInput(flag + ": '" + item + "' is not a number");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw mdep::InvalidInput(flag + ": '" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.empty()) throw mdep::InvalidInput(flag + " is empty");
    return out;
}

void require_one(std::initializer_list<bool> given, const std::string& what) {
    int n = 0;
    for (bool g : given) n += g ? 1 : 0;
    if (n != 1) throw mdep::InvalidInput("give exactly one of " + what);
}

// ------------------------------------------------------------------ teleport

struct TeleportArgs {
    double a_re = 0.0, a_im = 0.0, b_re = 0.0, b_im = 0.0;
    bool random = false;
    std::uint64_t seed = 1;
    std::size_t trials = 1;
    std::optional<int> force_outcome;
    std::string out;
};

mdep::TeleportInput haar_qubit(mdep::Rng& rng) {
    std::normal_distribution<double> g;
    double v[4];
    double norm = 0.0;
    for (double& x : v) {
        x = g(rng);
        norm += x * x;
    }
    norm = std::sqrt(norm);
    return mdep::TeleportInput({v[0] / norm, v[1] / norm}, {v[2] / norm, v[3] / norm});
}

int run_teleport(const TeleportArgs& args) {
    if (args.trials == 0) throw mdep::InvalidInput("--trials must be positive");
    std::optional<mdep::TeleportInput> fixed;
    if (!args.random) fixed.emplace(mdep::Complex{args.a_re, args.a_im}, mdep::Complex{args.b_re, args.b_im});

    json transcripts = json::array();
    std::vector<std::size_t> counts(4, 0);
    double min_fidelity = 1.0;
    for (std::size_t t = 0; t < args.trials; ++t) {
        mdep::Rng rng = mdep::make_rng(args.seed, t);
        const mdep::TeleportInput input = fixed ? *fixed : haar_qubit(rng);
        const auto tr = mdep::run_teleportation(input, args.force_outcome, rng());
        ++counts[static_cast<std::size_t>(tr.outcome_index)];
        min_fidelity = std::min(min_fidelity, tr.fidelity);
        transcripts.push_back(mdep::detail::encode(tr));
    }
    json freq = json::array();
    for (auto c : counts) freq.push_back(double(c) / double(args.trials));
    json summary{{"trials", args.trials},
                 {"outcome_counts", counts},
                 {"outcome_frequencies", freq},
                 {"min_fidelity", min_fidelity}};
    json doc{{"transcripts", std::move(transcripts)}, {"summary", summary}};

    if (args.out.empty()) {
        print(doc);
        return 0;
    }
    mdtool::RunManifest manifest("teleport");
    manifest.set("input", args.random ? json("random")
                                      : json::array({json::array({args.a_re, args.a_im}),
                                                     json::array({args.b_re, args.b_im})}));
    manifest.set("trials", args.trials);
    manifest.set("force_outcome", args.force_outcome ? json(*args.force_outcome) : json(nullptr));
    manifest.set("out", args.out);
    manifest.set_seed(args.seed);
    mdep::write_text_file(args.out, mdep::detail::dump_json(doc));
    manifest.add_output(args.out);
    manifest.write(args.out + ".manifest.json");
    print(summary);
    return 0;
}

// ---------------------------------------------------------------------- chsh

struct ChshArgs {
    std::string scenario;
    std::string model;
    bool deterministic_max = false;
    std::string out;
};

int run_chsh(const ChshArgs& args) {
    require_one({!args.scenario.empty(), !args.model.empty(), args.deterministic_max},
                "--scenario, --model, --deterministic-max");
    mdtool::RunManifest manifest("chsh");
    json doc;
    if (args.deterministic_max) {
        const mdep::SettingSpace s(2, 2);
        doc = json{{"chsh_value", mdep::lhv_chsh_max(s)},
                   {"strategies", mdep::deterministic_strategies(s).size()}};
        manifest.set("source", "deterministic-max");
    } else if (!args.scenario.empty()) {
        const auto sc = mdep::chsh_scenario_from_json(mdep::read_text_file(args.scenario));
        const auto table = mdep::chsh_quantum(sc);
        const auto report = mdep::measurement_choice_report(sc);
        doc = json{{"chsh_value", mdep::chsh_value(table)},
                   {"table", mdep::detail::encode(table)},
                   {"measurement_choice", {{"protocol", report.protocol},
                                           {"parties", report.parties},
                                           {"measurements_per_party", report.measurements_per_party},
                                           {"setting_choice", report.setting_choice}}}};
        manifest.set("scenario", args.scenario);
        manifest.add_input(args.scenario);
    } else {
        const auto model = mdep::model_from_json(mdep::read_text_file(args.model));
        const auto table = mdep::predict(model);
        doc = json{{"chsh_value", mdep::chsh_value(table)},
                   {"table", mdep::detail::encode(table)},
                   {"cmd", mdep::detail::encode(mdep::cmd(model))}};
        manifest.set("model", args.model);
        manifest.add_input(args.model);
    }
    print(doc);
    if (!args.out.empty()) {
        manifest.set("out", args.out);
        mdep::write_text_file(args.out, mdep::detail::dump_json(doc));
        manifest.add_output(args.out);
        manifest.write(args.out + ".manifest.json");
    }
    return 0;
}

// ------------------------------------------------------------------------ mi

struct MiArgs {
    std::string table;
    std::string model;
};

int run_mi(const MiArgs& args) {
    require_one({!args.table.empty(), !args.model.empty()}, "--table, --model");
    if (!args.model.empty()) {
        const auto model = mdep::model_from_json(mdep::read_text_file(args.model));
        const auto report = mdep::cmd(model);
        print(json{{"mutual_information_bits", report.raw_bits}, {"cmd", mdep::detail::encode(report)}});
        return 0;
    }
    auto p = parse_list(args.table, "--table");
    if (p.size() != 4) throw mdep::InvalidInput("--table needs exactly four entries p00,p01,p10,p11");
    double sum = 0.0;
    for (double v : p) {
        if (!std::isfinite(v) || v < 0.0) throw mdep::InvalidInput("--table entries must be nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw mdep::InvalidInput("--table sums to " + mdep::detail::format_real(sum) + ", not 1 within 1e-9");
    for (double& v : p) v /= sum;
    const mdep::JointDistribution j(2, 2, p);
    print(json{{"mutual_information_bits", mdep::mutual_information(j)}});
    return 0;
}

// ------------------------------------------------------------------ optimize

struct OptimizeArgs {
    std::optional<double> target_s;
    std::optional<double> budget;
    std::string curve;
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "mdtool-out";
};

json describe_json(const mdep::SearchConfig& cfg) {
    json out = json::object();
    for (const auto& [k, v] : mdep::describe(cfg)) out[k] = v;
    return out;
}

const char* status_name(mdep::SearchStatus s) {
    return s == mdep::SearchStatus::Converged ? "converged" : "budget_exhausted";
}

int run_optimize(const OptimizeArgs& args) {
    require_one({args.target_s.has_value(), args.budget.has_value(), !args.curve.empty()},
                "--target-s, --budget, --curve");
    mdtool::RunManifest manifest("optimize");

    std::string config_path = args.config;
    if (config_path.empty())
        if (const char* env = std::getenv(kConfigEnv); env && *env) config_path = env;
    mdep::SearchConfig cfg;
    if (!config_path.empty()) {
        cfg = mdep::load_search_config(config_path);
        manifest.add_input(config_path);
    }
    if (args.seed) cfg.seed = *args.seed;
    cfg.validate();

    const fs::path dir = args.out_dir;
    manifest.set("config_file", config_path.empty() ? json(nullptr) : json(config_path));
    manifest.set("search", describe_json(cfg));
    manifest.set("out_dir", args.out_dir);
    manifest.set_seed(cfg.seed);

    const auto write = [&](const std::string& name, const std::string& text) {
        mdep::write_text_file(dir / name, text);
        manifest.add_output(name);
    };

    json result;
    if (args.curve.empty()) {
        const bool min_mode = args.target_s.has_value();
        const auto r = min_mode ? mdep::min_cmd_for_chsh(*args.target_s, cfg)
                                : mdep::max_chsh_under_budget(*args.budget, cfg);
        manifest.set("mode", min_mode ? "min_cmd" : "max_chsh");
        manifest.set(min_mode ? "target_s" : "budget_bits", min_mode ? *args.target_s : *args.budget);
        write("model.json", mdep::model_to_json(r.model));
        result = json{{"mode", min_mode ? "min_cmd" : "max_chsh"},
                      {min_mode ? "target_s" : "budget_bits", min_mode ? *args.target_s : *args.budget},
                      {"status", status_name(r.status)},
                      {"chsh", r.chsh},
                      {"cmd", mdep::detail::encode(r.cmd)},
                      {"restart", r.restart},
                      {"model_file", "model.json"}};
        if (r.status != mdep::SearchStatus::Converged)
            std::cerr << "mdtool: warning: no restart met the target; reporting the best incumbent\n";
    } else {
        const auto budgets = parse_list(args.curve, "--curve");
        manifest.set("mode", "curve");
        manifest.set("budgets", budgets);
        const auto curve = mdep::tradeoff_curve(budgets, cfg);
        std::string csv = "budget_bits,best_chsh,raw_bits,model_file\n";
        json points = json::array();
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            const auto& p = curve.points[i];
            char name[32];
            std::snprintf(name, sizeof name, "model_%03zu.json", i);
            write(name, mdep::model_to_json(p.model));
            csv += mdep::detail::format_real(p.budget_bits) + "," + mdep::detail::format_real(p.best_chsh) + "," +
                   mdep::detail::format_real(p.cmd.raw_bits) + "," + name + "\n";
            points.push_back(json{{"budget_bits", p.budget_bits},
                                  {"best_chsh", p.best_chsh},
                                  {"cmd", mdep::detail::encode(p.cmd)},
                                  {"model_file", name}});
        }
        write("curve.csv", csv);
        result = json{{"mode", "curve"}, {"points", points}};
    }
    write("result.json", mdep::detail::dump_json(result));
    manifest.write(dir / "manifest.json");
    print(result);
    return 0;
}

// ---------------------------------------------------------------------- kcbs

struct KcbsArgs {
    bool classical_min = false;
    bool quantum_optimal = false;
    std::string scenario;
};

int run_kcbs(const KcbsArgs& args) {
    require_one({args.classical_min, args.quantum_optimal, !args.scenario.empty()},
                "--classical-min, --quantum-optimal, --scenario");
    if (args.classical_min) {
        print(json{{"kcbs_classical_min", mdep::kcbs_classical_min()}});
        return 0;
    }
    const auto sc = args.quantum_optimal ? mdep::pentagram_scenario()
                                         : mdep::kcbs_scenario_from_json(mdep::read_text_file(args.scenario));
    const double value = mdep::kcbs_value(sc);
    const double bound = mdep::kcbs_classical_min();
    print(json{{"kcbs_value", value}, {"classical_min", bound}, {"violates", value < bound}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measurement-dependence experiments: teleportation, CHSH, KCBS and C_MD search", "mdtool"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MDEP_VERSION);

    TeleportArgs tp;
    auto* teleport = app.add_subcommand("teleport", "Simulate teleportation of one qubit");
    auto* a_re = teleport->add_option("--a-re", tp.a_re, "Re of the |0> amplitude");
    auto* a_im = teleport->add_option("--a-im", tp.a_im, "Im of the |0> amplitude");
    auto* b_re = teleport->add_option("--b-re", tp.b_re, "Re of the |1> amplitude");
    auto* b_im = teleport->add_option("--b-im", tp.b_im, "Im of the |1> amplitude");
    teleport->add_flag("--random", tp.random, "Draw a Haar-random input per trial")
        ->excludes(a_re)
        ->excludes(a_im)
        ->excludes(b_re)
        ->excludes(b_im);
    teleport->add_option("--seed", tp.seed, "Base seed")->capture_default_str();
    teleport->add_option("--trials", tp.trials, "Number of runs")->capture_default_str();
    teleport->add_option("--force-outcome", tp.force_outcome, "Post-select Bell outcome 0..3")
        ->check(CLI::Range(0, 3));
    teleport->add_option("--out", tp.out, "Write transcripts and summary here");

    ChshArgs ch;
    auto* chsh = app.add_subcommand("chsh", "CHSH value of a quantum scenario or LHV model");
    chsh->add_option("--scenario", ch.scenario, "CHSH scenario JSON");
    chsh->add_option("--model", ch.model, "LHV model JSON");
    chsh->add_flag("--deterministic-max", ch.deterministic_max, "Best value over deterministic strategies");
    chsh->add_option("--out", ch.out, "Also write the result here");

    MiArgs mi;
    auto* mic = app.add_subcommand("mi", "Mutual information of a 2x2 table or C_MD of a model");
    mic->add_option("--table", mi.table, "p00,p01,p10,p11");
    mic->add_option("--model", mi.model, "LHV model JSON");

    OptimizeArgs op;
    auto* opt = app.add_subcommand("optimize", "Search LHV models trading C_MD against CHSH");
    opt->add_option("--target-s", op.target_s, "Minimize C_MD subject to S >= value");
    opt->add_option("--budget", op.budget, "Maximize S subject to C_MD <= bits");
    opt->add_option("--curve", op.curve, "Comma-separated ascending budgets");
    opt->add_option("--config", op.config, std::string("key=value search config (default: $") + kConfigEnv + ")");
    opt->add_option("--seed", op.seed, "Override the config seed");
    opt->add_option("--out-dir", op.out_dir, "Artifact directory")->capture_default_str();

    KcbsArgs kb;
    auto* kcbs = app.add_subcommand("kcbs", "KCBS pentagram inequality");
    kcbs->add_flag("--classical-min", kb.classical_min, "Noncontextual bound");
    kcbs->add_flag("--quantum-optimal", kb.quantum_optimal, "Pentagram vectors with the symmetric state");
    kcbs->add_option("--scenario", kb.scenario, "KCBS scenario JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*teleport) return run_teleport(tp);
        if (*chsh) return run_chsh(ch);
        if (*mic) return run_mi(mi);
        if (*opt) return run_optimize(op);
        if (*kcbs) return run_kcbs(kb);
        return 2;
    } catch (const mdep::InvalidInput& e) {
        std::cerr << "mdtool: error: " << e.what() << '\n';
        return 2;
    } catch (const mdep::InternalError& e) {
        std::cerr << "mdtool: internal error: " << e.what() << '\n';
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "mdtool: error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "mdtool: internal error: " << e.what() << '\n';
        return 3;
    }
}
