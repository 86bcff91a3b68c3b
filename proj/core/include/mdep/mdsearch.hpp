#pragma once

// Search over finite LHV models for the tradeoff between measurement
// dependence (C_MD, bits) and CHSH violation.
//
// Each restart runs simulated annealing over p(lambda | a, b) and the response
// tables, then polishes its incumbent: responses are rounded to the
// deterministic values that do not lower the CHSH combination, duplicate
// hidden-variable values are merged, free slots are refilled with missing
// deterministic strategies, and p(lambda | a, b) is solved exactly for the
// fixed responses with a Blahut-Arimoto iteration (the inner problem is a
// rate-distortion problem with the CHSH combination as reward).
//
// Restarts run concurrently; each owns a generator derived from
// (seed, restart index) and the reduction is order-independent, so results
// are identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mdep/infotheory.hpp"
#include "mdep/lhv.hpp"

namespace mdep {

struct SearchConfig {
    std::size_t lambda_count = 8;
    std::size_t restarts = 32;
    std::size_t max_iterations = 20000;
    double initial_temperature = 0.05;
    double cooling_rate = 0.9995;          ///< temperature multiplier per iteration, in (0,1)
    double penalty_weight = 10.0;          ///< doubles on re-anneal while infeasible
    std::size_t max_reanneals = 4;
    double dirichlet_concentration = 200.0;
    double response_step = 0.15;
    std::uint64_t seed = 1;
    double tolerance_s = 1e-3;
    double tolerance_cmd = 1e-3;
    std::size_t threads = 0;               ///< 0 = hardware concurrency
    SettingSpace settings{};               ///< 2x2; marginal must be strictly positive

    /// Throws InvalidInput describing the first offending field.
    void validate() const;
};

/// Flat `key = value` text; `#` starts a comment; every key optional.
/// Unknown keys and malformed values raise InvalidInput.
SearchConfig parse_search_config(std::string_view text, SearchConfig base = {});
SearchConfig load_search_config(const std::filesystem::path& path, SearchConfig base = {});
/// All fields as (key, value) text pairs, defaults materialized, in file order.
std::vector<std::pair<std::string, std::string>> describe(const SearchConfig& cfg);

enum class SearchStatus { Converged, BudgetExhausted };

struct SearchResult {
    SearchStatus status = SearchStatus::BudgetExhausted;
    LhvModel model;
    double chsh = 0.0;   ///< chsh_value(predict(model))
    CmdReport cmd;       ///< cmd(model)
    std::size_t restart = 0;
};

/// Smallest C_MD found among models with chsh >= target_s - tolerance_s.
/// Requires 2 < target_s <= 4. If no restart reaches the target the best
/// incumbent is returned with status BudgetExhausted.
SearchResult min_cmd_for_chsh(double target_s, const SearchConfig& cfg);

/// Largest CHSH value found among models with raw_bits <= budget_bits
/// (+ tolerance_cmd as verification slack). Requires budget_bits >= 0.
SearchResult max_chsh_under_budget(double budget_bits, const SearchConfig& cfg);

struct TradeoffPoint {
    double budget_bits = 0.0;
    double best_chsh = 0.0;
    LhvModel model;
    CmdReport cmd;
};

struct TradeoffCurve {
    std::vector<TradeoffPoint> points;
};

/// max_chsh_under_budget per budget, then the monotone envelope (a model
/// feasible at a smaller budget is feasible at every larger one).
/// Budgets must be sorted ascending and nonnegative.
TradeoffCurve tradeoff_curve(const std::vector<double>& budgets, const SearchConfig& cfg);

/// min_cmd_for_chsh per target followed by the envelope in the other
/// direction: a model reaching a higher target also reaches every lower one.
std::vector<SearchResult> min_cmd_curve(const std::vector<double>& targets, const SearchConfig& cfg);

}  // namespace mdep
