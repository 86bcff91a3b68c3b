#include <doctest.h>

#include <cmath>

#include "mdep/errors.hpp"
#include "mdep/inequalities.hpp"
#include "mdep/mdsearch.hpp"
#include "oracles.hpp"

using namespace mdep;

namespace {

SearchConfig fast_config() {
    SearchConfig c;
    c.restarts = 4;
    c.max_iterations = 4000;
    return c;
}

double oracle_cmd(const LhvModel& m) {
    const auto& s = m.settings();
    std::vector<double> p;
    for (std::size_t l = 0; l < m.lambda_count(); ++l)
        for (std::size_t z = 0; z < s.joint_count(); ++z) p.push_back(s.marginal()[z] * m.p_lambda(z, l));
    return oracle::mutual_information(m.lambda_count(), s.joint_count(), p);
}

void check_consistent(const SearchResult& r) {
    CHECK(r.chsh == doctest::Approx(chsh_value(predict(r.model))).epsilon(1e-12));
    CHECK(std::abs(r.cmd.raw_bits - cmd(r.model).raw_bits) < 1e-12);
    CHECK(std::abs(r.cmd.raw_bits - oracle_cmd(r.model)) < 1e-9);
}

}  // namespace

TEST_CASE("config parsing") {
    const auto c = parse_search_config(
        "# comment\n"
        "restarts = 3\n"
        "  seed=99   # trailing\n"
        "\n"
        "setting_marginal = 0.1, 0.2, 0.3, 0.4\n");
    CHECK(c.restarts == 3);
    CHECK(c.seed == 99);
    CHECK(c.settings.marginal()[3] == 0.4);
    CHECK(c.lambda_count == SearchConfig{}.lambda_count);

    CHECK_THROWS_AS(parse_search_config("bogus = 1\n"), InvalidInput);
    CHECK_THROWS_AS(parse_search_config("restarts = many\n"), InvalidInput);
    CHECK_THROWS_AS(parse_search_config("restarts\n"), InvalidInput);
    CHECK_THROWS_AS(parse_search_config("restarts = -1\n"), InvalidInput);
    CHECK_THROWS_AS(parse_search_config("setting_marginal = 0.5, 0.5\n"), InvalidInput);
    CHECK_THROWS_AS(load_search_config("/nonexistent/mdep.cfg"), InvalidInput);
}

TEST_CASE("describe round-trips through the parser") {
    SearchConfig c = fast_config();
    c.cooling_rate = 0.123456789012345678;
    c.settings = SettingSpace(2, 2, {0.1, 0.2, 0.3, 0.4});
    std::string text;
    for (const auto& [k, v] : describe(c)) text += k + " = " + v + "\n";
    const auto back = parse_search_config(text);
    CHECK(back.cooling_rate == c.cooling_rate);
    CHECK(back.restarts == c.restarts);
    CHECK(back.settings == c.settings);
    std::string again;
    for (const auto& [k, v] : describe(back)) again += k + " = " + v + "\n";
    CHECK(again == text);
}

TEST_CASE("config validation") {
    SearchConfig c;
    c.cooling_rate = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = SearchConfig{};
    c.restarts = 0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = SearchConfig{};
    c.lambda_count = 100;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = SearchConfig{};
    c.settings = SettingSpace(2, 2, {0.5, 0.5, 0.0, 0.0});
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = SearchConfig{};
    c.settings = SettingSpace(3, 2);
    CHECK_THROWS_AS(c.validate(), InvalidInput);
}

TEST_CASE("targets outside (2, 4] are rejected") {
    CHECK_THROWS_AS(min_cmd_for_chsh(2.0, fast_config()), InvalidInput);
    CHECK_THROWS_AS(min_cmd_for_chsh(1.5, fast_config()), InvalidInput);
    CHECK_THROWS_AS(min_cmd_for_chsh(4.5, fast_config()), InvalidInput);
    CHECK_THROWS_AS(max_chsh_under_budget(-0.1, fast_config()), InvalidInput);
    CHECK_THROWS_AS(tradeoff_curve({1.0, 0.5}, fast_config()), InvalidInput);
}

TEST_CASE("barely violating needs almost no dependence") {
    const auto r = min_cmd_for_chsh(2.0 + 1e-6, fast_config());
    CHECK(r.status == SearchStatus::Converged);
    CHECK(r.chsh >= 2.0 + 1e-6 - 1e-3);
    CHECK(r.cmd.raw_bits <= 0.01);
    check_consistent(r);
}

TEST_CASE("algebraic maximum stays below the setting entropy") {
    const auto r = min_cmd_for_chsh(4.0, fast_config());
    CHECK(r.status == SearchStatus::Converged);
    CHECK(r.chsh >= 4.0 - 1e-3);
    CHECK(r.cmd.raw_bits <= 2.0 + 1e-9);
    check_consistent(r);
}

TEST_CASE("budget endpoints") {
    const auto zero = max_chsh_under_budget(0.0, fast_config());
    CHECK(std::abs(zero.chsh - lhv_chsh_max(SettingSpace(2, 2))) <= 1e-3);
    CHECK(zero.cmd.raw_bits <= 1e-12);
    check_consistent(zero);

    const auto full = max_chsh_under_budget(2.0, fast_config());
    CHECK(std::abs(full.chsh - 4.0) <= 1e-3);
    check_consistent(full);
}

TEST_CASE("a small budget already beats the quantum bound closely") {
    const auto r = max_chsh_under_budget(0.0663, fast_config());
    CHECK(r.chsh >= 2.0 * std::sqrt(2.0) - 0.02);
    CHECK(r.cmd.raw_bits <= 0.0663 + 1e-12);
    check_consistent(r);
}

TEST_CASE("tradeoff curves") {
    const auto single = tradeoff_curve({0.0}, fast_config());
    REQUIRE(single.points.size() == 1);
    CHECK(single.points[0].budget_bits == 0.0);
    CHECK(std::abs(single.points[0].best_chsh - 2.0) <= 1e-3);

    const auto c = tradeoff_curve({0.0, 0.01, 0.1, 2.0}, fast_config());
    REQUIRE(c.points.size() == 4);
    CHECK(std::abs(c.points.front().best_chsh - 2.0) <= 1e-3);
    CHECK(std::abs(c.points.back().best_chsh - 4.0) <= 1e-3);
    for (std::size_t i = 1; i < c.points.size(); ++i) CHECK(c.points[i].best_chsh >= c.points[i - 1].best_chsh);
    for (const auto& p : c.points) {
        CHECK(p.cmd.raw_bits <= p.budget_bits + 1e-12);
        CHECK(chsh_value(predict(p.model)) == doctest::Approx(p.best_chsh).epsilon(1e-12));
    }
}

TEST_CASE("min-cmd curves are monotone") {
    const auto rs = min_cmd_curve({2.2, 2.6, 3.0}, fast_config());
    REQUIRE(rs.size() == 3);
    for (std::size_t i = 1; i < rs.size(); ++i) CHECK(rs[i].cmd.raw_bits >= rs[i - 1].cmd.raw_bits);
}

TEST_CASE("results do not depend on the thread count") {
    SearchConfig one = fast_config();
    one.threads = 1;
    SearchConfig many = fast_config();
    many.threads = 3;
    const auto a = min_cmd_for_chsh(2.5, one);
    const auto b = min_cmd_for_chsh(2.5, many);
    CHECK(a.model == b.model);
    CHECK(a.restart == b.restart);
    CHECK(a.cmd.raw_bits == b.cmd.raw_bits);
}

TEST_CASE("different seeds still satisfy the constraint") {
    for (std::uint64_t seed : {2u, 3u}) {
        SearchConfig c = fast_config();
        c.seed = seed;
        const auto r = min_cmd_for_chsh(2.4, c);
        CHECK(r.chsh >= 2.4 - 1e-3);
        check_consistent(r);
    }
}

TEST_CASE("non-uniform setting marginals") {
    SearchConfig c = fast_config();
    c.settings = SettingSpace(2, 2, {0.4, 0.3, 0.2, 0.1});
    const auto r = min_cmd_for_chsh(3.0, c);
    CHECK(r.chsh >= 3.0 - 1e-3);
    CHECK(r.cmd.raw_bits <= r.cmd.setting_entropy_bits + 1e-12);
    check_consistent(r);
    const auto z = max_chsh_under_budget(0.0, c);
    CHECK(z.chsh <= 2.0 + 1e-3);
}
