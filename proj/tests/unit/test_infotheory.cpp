#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "mdep/errors.hpp"
#include "mdep/infotheory.hpp"
#include "oracles.hpp"

using namespace mdep;

TEST_CASE("coin tables") {
    CHECK(mutual_information(JointDistribution(2, 2, {0.25, 0.25, 0.25, 0.25})) == 0.0);
    CHECK(mutual_information(JointDistribution(2, 2, {0.5, 0, 0, 0.5})) == doctest::Approx(1.0).epsilon(1e-12));
    const JointDistribution partial(2, 2, {0.3252, 0.1748, 0.1748, 0.3252});
    CHECK(std::abs(mutual_information(partial) - 0.0663) < 5e-4);
    CHECK(std::abs(mutual_information(partial) - oracle::mutual_information(2, 2, {0.3252, 0.1748, 0.1748, 0.3252})) <
          1e-12);
}

TEST_CASE("conditional entropy") {
    CHECK(conditional_entropy(JointDistribution(2, 2, {0.5, 0, 0, 0.5})) == 0.0);
    CHECK(conditional_entropy(JointDistribution(2, 2, {0.25, 0.25, 0.25, 0.25})) == doctest::Approx(1.0));
    const JointDistribution partial(2, 2, {0.3252, 0.1748, 0.1748, 0.3252});
    const double h_col = oracle::entropy_bits(partial.col_marginal());
    const double mi = oracle::mutual_information(2, 2, {0.3252, 0.1748, 0.1748, 0.3252});
    CHECK(std::abs(conditional_entropy(partial) - (h_col - mi)) < 1e-12);
    CHECK(std::abs(conditional_entropy(partial) - 0.9337) < 5e-4);
}

TEST_CASE("joint distributions are validated") {
    CHECK_THROWS_AS(JointDistribution(2, 2, {0.5, 0.5, 0.5}), InvalidInput);
    CHECK_THROWS_AS(JointDistribution(2, 2, {0.5, 0.5, 0.5, -0.5}), InvalidInput);
    CHECK_THROWS_AS(JointDistribution(2, 2, {0.25, 0.25, 0.25, 0.26}), InvalidInput);
    CHECK_THROWS_AS(JointDistribution(0, 2, {}), InvalidInput);
    CHECK_THROWS_AS(JointDistribution(1, 2, {NAN, 1.0}), InvalidInput);
}

TEST_CASE("entropy") {
    CHECK(entropy(std::vector<double>{1.0}) == 0.0);
    CHECK(entropy(std::vector<double>{0.5, 0.5}) == 1.0);
    CHECK(entropy(std::vector<double>(8, 0.125)) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(entropy(std::vector<double>{0.0, 1.0, 0.0}) == 0.0);
}

TEST_CASE("mutual information agrees with the entropy identity on random tables") {
    gen::Engine e(41);
    for (int n = 0; n < 500; ++n) {
        const std::size_t r = 1 + n % 5, c = 1 + (n / 5) % 6;
        const auto p = gen::simplex(e, r * c, 0.25);
        const JointDistribution j(r, c, p);
        const double mi = mutual_information(j);
        CHECK(mi >= 0.0);
        CHECK(std::abs(mi - oracle::mutual_information(r, c, p)) < 1e-12);
        CHECK(std::abs(mi - mutual_information(j.transposed())) < 1e-12);
        CHECK(mi <= std::min(std::log2(double(r)), std::log2(double(c))) + 1e-12);
        // I = H(col) - H(col | row).
        CHECK(std::abs(mi - (entropy(j.col_marginal()) - conditional_entropy(j))) < 1e-12);
    }
}

TEST_CASE("product tables carry no information") {
    gen::Engine e(43);
    for (int n = 0; n < 200; ++n) {
        const auto a = gen::simplex(e, 3, 0.2), b = gen::simplex(e, 4, 0.2);
        std::vector<double> p;
        for (double x : a)
            for (double y : b) p.push_back(x * y);
        CHECK(mutual_information(JointDistribution(3, 4, p)) < 1e-12);
    }
}

TEST_CASE("cmd of a model") {
    SUBCASE("measurement-independent model") {
        const LhvModel m(SettingSpace(2, 2), 3, {0.2, 0.3, 0.5, 0.2, 0.3, 0.5, 0.2, 0.3, 0.5, 0.2, 0.3, 0.5},
                         {1, 0, 0.5, 0, 1, 0.5}, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
        const auto r = cmd(m);
        CHECK(r.raw_bits == 0.0);
        CHECK(r.normalized == 0.0);
        CHECK(r.setting_entropy_bits == doctest::Approx(2.0));
    }
    SUBCASE("two lambdas split across two settings reduce to the coin table") {
        const LhvModel m(SettingSpace(1, 2), 2, {0.6504, 0.3496, 0.3496, 0.6504}, {1, 0}, {1, 0, 1, 0});
        const auto r = cmd(m);
        const double want = oracle::mutual_information(2, 2, {0.3252, 0.1748, 0.1748, 0.3252});
        CHECK(std::abs(r.raw_bits - want) < 1e-12);
        CHECK(std::abs(r.raw_bits - 0.0663) < 5e-4);
        CHECK(r.setting_entropy_bits == 1.0);
    }
    SUBCASE("degenerate marginal") {
        const LhvModel m(SettingSpace(2, 2, {1, 0, 0, 0}), 2, {0.5, 0.5, 1, 0, 0, 1, 0.5, 0.5}, {1, 0, 1, 0},
                         {1, 0, 1, 0});
        const auto r = cmd(m);
        CHECK(r.raw_bits == 0.0);
        CHECK(r.setting_entropy_bits == 0.0);
        CHECK(r.normalized == 0.0);
    }
    SUBCASE("lambda-setting table") {
        const LhvModel m(SettingSpace(1, 2, {0.25, 0.75}), 2, {1, 0, 0.5, 0.5}, {1, 0}, {1, 0, 1, 0});
        const auto j = lambda_setting_distribution(m);
        CHECK(j.rows() == 2);
        CHECK(j.cols() == 2);
        CHECK(j(0, 0) == 0.25);
        CHECK(j(1, 0) == 0.0);
        CHECK(j(0, 1) == 0.375);
        CHECK(j(1, 1) == 0.375);
    }
}
