#pragma once

// Finite local hidden-variable models.
//
// A model is factorizable by construction: the joint outcome probability for
// settings (a, b) and hidden variable l is always computed as
//   p(x | a, l) * p(y | b, l),
// which builds in outcome independence and parameter independence. The
// distribution p(l | a, b) is free per joint setting, so measurement
// independence may fail.
//
// Joint settings are indexed z = a * bob_count + b. Outcomes are +1/-1 and
// joint-outcome tables are stored in the order (+,+), (+,-), (-,+), (-,-).

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace mdep {

inline constexpr std::size_t kMaxLambdaCount = 64;

class SettingSpace {
public:
    /// Uniform marginal over alice_count * bob_count joint settings.
    SettingSpace(std::size_t alice_count = 2, std::size_t bob_count = 2);
    /// Explicit marginal; must be nonnegative and sum to 1 within kTol.arithmetic.
    SettingSpace(std::size_t alice_count, std::size_t bob_count, std::vector<double> marginal);

    std::size_t alice_count() const { return alice_; }
    std::size_t bob_count() const { return bob_; }
    std::size_t joint_count() const { return alice_ * bob_; }
    std::size_t index(std::size_t a, std::size_t b) const { return a * bob_ + b; }
    std::size_t alice_of(std::size_t z) const { return z / bob_; }
    std::size_t bob_of(std::size_t z) const { return z % bob_; }
    std::span<const double> marginal() const { return marginal_; }

    friend bool operator==(const SettingSpace&, const SettingSpace&) = default;

private:
    std::size_t alice_;
    std::size_t bob_;
    std::vector<double> marginal_;
};

using OutcomeTable = std::array<double, 4>;

struct CorrelationTable {
    std::size_t alice_count = 0;
    std::size_t bob_count = 0;
    std::vector<double> correlators;                 ///< E(a,b) at index a*bob_count+b
    std::vector<OutcomeTable> joint_probabilities;   ///< p(x,y|a,b), same indexing

    /// Validates the table: distributions per setting, E consistent with p.
    CorrelationTable(std::size_t alice_count, std::size_t bob_count, std::vector<double> correlators,
                     std::vector<OutcomeTable> joint_probabilities);

    /// Table with unbiased marginals, p(x,y|a,b) = (1 + x*y*E(a,b)) / 4.
    static CorrelationTable from_correlators(std::size_t alice_count, std::size_t bob_count,
                                             std::vector<double> correlators);

    double E(std::size_t a, std::size_t b) const { return correlators[a * bob_count + b]; }
};

class LhvModel {
public:
    /// `lambda_given_settings` is row-major (joint setting, lambda).
    /// `alice_response` is row-major (alice setting, lambda) holding p(+1 | a, l);
    /// `bob_response` likewise for Bob. Every table is validated.
    LhvModel(SettingSpace settings, std::size_t lambda_count, std::vector<double> lambda_given_settings,
             std::vector<double> alice_response, std::vector<double> bob_response);

    const SettingSpace& settings() const { return settings_; }
    std::size_t lambda_count() const { return lambda_count_; }

    std::span<const double> lambda_given_settings() const { return lambda_given_settings_; }
    std::span<const double> lambda_distribution(std::size_t joint_setting) const;
    double p_lambda(std::size_t joint_setting, std::size_t lambda) const {
        return lambda_given_settings_[joint_setting * lambda_count_ + lambda];
    }

    std::span<const double> alice_response() const { return alice_response_; }
    std::span<const double> bob_response() const { return bob_response_; }
    double p_alice_plus(std::size_t a, std::size_t lambda) const { return alice_response_[a * lambda_count_ + lambda]; }
    double p_bob_plus(std::size_t b, std::size_t lambda) const { return bob_response_[b * lambda_count_ + lambda]; }

    friend bool operator==(const LhvModel&, const LhvModel&) = default;

private:
    SettingSpace settings_;
    std::size_t lambda_count_;
    std::vector<double> lambda_given_settings_;
    std::vector<double> alice_response_;
    std::vector<double> bob_response_;
};

/// p(x,y|a,b) = sum_l p(l|a,b) p(x|a,l) p(y|b,l), exactly.
CorrelationTable predict(const LhvModel& model);

/// Model whose hidden variable carries the joint setting together with a local
/// outcome pair. Settings are fully determined by lambda and responses are
/// deterministic; predict() reproduces `target` exactly.
LhvModel brans_construct(const CorrelationTable& target, const SettingSpace& settings);

/// True when p(l|a,b) agrees across all joint settings within `tolerance`
/// (maximum entrywise deviation from the first setting's column).
bool measurement_independent(const LhvModel& model, double tolerance = 1e-9);

/// Single-lambda deterministic model: Alice answers +1 on setting a iff bit a
/// of `alice_bits` is set; Bob likewise.
LhvModel deterministic_strategy(const SettingSpace& settings, unsigned alice_bits, unsigned bob_bits);

}  // namespace mdep
