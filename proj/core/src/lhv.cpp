#include "mdep/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mdep/errors.hpp"
#include "mdep/tolerances.hpp"

namespace mdep {
namespace {

constexpr std::array<int, 4> kOutcomeX{+1, +1, -1, -1};
constexpr std::array<int, 4> kOutcomeY{+1, -1, +1, -1};

void check_distribution(std::span<const double> p, const std::string& what) {
    double sum = 0.0;
    for (double v : p) {
        if (!std::isfinite(v) || v < 0.0) throw InvalidInput(what + " has a negative or non-finite entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kTol.arithmetic)
        throw InvalidInput(what + " sums to " + std::to_string(sum) + ", not 1");
}

void check_probability(double v, const std::string& what) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) throw InvalidInput(what + " must lie in [0,1]");
}

}  // namespace

// --------------------------------------------------------------- SettingSpace

SettingSpace::SettingSpace(std::size_t alice_count, std::size_t bob_count)
    : SettingSpace(alice_count, bob_count,
                   std::vector<double>(alice_count * bob_count,
                                       alice_count * bob_count > 0 ? 1.0 / double(alice_count * bob_count) : 0.0)) {}

SettingSpace::SettingSpace(std::size_t alice_count, std::size_t bob_count, std::vector<double> marginal)
    : alice_(alice_count), bob_(bob_count), marginal_(std::move(marginal)) {
    if (alice_ == 0 || bob_ == 0) throw InvalidInput("each party needs at least one setting");
    if (marginal_.size() != alice_ * bob_) throw InvalidInput("setting marginal has the wrong length");
    check_distribution(marginal_, "setting marginal");
}

// ----------------------------------------------------------- CorrelationTable

CorrelationTable::CorrelationTable(std::size_t alice_count_, std::size_t bob_count_, std::vector<double> correlators_,
                                   std::vector<OutcomeTable> joint_probabilities_)
    : alice_count(alice_count_),
      bob_count(bob_count_),
      correlators(std::move(correlators_)),
      joint_probabilities(std::move(joint_probabilities_)) {
    const std::size_t n = alice_count * bob_count;
    if (n == 0) throw InvalidInput("correlation table needs at least one setting per party");
    if (correlators.size() != n || joint_probabilities.size() != n)
        throw InvalidInput("correlation table does not cover every joint setting");
    for (std::size_t z = 0; z < n; ++z) {
        const auto& p = joint_probabilities[z];
        check_distribution(p, "p(x,y|setting " + std::to_string(z) + ")");
        double e = 0.0;
        for (std::size_t k = 0; k < 4; ++k) e += kOutcomeX[k] * kOutcomeY[k] * p[k];
        if (std::abs(e - correlators[z]) > kTol.arithmetic)
            throw InvalidInput("correlator for setting " + std::to_string(z) + " disagrees with its outcome table");
    }
}

CorrelationTable CorrelationTable::from_correlators(std::size_t alice_count, std::size_t bob_count,
                                                    std::vector<double> correlators) {
    std::vector<OutcomeTable> p;
    p.reserve(correlators.size());
    for (double e : correlators) {
        if (!(e >= -1.0 && e <= 1.0)) throw InvalidInput("correlators must lie in [-1,1]");
        p.push_back({(1.0 + e) / 4.0, (1.0 - e) / 4.0, (1.0 - e) / 4.0, (1.0 + e) / 4.0});
    }
    // Recompute E from the table so the two agree to the last bit.
    std::vector<double> exact;
    exact.reserve(p.size());
    for (const auto& t : p) exact.push_back(t[0] - t[1] - t[2] + t[3]);
    return CorrelationTable(alice_count, bob_count, std::move(exact), std::move(p));
}

// ------------------------------------------------------------------- LhvModel

LhvModel::LhvModel(SettingSpace settings, std::size_t lambda_count, std::vector<double> lambda_given_settings,
                   std::vector<double> alice_response, std::vector<double> bob_response)
    : settings_(std::move(settings)),
      lambda_count_(lambda_count),
      lambda_given_settings_(std::move(lambda_given_settings)),
      alice_response_(std::move(alice_response)),
      bob_response_(std::move(bob_response)) {
    if (lambda_count_ == 0 || lambda_count_ > kMaxLambdaCount)
        throw InvalidInput("lambda_count must be in [1, " + std::to_string(kMaxLambdaCount) + "]");
    if (lambda_given_settings_.size() != settings_.joint_count() * lambda_count_)
        throw InvalidInput("lambda_given_settings has the wrong shape");
    if (alice_response_.size() != settings_.alice_count() * lambda_count_)
        throw InvalidInput("alice_response has the wrong shape");
    if (bob_response_.size() != settings_.bob_count() * lambda_count_)
        throw InvalidInput("bob_response has the wrong shape");
    for (std::size_t z = 0; z < settings_.joint_count(); ++z)
        check_distribution(lambda_distribution(z), "p(lambda | setting " + std::to_string(z) + ")");
    for (double v : alice_response_) check_probability(v, "alice_response entry");
    for (double v : bob_response_) check_probability(v, "bob_response entry");
}

std::span<const double> LhvModel::lambda_distribution(std::size_t joint_setting) const {
    return std::span<const double>(lambda_given_settings_).subspan(joint_setting * lambda_count_, lambda_count_);
}

// ----------------------------------------------------------------- operations

CorrelationTable predict(const LhvModel& model) {
    const auto& s = model.settings();
    std::vector<OutcomeTable> joint(s.joint_count(), OutcomeTable{});
    std::vector<double> corr(s.joint_count());
    for (std::size_t z = 0; z < s.joint_count(); ++z) {
        const std::size_t a = s.alice_of(z);
        const std::size_t b = s.bob_of(z);
        OutcomeTable& p = joint[z];
        for (std::size_t l = 0; l < model.lambda_count(); ++l) {
            const double w = model.p_lambda(z, l);
            if (w == 0.0) continue;
            const double pa = model.p_alice_plus(a, l);
            const double pb = model.p_bob_plus(b, l);
            p[0] += w * pa * pb;
            p[1] += w * pa * (1.0 - pb);
            p[2] += w * (1.0 - pa) * pb;
            p[3] += w * (1.0 - pa) * (1.0 - pb);
        }
        corr[z] = p[0] - p[1] - p[2] + p[3];
    }
    return CorrelationTable(s.alice_count(), s.bob_count(), std::move(corr), std::move(joint));
}

LhvModel brans_construct(const CorrelationTable& target, const SettingSpace& settings) {
    if (target.alice_count != settings.alice_count() || target.bob_count != settings.bob_count())
        throw InvalidInput("target table and setting space disagree on setting counts");
    const std::size_t joints = settings.joint_count();
    const std::size_t lambdas = joints * 4;
    if (lambdas > kMaxLambdaCount) throw InvalidInput("too many settings for a finite Brans-style model");

    // lambda = 4 * z + k: joint setting z, local outcome pair k.
    std::vector<double> given(joints * lambdas, 0.0);
    std::vector<double> alice(settings.alice_count() * lambdas, 1.0);
    std::vector<double> bob(settings.bob_count() * lambdas, 1.0);
    for (std::size_t z = 0; z < joints; ++z) {
        const std::size_t a = settings.alice_of(z);
        const std::size_t b = settings.bob_of(z);
        for (std::size_t k = 0; k < 4; ++k) {
            const std::size_t l = 4 * z + k;
            given[z * lambdas + l] = target.joint_probabilities[z][k];
            alice[a * lambdas + l] = kOutcomeX[k] > 0 ? 1.0 : 0.0;
            bob[b * lambdas + l] = kOutcomeY[k] > 0 ? 1.0 : 0.0;
        }
    }
    return LhvModel(settings, lambdas, std::move(given), std::move(alice), std::move(bob));
}

bool measurement_independent(const LhvModel& model, double tolerance) {
    const auto reference = model.lambda_distribution(0);
    for (std::size_t z = 1; z < model.settings().joint_count(); ++z) {
        const auto col = model.lambda_distribution(z);
        for (std::size_t l = 0; l < model.lambda_count(); ++l)
            if (std::abs(col[l] - reference[l]) > tolerance) return false;
    }
    return true;
}

LhvModel deterministic_strategy(const SettingSpace& settings, unsigned alice_bits, unsigned bob_bits) {
    std::vector<double> alice(settings.alice_count());
    std::vector<double> bob(settings.bob_count());
    for (std::size_t a = 0; a < alice.size(); ++a) alice[a] = (alice_bits >> a) & 1u ? 1.0 : 0.0;
    for (std::size_t b = 0; b < bob.size(); ++b) bob[b] = (bob_bits >> b) & 1u ? 1.0 : 0.0;
    return LhvModel(settings, 1, std::vector<double>(settings.joint_count(), 1.0), std::move(alice), std::move(bob));
}

}  // namespace mdep
