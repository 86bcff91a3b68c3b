#include "mdep/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mdep/errors.hpp"
#include "mdep/tolerances.hpp"

namespace mdep {

JointDistribution::JointDistribution(std::size_t rows, std::size_t cols, std::vector<double> probabilities)
    : rows_(rows), cols_(cols), p_(std::move(probabilities)) {
    if (rows_ == 0 || cols_ == 0) throw InvalidInput("joint distribution needs at least one row and column");
    if (p_.size() != rows_ * cols_) throw InvalidInput("joint distribution has the wrong number of entries");
    double sum = 0.0;
    for (double v : p_) {
        if (!std::isfinite(v) || v < 0.0) throw InvalidInput("joint distribution has a negative or non-finite entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kTol.arithmetic)
        throw InvalidInput("joint distribution sums to " + std::to_string(sum) + ", not 1");
}

std::vector<double> JointDistribution::row_marginal() const {
    std::vector<double> m(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m[r] += p_[r * cols_ + c];
    return m;
}

std::vector<double> JointDistribution::col_marginal() const {
    std::vector<double> m(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m[c] += p_[r * cols_ + c];
    return m;
}

JointDistribution JointDistribution::transposed() const {
    std::vector<double> t(p_.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t[c * rows_ + r] = p_[r * cols_ + c];
    return JointDistribution(cols_, rows_, std::move(t));
}

double entropy(std::span<const double> p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

double mutual_information(const JointDistribution& j) {
    const auto pr = j.row_marginal();
    const auto pc = j.col_marginal();
    double mi = 0.0;
    for (std::size_t r = 0; r < j.rows(); ++r)
        for (std::size_t c = 0; c < j.cols(); ++c) {
            const double p = j(r, c);
            if (p > 0.0) mi += p * std::log2(p / (pr[r] * pc[c]));
        }
    if (mi < 0.0) {
        if (mi < -kTol.arithmetic) throw InternalError("mutual information is negative: " + std::to_string(mi));
        mi = 0.0;
    }
    return mi;
}

double conditional_entropy(const JointDistribution& j) {
    const auto pr = j.row_marginal();
    double h = 0.0;
    for (std::size_t r = 0; r < j.rows(); ++r)
        for (std::size_t c = 0; c < j.cols(); ++c) {
            const double p = j(r, c);
            if (p > 0.0) h -= p * std::log2(p / pr[r]);
        }
    return std::max(h, 0.0);
}

JointDistribution lambda_setting_distribution(const LhvModel& model) {
    const auto& s = model.settings();
    const std::size_t rows = model.lambda_count();
    const std::size_t cols = s.joint_count();
    std::vector<double> p(rows * cols);
    for (std::size_t z = 0; z < cols; ++z)
        for (std::size_t l = 0; l < rows; ++l) p[l * cols + z] = s.marginal()[z] * model.p_lambda(z, l);
    // The product can drift off 1 by a few ulps; renormalize within tolerance.
    double sum = 0.0;
    for (double v : p) sum += v;
    for (double& v : p) v /= sum;
    return JointDistribution(rows, cols, std::move(p));
}

CmdReport cmd(const LhvModel& model) {
    const JointDistribution j = lambda_setting_distribution(model);
    CmdReport r;
    r.raw_bits = mutual_information(j);
    r.setting_entropy_bits = entropy(model.settings().marginal());
    r.normalized = r.setting_entropy_bits > 0.0 ? std::clamp(r.raw_bits / r.setting_entropy_bits, 0.0, 1.0) : 0.0;
    return r;
}

}  // namespace mdep
