#pragma once

// Discrete entropies and mutual information, all in bits, with 0 log 0 = 0.

#include <cstddef>
#include <span>
#include <vector>

#include "mdep/lhv.hpp"

namespace mdep {

class JointDistribution {
public:
    /// Row-major rows x cols table; nonnegative, summing to 1 within kTol.arithmetic.
    JointDistribution(std::size_t rows, std::size_t cols, std::vector<double> probabilities);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t r, std::size_t c) const { return p_[r * cols_ + c]; }
    std::span<const double> probabilities() const { return p_; }

    std::vector<double> row_marginal() const;
    std::vector<double> col_marginal() const;
    JointDistribution transposed() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> p_;
};

/// Shannon entropy of a probability vector.
double entropy(std::span<const double> p);

/// I(row; col). Floating residue below zero (down to -1e-12) is clamped to 0;
/// anything more negative raises InternalError.
double mutual_information(const JointDistribution& j);

/// H(col | row).
double conditional_entropy(const JointDistribution& j);

/// Correlation measure of dependence between hidden variable and joint setting.
struct CmdReport {
    double raw_bits = 0.0;              ///< I(lambda; joint setting)
    double normalized = 0.0;            ///< raw_bits / setting_entropy_bits (0 if that is 0)
    double setting_entropy_bits = 0.0;  ///< H(joint setting)
};

/// p(lambda, z) = p(z) p(lambda | z), rows indexed by lambda, columns by z.
JointDistribution lambda_setting_distribution(const LhvModel& model);

CmdReport cmd(const LhvModel& model);

}  // namespace mdep
