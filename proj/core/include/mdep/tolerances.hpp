#pragma once

namespace mdep {

/// Numeric tolerances shared by every module.
struct Tolerances {
    double normalization = 1e-9;   ///< state norms, distribution sums fed by users
    double structural = 1e-10;     ///< hermiticity, idempotence, unitarity, orthogonality
    double arithmetic = 1e-12;     ///< exact-arithmetic identities, probability tables
};

inline constexpr Tolerances kTol{};

}  // namespace mdep
