#pragma once

// CHSH and KCBS evaluation, quantum predictions, and brute-force classical
// bounds used as oracles.

#include <array>
#include <span>
#include <vector>

#include "mdep/hilbert.hpp"
#include "mdep/lhv.hpp"
#include "mdep/measurement_report.hpp"

namespace mdep {

// ----------------------------------------------------------------------- CHSH

/// max over the 8 sign/relabeling placements of
/// |E(a,b) + E(a,b') + E(a',b) - E(a',b')|. Requires a 2x2 table.
double chsh_value(const CorrelationTable& t);

/// Same statistic from the four correlators ordered (E00, E01, E10, E11).
double chsh_value(std::span<const double, 4> correlators);

/// Which of the four correlators carries the minus sign in the maximizing
/// placement, and the overall sign (+1/-1) of that placement.
struct ChshForm {
    int minus_position = 3;
    int sign = +1;
};
ChshForm chsh_best_form(std::span<const double, 4> correlators);
/// Signed combination for an explicit placement (not absolute-valued).
double chsh_form_value(std::span<const double, 4> correlators, ChshForm form);

class ChshScenario {
public:
    /// Observables must be 2x2 hermitian and square to the identity; the
    /// state must be two-qubit.
    ChshScenario(std::array<OperatorMatrix, 2> alice, std::array<OperatorMatrix, 2> bob, StateVector state);

    const std::array<OperatorMatrix, 2>& alice() const { return alice_; }
    const std::array<OperatorMatrix, 2>& bob() const { return bob_; }
    const StateVector& state() const { return state_; }

private:
    std::array<OperatorMatrix, 2> alice_;
    std::array<OperatorMatrix, 2> bob_;
    StateVector state_;
};

/// cos(theta) Z + sin(theta) X.
OperatorMatrix xz_observable(double theta);

/// (|00> + |11>)/sqrt(2).
StateVector phi_plus();

/// Alice measures Z or (Z+X)/sqrt2, Bob (Z+X)/sqrt2 or (Z-X)/sqrt2, on phi_plus.
ChshScenario reference_scenario();
/// Alice Z or X, Bob (Z+X)/sqrt2 or (Z-X)/sqrt2 on phi_plus; attains 2 sqrt 2.
ChshScenario tsirelson_scenario();

/// E(a_i, b_j) = <state| A_i (x) B_j |state>, with the matching outcome tables.
CorrelationTable chsh_quantum(const ChshScenario& s);

/// Every deterministic single-lambda strategy on a 2x2 setting space (16 models).
std::vector<LhvModel> deterministic_strategies(const SettingSpace& settings);

/// Exhaustive maximum of chsh_value over the deterministic strategies.
double lhv_chsh_max(const SettingSpace& settings);

/// Two measurements per party.
MeasurementChoiceReport measurement_choice_report(const ChshScenario& s);

// ----------------------------------------------------------------------- KCBS

using Vec3 = std::array<double, 3>;

class KcbsScenario {
public:
    /// Vectors must be unit length with v_i orthogonal to v_{i+1 mod 5}
    /// (kTol.structural); the state must be a qutrit.
    KcbsScenario(std::array<Vec3, 5> vectors, StateVector state);

    const std::array<Vec3, 5>& vectors() const { return vectors_; }
    const StateVector& state() const { return state_; }

    /// A_i = 2 |v_i><v_i| - 1.
    OperatorMatrix observable(std::size_t i) const;

private:
    std::array<Vec3, 5> vectors_;
    StateVector state_;
};

/// Pentagram vectors sharing a polar angle fixed by cyclic orthogonality,
/// azimuths 4*pi*i/5 + azimuth_offset.
std::array<Vec3, 5> pentagram_vectors(double azimuth_offset = 0.0);

/// Pentagram with the state along the symmetry axis, (0, 0, 1).
KcbsScenario pentagram_scenario();

/// sum_i <state| A_i A_{i+1} |state>.
double kcbs_value(const KcbsScenario& s);

/// sum_i x_i x_{i+1} for a +-1 assignment.
int kcbs_assignment_value(std::span<const int, 5> assignment);

/// Minimum of kcbs_assignment_value over all 32 assignments.
double kcbs_classical_min();

}  // namespace mdep
