#pragma once

// Single-qubit teleportation through the shared state (|00> + |11>)/sqrt(2).
//
// Qubit order in the 8-dim register: (input, Alice's half, Bob's half).
// Bell outcomes are indexed in the order
//   0: (|00>+|11>)/sqrt2   1: (|00>-|11>)/sqrt2
//   2: (|01>+|10>)/sqrt2   3: (|01>-|10>)/sqrt2
// and Bob's correction for outcome k is I, Z, X, Z*X respectively.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mdep/hilbert.hpp"
#include "mdep/measurement_report.hpp"

namespace mdep {

enum class Pauli { I, Z, X, ZX };

std::string_view label(Pauli p);
/// Matrix for the label; ZX means X is applied first, then Z.
OperatorMatrix pauli_matrix(Pauli p);

struct TeleportInput {
    Complex a;
    Complex b;

    /// Throws InvalidInput unless |a|^2 + |b|^2 = 1 within kTol.normalization.
    TeleportInput(Complex a, Complex b);

    StateVector state() const;
};

struct TeleportTranscript {
    int outcome_index = 0;
    double outcome_probability = 0.0;
    Pauli correction_applied = Pauli::I;
    StateVector bob_final = StateVector::basis(2, 0);
    double fidelity = 0.0;
};

/// The four Bell states in outcome order.
const std::array<StateVector, 4>& bell_states();

/// Bell-basis measurement on the first two qubits of the 8-dim register.
const ProjectiveMeasurement& bell_measurement();

/// Correction Bob applies after learning outcome `k`.
Pauli correction_for_outcome(int k);

/// |psi> (x) |phi00>.
StateVector teleport_register(const TeleportInput& input);

/// Bob's normalized qubit conditioned on Bell outcome `k`, before correction.
StateVector bob_branch_state(const StateVector& reg, int k);

/// Runs the protocol. With `forced_outcome` set the measurement result is
/// post-selected; otherwise it is sampled from the Born probabilities using
/// a generator seeded only by `seed`.
TeleportTranscript run_teleportation(const TeleportInput& input, std::optional<int> forced_outcome,
                                     std::uint64_t seed);

/// Every measurement the protocol can perform (the Bell measurement only).
std::vector<const ProjectiveMeasurement*> teleport_measurements();

/// Teleportation performs one fixed measurement and offers no setting choice.
MeasurementChoiceReport verify_no_setting_choice();

}  // namespace mdep
