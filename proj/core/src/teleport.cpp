#include "mdep/teleport.hpp"

#include <cmath>
#include <string>

#include "mdep/errors.hpp"
#include "mdep/random.hpp"
#include "mdep/tolerances.hpp"

namespace mdep {

std::string_view label(Pauli p) {
    switch (p) {
        case Pauli::I: return "I";
        case Pauli::Z: return "Z";
        case Pauli::X: return "X";
        case Pauli::ZX: return "ZX";
    }
    return "?";
}

OperatorMatrix pauli_matrix(Pauli p) {
    switch (p) {
        case Pauli::I: return OperatorMatrix::identity(2);
        case Pauli::Z: return OperatorMatrix::pauli_z();
        case Pauli::X: return OperatorMatrix::pauli_x();
        case Pauli::ZX: return OperatorMatrix::pauli_z() * OperatorMatrix::pauli_x();
    }
    throw InvalidInput("unknown Pauli label");
}

TeleportInput::TeleportInput(Complex a_, Complex b_) : a(a_), b(b_) {
    const double n2 = std::norm(a) + std::norm(b);
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kTol.normalization)
        throw InvalidInput("teleport input is not normalized: |a|^2+|b|^2 = " + std::to_string(n2));
}

StateVector TeleportInput::state() const { return StateVector::normalized({a, b}); }

const std::array<StateVector, 4>& bell_states() {
    static const std::array<StateVector, 4> states = [] {
        const double h = 1.0 / std::sqrt(2.0);
        return std::array<StateVector, 4>{
            StateVector{h, 0.0, 0.0, h},
            StateVector{h, 0.0, 0.0, -h},
            StateVector{0.0, h, h, 0.0},
            StateVector{0.0, h, -h, 0.0},
        };
    }();
    return states;
}

const ProjectiveMeasurement& bell_measurement() {
    static const ProjectiveMeasurement m = [] {
        std::vector<OperatorMatrix> ps;
        for (const auto& b : bell_states())
            ps.push_back(kron(OperatorMatrix::projector(b), OperatorMatrix::identity(2)));
        return ProjectiveMeasurement(std::move(ps));
    }();
    return m;
}

Pauli correction_for_outcome(int k) {
    static constexpr std::array<Pauli, 4> table{Pauli::I, Pauli::Z, Pauli::X, Pauli::ZX};
    if (k < 0 || k > 3) throw InvalidInput("Bell outcome must be in {0,1,2,3}, got " + std::to_string(k));
    return table[static_cast<std::size_t>(k)];
}

StateVector teleport_register(const TeleportInput& input) {
    return tensor(input.state(), bell_states()[0]);
}

StateVector bob_branch_state(const StateVector& reg, int k) {
    if (reg.dim() != 8) throw InvalidInput("teleport register must be 8-dimensional");
    correction_for_outcome(k);
    const auto& bell = bell_states()[static_cast<std::size_t>(k)];
    // (<B_k| (x) I) |reg>
    std::vector<Complex> bob(2);
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t j = 0; j < 2; ++j) bob[j] += std::conj(bell[m]) * reg[m * 2 + j];
    return StateVector::normalized(std::move(bob));
}

TeleportTranscript run_teleportation(const TeleportInput& input, std::optional<int> forced_outcome,
                                     std::uint64_t seed) {
    if (forced_outcome) correction_for_outcome(*forced_outcome);

    const StateVector reg = teleport_register(input);
    const std::vector<double> probs = born_probabilities(bell_measurement(), reg);

    int outcome = 0;
    if (forced_outcome) {
        outcome = *forced_outcome;
    } else {
        Rng rng = make_rng(seed);
        const double u = uniform01(rng);
        double acc = 0.0;
        outcome = 3;
        for (int k = 0; k < 4; ++k) {
            acc += probs[static_cast<std::size_t>(k)];
            if (u < acc) {
                outcome = k;
                break;
            }
        }
    }

    TeleportTranscript t;
    t.outcome_index = outcome;
    t.outcome_probability = probs[static_cast<std::size_t>(outcome)];
    t.correction_applied = correction_for_outcome(outcome);
    t.bob_final = apply(pauli_matrix(t.correction_applied), bob_branch_state(reg, outcome)).state();
    t.fidelity = fidelity(input.state(), t.bob_final);
    return t;
}

std::vector<const ProjectiveMeasurement*> teleport_measurements() { return {&bell_measurement()}; }

MeasurementChoiceReport verify_no_setting_choice() {
    // Only Alice measures; Bob's correction is a unitary, not a measurement.
    const std::size_t count = teleport_measurements().size();
    return MeasurementChoiceReport{"teleportation", 1, count, count > 1};
}

}  // namespace mdep
