#include "mdep/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mdep/errors.hpp"
#include "mdep/tolerances.hpp"

namespace mdep {

// ----------------------------------------------------------------------- CHSH

double chsh_form_value(std::span<const double, 4> e, ChshForm form) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += (k == form.minus_position ? -1.0 : 1.0) * e[static_cast<std::size_t>(k)];
    return form.sign * s;
}

ChshForm chsh_best_form(std::span<const double, 4> e) {
    ChshForm best{};
    double best_value = -1.0;
    for (int pos = 0; pos < 4; ++pos)
        for (int sign : {+1, -1}) {
            const ChshForm f{pos, sign};
            const double v = chsh_form_value(e, f);
            if (v > best_value) {
                best_value = v;
                best = f;
            }
        }
    return best;
}

double chsh_value(std::span<const double, 4> e) { return chsh_form_value(e, chsh_best_form(e)); }

double chsh_value(const CorrelationTable& t) {
    if (t.alice_count != 2 || t.bob_count != 2 || t.correlators.size() != 4)
        throw InvalidInput("CHSH needs exactly two settings per party");
    return chsh_value(std::span<const double, 4>(t.correlators.data(), 4));
}

namespace {

void check_pm1_observable(const OperatorMatrix& m, const std::string& who) {
    if (m.dim() != 2) throw InvalidInput(who + " observable must be 2x2");
    if (!m.hermitian()) throw InvalidInput(who + " observable must be hermitian");
    if (max_abs_difference(m * m, OperatorMatrix::identity(2)) > kTol.structural)
        throw InvalidInput(who + " observable must square to the identity");
}

}  // namespace

ChshScenario::ChshScenario(std::array<OperatorMatrix, 2> alice, std::array<OperatorMatrix, 2> bob, StateVector state)
    : alice_(std::move(alice)), bob_(std::move(bob)), state_(std::move(state)) {
    for (std::size_t i = 0; i < 2; ++i) {
        check_pm1_observable(alice_[i], "alice[" + std::to_string(i) + "]");
        check_pm1_observable(bob_[i], "bob[" + std::to_string(i) + "]");
    }
    if (state_.dim() != 4) throw InvalidInput("CHSH state must be two-qubit (dim 4)");
}

OperatorMatrix xz_observable(double theta) {
    return (std::cos(theta) * OperatorMatrix::pauli_z() + std::sin(theta) * OperatorMatrix::pauli_x()).as_hermitian();
}

StateVector phi_plus() {
    const double h = 1.0 / std::sqrt(2.0);
    return StateVector{h, 0.0, 0.0, h};
}

ChshScenario reference_scenario() {
    using std::numbers::pi;
    return ChshScenario({OperatorMatrix::pauli_z(), xz_observable(pi / 4)},
                        {xz_observable(pi / 4), xz_observable(-pi / 4)}, phi_plus());
}

ChshScenario tsirelson_scenario() {
    using std::numbers::pi;
    return ChshScenario({OperatorMatrix::pauli_z(), OperatorMatrix::pauli_x()},
                        {xz_observable(pi / 4), xz_observable(-pi / 4)}, phi_plus());
}

CorrelationTable chsh_quantum(const ChshScenario& s) {
    const auto id = OperatorMatrix::identity(2);
    std::vector<double> corr;
    std::vector<OutcomeTable> joint;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            const auto& A = s.alice()[a];
            const auto& B = s.bob()[b];
            corr.push_back(expectation(kron(A, B), s.state()));
            OutcomeTable p{};
            std::size_t k = 0;
            for (double x : {+1.0, -1.0})
                for (double y : {+1.0, -1.0}) {
                    const auto pa = (0.5 * (id + Complex{x} * A)).as_hermitian();
                    const auto pb = (0.5 * (id + Complex{y} * B)).as_hermitian();
                    p[k++] = std::max(0.0, expectation(kron(pa, pb), s.state()));
                }
            joint.push_back(p);
        }
    return CorrelationTable(2, 2, std::move(corr), std::move(joint));
}

std::vector<LhvModel> deterministic_strategies(const SettingSpace& settings) {
    if (settings.alice_count() != 2 || settings.bob_count() != 2)
        throw InvalidInput("deterministic CHSH strategies need a 2x2 setting space");
    std::vector<LhvModel> out;
    out.reserve(16);
    for (unsigned a = 0; a < 4; ++a)
        for (unsigned b = 0; b < 4; ++b) out.push_back(deterministic_strategy(settings, a, b));
    return out;
}

double lhv_chsh_max(const SettingSpace& settings) {
    double best = 0.0;
    for (const auto& m : deterministic_strategies(settings)) best = std::max(best, chsh_value(predict(m)));
    return best;
}

MeasurementChoiceReport measurement_choice_report(const ChshScenario& s) {
    const std::size_t per_party = std::min(s.alice().size(), s.bob().size());
    return MeasurementChoiceReport{"chsh", 2, per_party, per_party > 1};
}

// ----------------------------------------------------------------------- KCBS

namespace {

double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

}  // namespace

KcbsScenario::KcbsScenario(std::array<Vec3, 5> vectors, StateVector state)
    : vectors_(vectors), state_(std::move(state)) {
    if (state_.dim() != 3) throw InvalidInput("KCBS state must be a qutrit (dim 3)");
    for (std::size_t i = 0; i < 5; ++i) {
        if (std::abs(dot(vectors_[i], vectors_[i]) - 1.0) > kTol.structural)
            throw InvalidInput("KCBS vector " + std::to_string(i) + " is not unit length");
        const std::size_t j = (i + 1) % 5;
        if (std::abs(dot(vectors_[i], vectors_[j])) > kTol.structural)
            throw InvalidInput("KCBS vectors " + std::to_string(i) + " and " + std::to_string(j) +
                               " are not orthogonal");
    }
}

OperatorMatrix KcbsScenario::observable(std::size_t i) const {
    const Vec3& v = vectors_.at(i);
    std::vector<Complex> e(9);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) e[r * 3 + c] = 2.0 * v[r] * v[c] - (r == c ? 1.0 : 0.0);
    return OperatorMatrix(3, std::move(e), true);
}

std::array<Vec3, 5> pentagram_vectors(double azimuth_offset) {
    using std::numbers::pi;
    // v_i . v_{i+1} = sin^2(t) cos(4pi/5) + cos^2(t) = 0  =>  cos^2(t) = cos(pi/5) / (1 + cos(pi/5)).
    const double c = std::cos(pi / 5);
    const double cos_t = std::sqrt(c / (1.0 + c));
    const double sin_t = std::sqrt(1.0 - cos_t * cos_t);
    std::array<Vec3, 5> v{};
    for (std::size_t i = 0; i < 5; ++i) {
        const double phi = 4.0 * pi * double(i) / 5.0 + azimuth_offset;
        v[i] = {sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t};
    }
    return v;
}

KcbsScenario pentagram_scenario() { return KcbsScenario(pentagram_vectors(), StateVector::basis(3, 2)); }

double kcbs_value(const KcbsScenario& s) {
    double total = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        const auto a = s.observable(i);
        const auto b = s.observable((i + 1) % 5);
        // Symmetrized so the product stays exactly hermitian; equal to a*b when they commute.
        const auto prod = (0.5 * (a * b + b * a)).as_hermitian();
        total += expectation(prod, s.state());
    }
    return total;
}

int kcbs_assignment_value(std::span<const int, 5> x) {
    int sum = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        if (x[i] != 1 && x[i] != -1) throw InvalidInput("KCBS assignments must be +1 or -1");
        sum += x[i] * x[(i + 1) % 5];
    }
    return sum;
}

double kcbs_classical_min() {
    int best = 5;
    for (unsigned bits = 0; bits < 32; ++bits) {
        std::array<int, 5> x{};
        for (std::size_t i = 0; i < 5; ++i) x[i] = (bits >> i) & 1u ? 1 : -1;
        best = std::min(best, kcbs_assignment_value(x));
    }
    return best;
}

}  // namespace mdep
