#include "mdep/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mdep/errors.hpp"
#include "mdep/tolerances.hpp"

namespace mdep {
namespace {

double squared_norm(std::span<const Complex> v) {
    double sum = 0.0;
    for (const auto& c : v) sum += std::norm(c);
    return sum;
}

void check_dim(std::size_t dim) {
    if (dim == 0) throw InvalidInput("dimension must be positive");
    if (dim > kMaxDimension) {
        throw InvalidInput("dimension " + std::to_string(dim) + " exceeds maximum " +
                           std::to_string(kMaxDimension));
    }
}

}  // namespace

// ---------------------------------------------------------------- StateVector

StateVector::StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    check_dim(amplitudes_.size());
    const double n2 = squared_norm(amplitudes_);
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kTol.normalization) {
        throw InvalidInput("state vector is not normalized (squared norm " + std::to_string(n2) + ")");
    }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    check_dim(dim);
    if (index >= dim) throw InvalidInput("basis index out of range");
    std::vector<Complex> amps(dim);
    amps[index] = 1.0;
    return StateVector(std::move(amps));
}

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
    const double n = std::sqrt(squared_norm(amplitudes));
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidInput("cannot normalize a zero vector");
    for (auto& a : amplitudes) a /= n;
    return StateVector(std::move(amplitudes));
}

Complex StateVector::inner(const StateVector& other) const {
    if (other.dim() != dim()) throw InvalidInput("inner product dimension mismatch");
    Complex sum = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) sum += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    return sum;
}

// ------------------------------------------------------------- OperatorMatrix

OperatorMatrix::OperatorMatrix(std::size_t dim, std::vector<Complex> entries, bool hermitian)
    : dim_(dim), entries_(std::move(entries)), hermitian_(hermitian) {
    check_dim(dim_);
    if (entries_.size() != dim_ * dim_) throw InvalidInput("operator entries do not form a square matrix");
    if (hermitian_ && !is_hermitian(kTol.arithmetic)) {
        throw InvalidInput("operator flagged hermitian is not self-adjoint");
    }
}

OperatorMatrix::OperatorMatrix(std::initializer_list<std::initializer_list<Complex>> rows, bool hermitian)
    : dim_(rows.size()), hermitian_(hermitian) {
    check_dim(dim_);
    entries_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) throw InvalidInput("operator rows must all have length dim");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    if (hermitian_ && !is_hermitian(kTol.arithmetic)) {
        throw InvalidInput("operator flagged hermitian is not self-adjoint");
    }
}

OperatorMatrix OperatorMatrix::identity(std::size_t dim) {
    std::vector<Complex> e(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
    return OperatorMatrix(dim, std::move(e), true);
}

OperatorMatrix OperatorMatrix::pauli_x() { return OperatorMatrix({{0.0, 1.0}, {1.0, 0.0}}, true); }

OperatorMatrix OperatorMatrix::pauli_y() {
    const Complex i{0.0, 1.0};
    return OperatorMatrix({{0.0, -i}, {i, 0.0}}, true);
}

OperatorMatrix OperatorMatrix::pauli_z() { return OperatorMatrix({{1.0, 0.0}, {0.0, -1.0}}, true); }

OperatorMatrix OperatorMatrix::projector(const StateVector& s) {
    const std::size_t n = s.dim();
    std::vector<Complex> e(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) e[r * n + c] = s[r] * std::conj(s[c]);
    return OperatorMatrix(n, std::move(e), true);
}

OperatorMatrix OperatorMatrix::adjoint() const {
    std::vector<Complex> e(dim_ * dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) e[c * dim_ + r] = std::conj(entries_[r * dim_ + c]);
    return OperatorMatrix(dim_, std::move(e), hermitian_);
}

bool OperatorMatrix::is_hermitian(double tol) const {
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = r; c < dim_; ++c)
            if (std::abs(entries_[r * dim_ + c] - std::conj(entries_[c * dim_ + r])) > tol) return false;
    return true;
}

bool OperatorMatrix::is_unitary(double tol) const {
    const OperatorMatrix product = adjoint() * (*this);
    return max_abs_difference(product, identity(dim_)) <= tol;
}

OperatorMatrix OperatorMatrix::as_hermitian() const { return OperatorMatrix(dim_, entries_, true); }

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    if (lhs.dim_ != rhs.dim_) throw InvalidInput("matrix product dimension mismatch");
    const std::size_t n = lhs.dim_;
    std::vector<Complex> e(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs.entries_[r * n + k];
            if (a == Complex{}) continue;
            for (std::size_t c = 0; c < n; ++c) e[r * n + c] += a * rhs.entries_[k * n + c];
        }
    return OperatorMatrix(n, std::move(e));
}

OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    if (lhs.dim_ != rhs.dim_) throw InvalidInput("matrix sum dimension mismatch");
    std::vector<Complex> e(lhs.entries_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += rhs.entries_[i];
    return OperatorMatrix(lhs.dim_, std::move(e));
}

OperatorMatrix operator-(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    return lhs + Complex{-1.0} * rhs;
}

OperatorMatrix operator*(Complex scale, const OperatorMatrix& m) {
    std::vector<Complex> e(m.entries_);
    for (auto& x : e) x *= scale;
    return OperatorMatrix(m.dim_, std::move(e));
}

double max_abs_difference(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    if (lhs.dim() != rhs.dim()) throw InvalidInput("comparison dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < lhs.entries().size(); ++i)
        worst = std::max(worst, std::abs(lhs.entries()[i] - rhs.entries()[i]));
    return worst;
}

OperatorMatrix kron(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    const std::size_t m = lhs.dim();
    const std::size_t n = rhs.dim();
    check_dim(m * n);
    const std::size_t d = m * n;
    std::vector<Complex> e(d * d);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) e[(i * n + k) * d + (j * n + l)] = lhs(i, j) * rhs(k, l);
    const bool herm = lhs.hermitian() && rhs.hermitian();
    return OperatorMatrix(d, std::move(e), herm);
}

// ------------------------------------------------------ ProjectiveMeasurement

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<OperatorMatrix> projectors)
    : dim_(0), projectors_(std::move(projectors)) {
    if (projectors_.empty()) throw InvalidInput("measurement needs at least one projector");
    dim_ = projectors_.front().dim();
    const double tol = kTol.structural;
    std::vector<Complex> zero(dim_ * dim_);
    OperatorMatrix sum(dim_, zero);
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
        const auto& p = projectors_[i];
        if (p.dim() != dim_) throw InvalidInput("projector dimensions differ");
        if (!p.is_hermitian(tol)) throw InvalidInput("projector " + std::to_string(i) + " is not hermitian");
        if (max_abs_difference(p * p, p) > tol)
            throw InvalidInput("projector " + std::to_string(i) + " is not idempotent");
        for (std::size_t j = i + 1; j < projectors_.size(); ++j) {
            if (max_abs_difference(p * projectors_[j], OperatorMatrix(dim_, zero)) > tol)
                throw InvalidInput("projectors " + std::to_string(i) + " and " + std::to_string(j) +
                                   " are not orthogonal");
        }
        sum = sum + p;
    }
    if (max_abs_difference(sum, OperatorMatrix::identity(dim_)) > tol)
        throw InvalidInput("projectors do not sum to the identity");
}

ProjectiveMeasurement ProjectiveMeasurement::from_basis(const std::vector<StateVector>& basis) {
    std::vector<OperatorMatrix> ps;
    ps.reserve(basis.size());
    for (const auto& b : basis) ps.push_back(OperatorMatrix::projector(b));
    return ProjectiveMeasurement(std::move(ps));
}

// ----------------------------------------------------------------- operations

StateVector tensor(const StateVector& u, const StateVector& v, std::size_t max_dim) {
    const std::size_t d = u.dim() * v.dim();
    if (d > max_dim) {
        throw InvalidInput("tensor product dimension " + std::to_string(d) + " exceeds maximum " +
                           std::to_string(max_dim));
    }
    std::vector<Complex> amps(d);
    for (std::size_t i = 0; i < u.dim(); ++i)
        for (std::size_t j = 0; j < v.dim(); ++j) amps[i * v.dim() + j] = u[i] * v[j];
    return StateVector(std::move(amps));
}

StateVector AppliedState::state() const { return StateVector::normalized(amplitudes); }

AppliedState apply(const OperatorMatrix& op, const StateVector& s) {
    if (op.dim() != s.dim()) throw InvalidInput("operator/state dimension mismatch");
    const std::size_t n = s.dim();
    AppliedState out;
    out.amplitudes.assign(n, Complex{});
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out.amplitudes[r] += op(r, c) * s[c];
    out.norm = std::sqrt(squared_norm(out.amplitudes));
    out.unitary = op.is_unitary(kTol.structural);
    if (out.unitary && out.norm > 0.0) {
        for (auto& a : out.amplitudes) a /= out.norm;
    }
    return out;
}

std::vector<double> born_probabilities(const ProjectiveMeasurement& m, const StateVector& s) {
    if (m.dim() != s.dim()) throw InvalidInput("measurement/state dimension mismatch");
    std::vector<double> probs;
    probs.reserve(m.outcome_count());
    double total = 0.0;
    for (const auto& p : m.projectors()) {
        Complex v = 0.0;
        for (std::size_t r = 0; r < s.dim(); ++r) {
            Complex row = 0.0;
            for (std::size_t c = 0; c < s.dim(); ++c) row += p(r, c) * s[c];
            v += std::conj(s[r]) * row;
        }
        const double prob = std::clamp(v.real(), 0.0, 1.0);
        probs.push_back(prob);
        total += prob;
    }
    if (std::abs(total - 1.0) > kTol.normalization)
        throw InternalError("Born probabilities sum to " + std::to_string(total));
    return probs;
}

double expectation(const OperatorMatrix& op, const StateVector& s) {
    if (!op.hermitian()) throw InvalidInput("expectation requires a hermitian operator");
    if (op.dim() != s.dim()) throw InvalidInput("operator/state dimension mismatch");
    Complex v = 0.0;
    for (std::size_t r = 0; r < s.dim(); ++r) {
        Complex row = 0.0;
        for (std::size_t c = 0; c < s.dim(); ++c) row += op(r, c) * s[c];
        v += std::conj(s[r]) * row;
    }
    if (std::abs(v.imag()) > kTol.structural)
        throw InternalError("expectation has imaginary residue " + std::to_string(v.imag()));
    return v.real();
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(a.inner(b)); }

}  // namespace mdep
