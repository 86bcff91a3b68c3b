#pragma once

// Dense complex linear algebra over small Hilbert spaces.
//
// Everything here is value-typed and immutable once constructed. Tensor
// products order amplitudes with the left factor as the high-order index, so
// |x>|y> sits at index x * dim(right) + y.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mdep {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDimension = 64;

class StateVector {
public:
    /// Throws InvalidInput unless the amplitudes are normalized within kTol.normalization.
    explicit StateVector(std::vector<Complex> amplitudes);
    StateVector(std::initializer_list<Complex> amplitudes)
        : StateVector(std::vector<Complex>(amplitudes)) {}

    static StateVector basis(std::size_t dim, std::size_t index);
    /// Scales an arbitrary nonzero vector to unit norm.
    static StateVector normalized(std::vector<Complex> amplitudes);

    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

    /// <this|other>
    Complex inner(const StateVector& other) const;

private:
    std::vector<Complex> amplitudes_;
};

class OperatorMatrix {
public:
    /// Row-major entries. When `hermitian` is set the matrix is checked against
    /// its adjoint and rejected if it differs by more than kTol.arithmetic.
    OperatorMatrix(std::size_t dim, std::vector<Complex> entries, bool hermitian = false);
    OperatorMatrix(std::initializer_list<std::initializer_list<Complex>> rows, bool hermitian = false);

    static OperatorMatrix identity(std::size_t dim);
    static OperatorMatrix pauli_x();
    static OperatorMatrix pauli_y();
    static OperatorMatrix pauli_z();
    /// |s><s|
    static OperatorMatrix projector(const StateVector& s);

    std::size_t dim() const { return dim_; }
    bool hermitian() const { return hermitian_; }
    const Complex& operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
    std::span<const Complex> entries() const { return entries_; }

    OperatorMatrix adjoint() const;
    bool is_hermitian(double tol) const;
    bool is_unitary(double tol) const;
    /// Same entries with the hermitian flag set (validated).
    OperatorMatrix as_hermitian() const;

    friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
    friend OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
    friend OperatorMatrix operator-(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
    friend OperatorMatrix operator*(Complex scale, const OperatorMatrix& m);

private:
    std::size_t dim_;
    std::vector<Complex> entries_;
    bool hermitian_;
};

/// Maximum entrywise deviation; used by tests and validation.
double max_abs_difference(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

/// Kronecker product, left factor major.
OperatorMatrix kron(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

class ProjectiveMeasurement {
public:
    /// Rejects projectors that are not hermitian idempotents, not pairwise
    /// orthogonal, or do not resolve the identity (all within kTol.structural).
    explicit ProjectiveMeasurement(std::vector<OperatorMatrix> projectors);

    /// Rank-one measurement in an orthonormal basis.
    static ProjectiveMeasurement from_basis(const std::vector<StateVector>& basis);

    std::size_t dim() const { return dim_; }
    std::size_t outcome_count() const { return projectors_.size(); }
    const std::vector<OperatorMatrix>& projectors() const { return projectors_; }

private:
    std::size_t dim_;
    std::vector<OperatorMatrix> projectors_;
};

StateVector tensor(const StateVector& u, const StateVector& v, std::size_t max_dim = kMaxDimension);

/// Result of a matrix-vector product. If the operator is unitary the
/// amplitudes are renormalized; otherwise they are left as computed and
/// `norm` carries their length.
struct AppliedState {
    std::vector<Complex> amplitudes;
    double norm = 0.0;
    bool unitary = false;

    /// Normalized copy. Throws InvalidInput for a zero vector.
    StateVector state() const;
};

AppliedState apply(const OperatorMatrix& op, const StateVector& s);

std::vector<double> born_probabilities(const ProjectiveMeasurement& m, const StateVector& s);

/// <s|op|s>. The operator must carry the hermitian flag.
double expectation(const OperatorMatrix& op, const StateVector& s);

/// |<a|b>|^2, insensitive to global phase.
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace mdep
