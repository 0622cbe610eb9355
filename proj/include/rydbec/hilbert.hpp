#pragma once

// Truncated composite Hilbert space for two qubit impurities and one
// bosonic mode: basis bookkeeping, state construction, partial trace and
// partial transpose.
//
// Composite basis |i j n> with impurity labels i, j in {0,1} and Fock
// index n. The impurity pair varies slowest and the Fock index fastest,
//     k = (2i + j) * (N+1) + n,
// so the impurity blocks appear in the order |00>, |01>, |10>, |11> and
// tracing out the oscillator is a contiguous block sum.

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "rydbec/params.hpp"

namespace rydbec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct BasisLabels {
    int i, j, n;
};

inline Eigen::Index composite_index(int i, int j, int n, const FockSpec& spec) {
    return static_cast<Eigen::Index>(2 * i + j) * spec.dim() + n;
}

inline BasisLabels decode_index(Eigen::Index k, const FockSpec& spec) {
    const int block = static_cast<int>(k / spec.dim());
    const int n = static_cast<int>(k % spec.dim());
    return BasisLabels{block / 2, block % 2, n};
}

// Pure state of the bosonic mode as Fock amplitudes c_0..c_N.
struct BecState {
    Vector amplitudes;

    int cutoff() const { return static_cast<int>(amplitudes.size()) - 1; }
    double norm() const { return amplitudes.norm(); }
};

// Validates unit norm (within tol::norm).
BecState make_bec_state(Vector amplitudes);

// Coherent-state amplitudes truncated at spec.cutoff and renormalized.
// tail_weight is the Poisson weight beyond the cutoff; renormalization is
// the factor the kept amplitudes were multiplied by.
struct CoherentState {
    BecState state;
    double tail_weight = 0.0;
    double renormalization = 1.0;
};

CoherentState coherent_amplitudes(Complex alpha, const FockSpec& spec,
                                  double budget = tol::truncation_budget);

// Pure state of (qubit x qubit x truncated oscillator), dimension 4(N+1).
struct CompositeState {
    Vector amplitudes;
    FockSpec fock;

    double norm() const { return amplitudes.norm(); }
};

CompositeState make_composite_state(Vector amplitudes, FockSpec fock);

// (cos(theta)|00> + sin(theta)|11>) tensor bec.
CompositeState product_state(double theta, const BecState& bec);

// Hermitian trace-one operator together with the subsystem dimensions of
// the tensor factorization it lives on (e.g. {2,2} or {2,2,N+1}).
struct DensityOp {
    Matrix matrix;
    std::vector<Eigen::Index> dims;

    Eigen::Index dim() const { return matrix.rows(); }
};

// Validates Hermiticity and unit trace (within tol::norm). Positivity is
// not enforced here; consumers that need it check it themselves.
DensityOp make_density(Matrix matrix, std::vector<Eigen::Index> dims);

DensityOp density_from_pure(const CompositeState& state);

// Reduced operator over the kept subsystems (indices into dims, ascending).
DensityOp partial_trace(const DensityOp& rho, const std::vector<int>& keep);
Matrix partial_trace(const Matrix& rho, const std::vector<Eigen::Index>& dims,
                     const std::vector<int>& keep);

// Transposes the bra/ket indices of one subsystem. Result is Hermitian and
// trace one but generally not positive.
DensityOp partial_transpose(const DensityOp& rho, int transposed);
Matrix partial_transpose(const Matrix& rho, const std::vector<Eigen::Index>& dims,
                         int transposed);

}  // namespace rydbec
