#pragma once

#include <complex>

#include "rydbec/errors.hpp"

namespace rydbec {

namespace tol {
// Absolute tolerance for state norms, traces and Hermiticity residuals.
inline constexpr double norm = 1e-10;
// How far below zero a density-operator eigenvalue may dip before the
// state is rejected as unphysical rather than treated as roundoff.
inline constexpr double positivity = 1e-10;
// Default admissible tail weight lost to Fock truncation.
inline constexpr double truncation_budget = 1e-10;
// Partial-transpose eigenvalues above -this are eigensolver roundoff,
// not genuine negativity, and do not enter the negativity sum.
inline constexpr double negativity_floor = 1e-14;
}  // namespace tol

// The six scalars that parametrize the two-impurity + single-mode model.
// All frequencies/energies share one unit system (hbar = 1); kappa is a
// rate in the same units.
struct SystemParams {
    double omega = 0.0;       // impurity transition frequency
    double j_coupling = 0.0;  // impurity-impurity van der Waals strength
    double lambda_c = 0.0;    // impurity-condensate coupling
    double omega_b = 0.0;     // condensate mode frequency
    double chi = 0.0;         // Kerr self-interaction strength
    double kappa = 0.0;       // condensate decay rate, >= 0

    void validate() const;
};

// Truncated Fock space: indices 0..cutoff are retained (dimension cutoff+1).
struct FockSpec {
    int cutoff = 0;

    int dim() const { return cutoff + 1; }

    // Cutoff rule N = ceil(|alpha|^2 + 8|alpha| + 10). The Poisson tail
    // beyond this N keeps coherent-state overlaps accurate to ~1e-8 for
    // |alpha| <= 5.
    static FockSpec for_coherent(std::complex<double> alpha);

    void validate() const;
};

}  // namespace rydbec
