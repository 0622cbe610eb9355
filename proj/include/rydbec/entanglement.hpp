#pragma once

// Entanglement monotones: Wootters concurrence for two qubits, the X-state
// shortcut, the two-component pure-state concurrence, and negativity.

#include <complex>

#include "rydbec/hilbert.hpp"

namespace rydbec {

// Concurrence of an arbitrary 4x4 two-qubit density operator. Clamped to
// [0,1]. Throws ValidationError for inputs with eigenvalues below
// -tol::positivity.
double wootters_concurrence(const DensityOp& rho);

// Concurrence of the X-form matrix
//   [ w 0 0 z ; 0 x 0 0 ; 0 0 x 0 ; z* 0 0 y ]  ->  max{0, 2|z| - 2x}.
// Requires w + 2x + y = 1 and |z|^2 <= w y within tolerance.
double x_form_concurrence(double w, double x, double y, Complex z);

// Two-component pure state (mu |eta>|gamma> + nu |xi>|delta>) / N with
// subsystem overlaps p1 = <eta|xi>, p2 = <delta|gamma> and
// N^2 = |mu|^2 + |nu|^2 + 2 Re(mu* nu p1 p2*).
struct TwoComponentDecomposition {
    Complex mu, nu;
    Complex p1, p2;
    double norm_n = 1.0;
};

// Computes norm_n from the overlaps; validates |p1|, |p2| <= 1.
TwoComponentDecomposition make_two_component(Complex mu, Complex nu,
                                             Complex p1, Complex p2);

// C = 2|mu||nu|/N^2 sqrt((1 - |p1|^2)(1 - |p2|^2))
double two_component_concurrence(const TwoComponentDecomposition& d);

// Sum of the magnitudes of the negative eigenvalues of the partial
// transpose over the named subsystem; 0 for PPT states.
double negativity(const DensityOp& rho, int transposed);

}  // namespace rydbec
