#pragma once

// Zero-temperature Born-Markov master equation for the composite state,
//   d rho / dt = -i [H, rho] + kappa (a rho a+ - 1/2 {a+ a, rho}),
// with the single collapse operator a acting on the mode factor. H is
// diagonal in |i j n>, so the commutator reduces to (E_k - E_l) rho_kl and
// the dissipator couples (n,m) to (n+1,m+1) inside the impurity blocks;
// each right-hand side evaluation is O(d^2), not O(d^3).

#include <vector>

#include "rydbec/dynamics.hpp"
#include "rydbec/hilbert.hpp"

namespace rydbec {

struct IntegratorConfig {
    double dt = 1e-3;              // step in scaled time tau = lambda t
    double t_final = 0.0;          // end of run, scaled time
    int sample_every = 1;          // record observables every this many steps
    double trace_tolerance = 1e-8; // admissible |Tr rho - 1| drift
    bool compute_negativities = false;  // also record neg_mimi / neg_mima
    bool store_snapshots = false;       // keep full rho at sample points

    void validate() const;
};

struct TrajectoryRecord {
    std::vector<double> tau;      // strictly increasing sample times
    std::vector<double> c_mimi;   // Wootters concurrence of the reduced pair
    std::vector<double> neg_mimi; // negativity of the reduced pair (optional)
    std::vector<double> neg_mima; // negativity across pair|mode (optional)
    std::vector<double> trace;
    std::vector<double> purity;
    std::vector<Matrix> snapshots;      // full rho, only if store_snapshots
    double max_edge_population = 0.0;   // largest population seen at n = N
    bool truncation_warning = false;    // edge population exceeded 1e-6
};

// Diagonal matrix with entry E_ijn at basis index (2i+j)(N+1)+n.
Matrix hamiltonian_matrix(const SystemParams& p, const FockSpec& spec);

// Right-hand side of the master equation; Tr of the result is 0.
Matrix liouvillian_apply(const Matrix& rho, const SystemParams& p,
                         const Matrix& hamiltonian);

// Fixed-step classical 4th-order integration. At each sample the state is
// re-Hermitized, trace drift is checked against cfg.trace_tolerance, and
// population at the Fock edge is checked (warning above 1e-6, error above
// 1e-4). Requires lambda_c != 0 since dt is given in scaled time.
TrajectoryRecord evolve(const DensityOp& rho0, const SystemParams& p,
                        const FockSpec& spec, const IntegratorConfig& cfg);

}  // namespace rydbec
