#include "rydbec/lindblad.hpp"

#include <cmath>
#include <sstream>

#include "rydbec/entanglement.hpp"

namespace rydbec {

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw ValidationError("IntegratorConfig: dt must be > 0");
    if (t_final < 0.0) throw ValidationError("IntegratorConfig: t_final must be >= 0");
    if (sample_every < 1) throw ValidationError("IntegratorConfig: sample_every must be >= 1");
    if (!(trace_tolerance > 0.0)) {
        throw ValidationError("IntegratorConfig: trace_tolerance must be > 0");
    }
}

Matrix hamiltonian_matrix(const SystemParams& p, const FockSpec& spec) {
    p.validate();
    spec.validate();
    const Eigen::Index d = 4 * spec.dim();
    Matrix h = Matrix::Zero(d, d);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int n = 0; n < spec.dim(); ++n) {
                h(composite_index(i, j, n, spec), composite_index(i, j, n, spec)) =
                    eigen_energy(p, i, j, n);
            }
        }
    }
    return h;
}

namespace {

// Elementwise master-equation generator. With H diagonal,
//   drho_kl = -i (E_k - E_l) rho_kl
//             + kappa [ sqrt((n_k+1)(n_l+1)) rho_{k+1,l+1} - (n_k+n_l)/2 rho_kl ]
// where n_k is the Fock digit of k and k+1 stays inside the same impurity
// block whenever n_k < N.
struct Generator {
    Eigen::VectorXd energy;  // physical units
    Eigen::VectorXd sqrt_n;  // sqrt(n), n = 0..N
    double kappa = 0.0;
    int nf = 1;              // N+1

    void apply(const Matrix& in, Matrix& out) const {
        const Eigen::Index d = in.rows();
        for (Eigen::Index l = 0; l < d; ++l) {
            const int nl = static_cast<int>(l % nf);
            for (Eigen::Index k = 0; k < d; ++k) {
                const int nk = static_cast<int>(k % nf);
                const Complex r = in(k, l);
                const double de = energy[k] - energy[l];
                Complex v(de * r.imag(), -de * r.real());
                if (kappa > 0.0) {
                    v -= (0.5 * kappa * (nk + nl)) * r;
                    if (nk + 1 < nf && nl + 1 < nf) {
                        v += (kappa * sqrt_n[nk + 1] * sqrt_n[nl + 1]) * in(k + 1, l + 1);
                    }
                }
                out(k, l) = v;
            }
        }
    }
};

Generator make_generator(const SystemParams& p, const FockSpec& spec) {
    Generator g;
    g.nf = spec.dim();
    g.kappa = p.kappa;
    g.energy.resize(4 * spec.dim());
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int n = 0; n < spec.dim(); ++n) {
                g.energy[composite_index(i, j, n, spec)] = eigen_energy(p, i, j, n);
            }
        }
    }
    g.sqrt_n.resize(spec.dim());
    for (int n = 0; n < spec.dim(); ++n) {
        g.sqrt_n[n] = std::sqrt(static_cast<double>(n));
    }
    return g;
}

}  // namespace

Matrix liouvillian_apply(const Matrix& rho, const SystemParams& p,
                         const Matrix& hamiltonian) {
    if (rho.rows() != rho.cols() || hamiltonian.rows() != hamiltonian.cols() ||
        rho.rows() != hamiltonian.rows() || rho.rows() % 4 != 0) {
        throw DimensionError("liouvillian_apply: dimension mismatch");
    }
    // The fast path relies on H being diagonal in |i j n>.
    for (Eigen::Index c = 0; c < hamiltonian.cols(); ++c) {
        for (Eigen::Index r = 0; r < hamiltonian.rows(); ++r) {
            if (r != c && hamiltonian(r, c) != Complex{0.0, 0.0}) {
                throw ValidationError("liouvillian_apply: hamiltonian must be diagonal");
            }
        }
    }
    p.validate();
    const FockSpec spec{static_cast<int>(rho.rows() / 4) - 1};
    Generator g = make_generator(p, spec);
    g.energy = hamiltonian.diagonal().real();
    Matrix out(rho.rows(), rho.cols());
    g.apply(rho, out);
    return out;
}

TrajectoryRecord evolve(const DensityOp& rho0, const SystemParams& p,
                        const FockSpec& spec, const IntegratorConfig& cfg) {
    p.validate();
    spec.validate();
    cfg.validate();
    if (p.lambda_c == 0.0) {
        throw ValidationError("evolve: lambda_c must be nonzero (dt is in scaled time)");
    }
    const int nf = spec.dim();
    const Eigen::Index d = 4 * nf;
    if (rho0.matrix.rows() != d) {
        throw DimensionError("evolve: rho0 inconsistent with the Fock cutoff");
    }

    const Generator gen = make_generator(p, spec);
    const double h = cfg.dt / p.lambda_c;  // physical step
    const long n_steps =
        cfg.t_final > 0.0
            ? static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-9))
            : 0;

    Matrix rho = rho0.matrix;
    Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
    TrajectoryRecord rec;

    auto record_sample = [&](long step) {
        tmp = rho.adjoint();
        rho = 0.5 * (rho + tmp);
        const double tau_now = static_cast<double>(step) * cfg.dt;
        const double tr = rho.trace().real();
        if (std::abs(tr - 1.0) > cfg.trace_tolerance) {
            std::ostringstream msg;
            msg << "evolve: trace drift " << std::abs(tr - 1.0)
                << " beyond tolerance at tau = " << tau_now;
            throw IntegrationError(msg.str(), tau_now);
        }
        double edge = 0.0;
        for (int b = 0; b < 4; ++b) {
            edge += rho(b * nf + spec.cutoff, b * nf + spec.cutoff).real();
        }
        rec.max_edge_population = std::max(rec.max_edge_population, edge);
        if (edge > 1e-6) rec.truncation_warning = true;
        if (edge > 1e-4) {
            std::ostringstream msg;
            msg << "evolve: population " << edge << " at the Fock edge n = "
                << spec.cutoff << " at tau = " << tau_now
                << "; raise the cutoff";
            throw TruncationError(msg.str(), edge);
        }

        Matrix red = partial_trace(rho, {2, 2, nf}, {0, 1});
        red /= red.trace();
        const DensityOp red_op = make_density(std::move(red), {2, 2});

        rec.tau.push_back(tau_now);
        rec.trace.push_back(tr);
        rec.purity.push_back(rho.squaredNorm());
        rec.c_mimi.push_back(wootters_concurrence(red_op));
        if (cfg.compute_negativities) {
            rec.neg_mimi.push_back(negativity(red_op, 1));
            const DensityOp full = make_density(Matrix(rho / tr), {2, 2, nf});
            rec.neg_mima.push_back(negativity(full, 2));
        }
        if (cfg.store_snapshots) rec.snapshots.push_back(rho);
    };

    record_sample(0);
    for (long s = 1; s <= n_steps; ++s) {
        gen.apply(rho, k1);
        tmp = rho + (0.5 * h) * k1;
        gen.apply(tmp, k2);
        tmp = rho + (0.5 * h) * k2;
        gen.apply(tmp, k3);
        tmp = rho + h * k3;
        gen.apply(tmp, k4);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (s % cfg.sample_every == 0 || s == n_steps) record_sample(s);
    }
    return rec;
}

}  // namespace rydbec
