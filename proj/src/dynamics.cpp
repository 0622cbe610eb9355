#include "rydbec/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace rydbec {

namespace {
constexpr Complex kImag{0.0, 1.0};

inline double sign_of(int bit) { return bit == 0 ? 1.0 : -1.0; }
}  // namespace

double eigen_energy(const SystemParams& p, int i, int j, int n) {
    const double si = sign_of(i);
    const double sj = sign_of(j);
    const double nd = static_cast<double>(n);
    return 0.5 * p.omega * (si + sj) + si * sj * p.j_coupling +
           0.5 * p.lambda_c * (si + sj) * nd + p.omega_b * nd +
           p.chi * nd * (nd - 1.0);
}

double running_phase(const SystemParams& p, Branch branch, int n) {
    const double nd = static_cast<double>(n);
    const double common = -p.chi * nd * (nd - 1.0) - p.omega_b * nd - p.j_coupling;
    if (branch == Branch::zero) {
        return p.lambda_c * nd + p.omega + common;
    }
    return -p.lambda_c * nd - p.omega + common;
}

EvolvedBranchState evolve_branch(const BecState& bec0, const SystemParams& p,
                                 Branch branch, double t) {
    Vector amps(bec0.amplitudes.size());
    for (int n = 0; n < bec0.amplitudes.size(); ++n) {
        amps[n] = bec0.amplitudes[n] * std::exp(kImag * (t * running_phase(p, branch, n)));
    }
    return EvolvedBranchState{branch, BecState{std::move(amps)}, t};
}

Complex branch_overlap(const BecState& bec0, const SystemParams& p, double t) {
    const auto phi0 = evolve_branch(bec0, p, Branch::zero, t);
    const auto phi1 = evolve_branch(bec0, p, Branch::one, t);
    // Eigen's dot conjugates its first argument: <phi_1|phi_0>.
    return phi1.state.amplitudes.dot(phi0.state.amplitudes);
}

Complex xi_coherent(double theta, Complex alpha, const SystemParams& p, double t) {
    const double a2 = std::norm(alpha);
    const Complex exponent =
        2.0 * kImag * p.omega * t -
        a2 * (1.0 - std::exp(2.0 * kImag * p.lambda_c * t));
    return 0.5 * std::sin(2.0 * theta) * std::exp(exponent);
}

DensityOp reduced_impurity_rho(double theta, const BecState& bec0,
                               const SystemParams& p, double t) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex xi = 0.5 * std::sin(2.0 * theta) * branch_overlap(bec0, p, t);
    Matrix rho = Matrix::Zero(4, 4);
    rho(0, 0) = c * c;
    rho(3, 3) = s * s;
    rho(0, 3) = xi;
    rho(3, 0) = std::conj(xi);
    return make_density(std::move(rho), {2, 2});
}

double concurrence_mimi_closed(double theta, Complex alpha,
                               const SystemParams& p, double t) {
    const double c0 = std::abs(std::sin(2.0 * theta));
    const double a2 = std::norm(alpha);
    const double value = c0 * std::exp(a2 * (std::cos(2.0 * p.lambda_c * t) - 1.0));
    return std::clamp(value, 0.0, 1.0);
}

double concurrence_mimi_general(double theta, const BecState& bec0,
                                const SystemParams& p, double t) {
    Complex sum{0.0, 0.0};
    for (int n = 0; n < bec0.amplitudes.size(); ++n) {
        sum += std::norm(bec0.amplitudes[n]) *
               std::exp(2.0 * kImag * (t * p.lambda_c * static_cast<double>(n)));
    }
    const double value = std::abs(std::sin(2.0 * theta)) * std::abs(sum);
    return std::clamp(value, 0.0, 1.0);
}

double concurrence_mima_closed(double theta, Complex alpha,
                               const SystemParams& p, double t) {
    const double c0 = std::abs(std::sin(2.0 * theta));
    const double a2 = std::norm(alpha);
    const double p2sq = std::exp(2.0 * a2 * (std::cos(2.0 * p.lambda_c * t) - 1.0));
    const double value = c0 * std::sqrt(std::max(0.0, 1.0 - p2sq));
    return std::clamp(value, 0.0, 1.0);
}

double concurrence_mima_general(double theta, const BecState& bec0,
                                const SystemParams& p, double t) {
    const double p2sq = std::norm(branch_overlap(bec0, p, t));
    const double value =
        std::abs(std::sin(2.0 * theta)) * std::sqrt(std::max(0.0, 1.0 - p2sq));
    return std::clamp(value, 0.0, 1.0);
}

double complementarity_residual(double theta, const BecState& bec0,
                                const SystemParams& p, double t) {
    const double c1 = concurrence_mimi_general(theta, bec0, p, t);
    const double c2 = concurrence_mima_general(theta, bec0, p, t);
    const double c10 = std::abs(std::sin(2.0 * theta));
    return c1 * c1 + c2 * c2 - c10 * c10;
}

}  // namespace rydbec
