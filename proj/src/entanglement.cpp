#include "rydbec/entanglement.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rydbec {

namespace {

// sigma_y (x) sigma_y in the |00>,|01>,|10>,|11> basis (real).
Matrix spin_flip_matrix() {
    Matrix s = Matrix::Zero(4, 4);
    s(0, 3) = -1.0;
    s(1, 2) = 1.0;
    s(2, 1) = 1.0;
    s(3, 0) = -1.0;
    return s;
}

}  // namespace

double wootters_concurrence(const DensityOp& rho) {
    if (rho.dim() != 4 || rho.dims != std::vector<Eigen::Index>{2, 2}) {
        throw DimensionError("wootters_concurrence: expected a 4x4 two-qubit operator");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix);
    Eigen::VectorXd evals = es.eigenvalues();
    if (evals.minCoeff() < -tol::positivity) {
        std::ostringstream msg;
        msg << "wootters_concurrence: eigenvalue " << evals.minCoeff()
            << " below physical tolerance";
        throw ValidationError(msg.str());
    }
    evals = evals.cwiseMax(0.0);
    const Matrix sqrt_rho = es.eigenvectors() *
                            evals.cwiseSqrt().asDiagonal() *
                            es.eigenvectors().adjoint();

    // The lambda_i are the square roots of the spectrum of the Hermitian
    // PSD form sqrt(rho) (yy) rho* (yy) sqrt(rho) = B B+ with
    // B = sqrt(rho) (yy) sqrt(rho)*. Taking the singular values of B keeps
    // the small lambda_i at full absolute precision, where the eigenvalue
    // route loses half the digits to the final square root.
    const Matrix flip = spin_flip_matrix();
    const Matrix b = sqrt_rho * flip * sqrt_rho.conjugate();
    Eigen::JacobiSVD<Matrix> svd(b);
    const Eigen::VectorXd& lam = svd.singularValues();  // descending
    const double c = lam[0] - lam[1] - lam[2] - lam[3];
    return std::clamp(c, 0.0, 1.0);
}

double x_form_concurrence(double w, double x, double y, Complex z) {
    const double trace_err = std::abs(w + 2.0 * x + y - 1.0);
    if (trace_err > 1e-8) {
        std::ostringstream msg;
        msg << "x_form_concurrence: w + 2x + y deviates from 1 by " << trace_err;
        throw ValidationError(msg.str());
    }
    if (w < -tol::positivity || x < -tol::positivity || y < -tol::positivity ||
        std::norm(z) > w * y + tol::positivity) {
        throw ValidationError("x_form_concurrence: matrix is not positive semidefinite");
    }
    return std::clamp(2.0 * std::abs(z) - 2.0 * x, 0.0, 1.0);
}

TwoComponentDecomposition make_two_component(Complex mu, Complex nu,
                                             Complex p1, Complex p2) {
    if (std::abs(p1) > 1.0 + tol::norm || std::abs(p2) > 1.0 + tol::norm) {
        throw ValidationError("TwoComponentDecomposition: overlap modulus exceeds 1");
    }
    const double n2 = std::norm(mu) + std::norm(nu) +
                      2.0 * std::real(std::conj(mu) * nu * p1 * std::conj(p2));
    if (n2 <= 0.0) {
        throw ValidationError("TwoComponentDecomposition: vanishing norm");
    }
    return TwoComponentDecomposition{mu, nu, p1, p2, std::sqrt(n2)};
}

double two_component_concurrence(const TwoComponentDecomposition& d) {
    if (std::abs(d.p1) > 1.0 + tol::norm || std::abs(d.p2) > 1.0 + tol::norm) {
        throw ValidationError("two_component_concurrence: overlap modulus exceeds 1");
    }
    if (!(d.norm_n > 0.0)) {
        throw ValidationError("two_component_concurrence: norm must be positive");
    }
    const double f1 = std::max(0.0, 1.0 - std::norm(d.p1));
    const double f2 = std::max(0.0, 1.0 - std::norm(d.p2));
    return 2.0 * std::abs(d.mu) * std::abs(d.nu) / (d.norm_n * d.norm_n) *
           std::sqrt(f1 * f2);
}

double negativity(const DensityOp& rho, int transposed) {
    const Matrix pt = partial_transpose(rho.matrix, rho.dims, transposed);
    Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw ValidationError("negativity: eigensolver failed on the partial transpose");
    }
    double sum = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double lam = es.eigenvalues()[k];
        if (lam < -tol::negativity_floor) sum -= lam;
    }
    return sum;
}

}  // namespace rydbec
