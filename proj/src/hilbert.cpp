#include "rydbec/hilbert.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace rydbec {

void SystemParams::validate() const {
    const double fields[] = {omega, j_coupling, lambda_c, omega_b, chi, kappa};
    for (double f : fields) {
        if (!std::isfinite(f)) {
            throw ValidationError("SystemParams: all fields must be finite");
        }
    }
    if (kappa < 0.0) {
        throw ValidationError("SystemParams: kappa must be >= 0");
    }
}

void FockSpec::validate() const {
    if (cutoff < 0) {
        throw ValidationError("FockSpec: cutoff must be >= 0");
    }
}

FockSpec FockSpec::for_coherent(Complex alpha) {
    const double a = std::abs(alpha);
    return FockSpec{static_cast<int>(std::ceil(a * a + 8.0 * a + 10.0))};
}

BecState make_bec_state(Vector amplitudes) {
    if (amplitudes.size() == 0) {
        throw DimensionError("BecState: empty amplitude vector");
    }
    const double n = amplitudes.norm();
    if (std::abs(n - 1.0) > tol::norm) {
        std::ostringstream msg;
        msg << "BecState: norm " << n << " deviates from 1 beyond tolerance";
        throw ValidationError(msg.str());
    }
    return BecState{std::move(amplitudes)};
}

CoherentState coherent_amplitudes(Complex alpha, const FockSpec& spec, double budget) {
    spec.validate();
    Vector amps(spec.dim());
    // c_n = e^{-|a|^2/2} a^n / sqrt(n!), built up iteratively so no
    // intermediate factorial overflows.
    amps[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= spec.cutoff; ++n) {
        amps[n] = amps[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    }
    const double kept = amps.squaredNorm();
    const double tail = std::max(0.0, 1.0 - kept);
    if (tail > budget) {
        std::ostringstream msg;
        msg << "coherent_amplitudes: cutoff " << spec.cutoff << " keeps only "
            << kept << " of the weight for |alpha| = " << std::abs(alpha)
            << " (tail " << tail << " exceeds budget " << budget << ")";
        throw TruncationError(msg.str(), tail);
    }
    const double renorm = 1.0 / std::sqrt(kept);
    amps *= renorm;
    return CoherentState{BecState{std::move(amps)}, tail, renorm};
}

CompositeState make_composite_state(Vector amplitudes, FockSpec fock) {
    fock.validate();
    if (amplitudes.size() != 4 * fock.dim()) {
        throw DimensionError("CompositeState: amplitude length must be 4(N+1)");
    }
    const double n = amplitudes.norm();
    if (std::abs(n - 1.0) > tol::norm) {
        std::ostringstream msg;
        msg << "CompositeState: norm " << n << " deviates from 1 beyond tolerance";
        throw ValidationError(msg.str());
    }
    return CompositeState{std::move(amplitudes), fock};
}

CompositeState product_state(double theta, const BecState& bec) {
    const FockSpec fock{bec.cutoff()};
    Vector amps = Vector::Zero(4 * fock.dim());
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (int n = 0; n < fock.dim(); ++n) {
        amps[composite_index(0, 0, n, fock)] = c * bec.amplitudes[n];
        amps[composite_index(1, 1, n, fock)] = s * bec.amplitudes[n];
    }
    return make_composite_state(std::move(amps), fock);
}

DensityOp make_density(Matrix matrix, std::vector<Eigen::Index> dims) {
    if (matrix.rows() != matrix.cols()) {
        throw DimensionError("DensityOp: matrix must be square");
    }
    Eigen::Index expected = 1;
    for (Eigen::Index d : dims) {
        if (d <= 0) throw DimensionError("DensityOp: subsystem dimensions must be positive");
        expected *= d;
    }
    if (expected != matrix.rows()) {
        throw DimensionError("DensityOp: subsystem dimensions inconsistent with matrix size");
    }
    const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::norm) {
        std::ostringstream msg;
        msg << "DensityOp: Hermiticity residual " << herm << " beyond tolerance";
        throw ValidationError(msg.str());
    }
    const double tr_err = std::abs(matrix.trace() - Complex(1.0, 0.0));
    if (tr_err > tol::norm) {
        std::ostringstream msg;
        msg << "DensityOp: trace deviates from 1 by " << tr_err;
        throw ValidationError(msg.str());
    }
    return DensityOp{std::move(matrix), std::move(dims)};
}

DensityOp density_from_pure(const CompositeState& state) {
    Matrix rho = state.amplitudes * state.amplitudes.adjoint();
    return make_density(std::move(rho),
                        {2, 2, static_cast<Eigen::Index>(state.fock.dim())});
}

namespace {

// Strides of the slowest-first mixed-radix basis index.
std::vector<Eigen::Index> strides_of(const std::vector<Eigen::Index>& dims) {
    std::vector<Eigen::Index> stride(dims.size());
    Eigen::Index s = 1;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        stride[k] = s;
        s *= dims[k];
    }
    return stride;
}

// Full-space offsets of every linear index over the given subsystem subset.
std::vector<Eigen::Index> subset_offsets(const std::vector<Eigen::Index>& dims,
                                         const std::vector<Eigen::Index>& stride,
                                         const std::vector<int>& subset) {
    Eigen::Index count = 1;
    for (int s : subset) count *= dims[s];
    std::vector<Eigen::Index> offsets(count);
    for (Eigen::Index lin = 0; lin < count; ++lin) {
        Eigen::Index rest = lin;
        Eigen::Index off = 0;
        for (int k = static_cast<int>(subset.size()) - 1; k >= 0; --k) {
            const Eigen::Index d = dims[subset[k]];
            off += (rest % d) * stride[subset[k]];
            rest /= d;
        }
        offsets[lin] = off;
    }
    return offsets;
}

void check_dims(const Matrix& rho, const std::vector<Eigen::Index>& dims) {
    Eigen::Index total = 1;
    for (Eigen::Index d : dims) total *= d;
    if (rho.rows() != rho.cols() || rho.rows() != total) {
        throw DimensionError("subsystem dimensions inconsistent with matrix size");
    }
}

}  // namespace

Matrix partial_trace(const Matrix& rho, const std::vector<Eigen::Index>& dims,
                     const std::vector<int>& keep) {
    check_dims(rho, dims);
    if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
    std::vector<bool> kept(dims.size(), false);
    for (int s : keep) {
        if (s < 0 || s >= static_cast<int>(dims.size()) || kept[s]) {
            throw DimensionError("partial_trace: invalid keep set");
        }
        kept[s] = true;
    }
    std::vector<int> traced;
    for (int s = 0; s < static_cast<int>(dims.size()); ++s) {
        if (!kept[s]) traced.push_back(s);
    }
    const auto stride = strides_of(dims);
    const auto keep_off = subset_offsets(dims, stride, keep);
    const auto trace_off = subset_offsets(dims, stride, traced);

    const Eigen::Index dk = static_cast<Eigen::Index>(keep_off.size());
    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index c = 0; c < dk; ++c) {
        for (Eigen::Index r = 0; r < dk; ++r) {
            Complex sum{0.0, 0.0};
            for (Eigen::Index t : trace_off) {
                sum += rho(keep_off[r] + t, keep_off[c] + t);
            }
            out(r, c) = sum;
        }
    }
    return out;
}

DensityOp partial_trace(const DensityOp& rho, const std::vector<int>& keep) {
    Matrix out = partial_trace(rho.matrix, rho.dims, keep);
    std::vector<Eigen::Index> new_dims;
    for (int s : keep) new_dims.push_back(rho.dims[s]);
    return make_density(std::move(out), std::move(new_dims));
}

Matrix partial_transpose(const Matrix& rho, const std::vector<Eigen::Index>& dims,
                         int transposed) {
    check_dims(rho, dims);
    if (transposed < 0 || transposed >= static_cast<int>(dims.size())) {
        throw DimensionError("partial_transpose: invalid subsystem index");
    }
    const auto stride = strides_of(dims);
    const Eigen::Index st = stride[transposed];
    const Eigen::Index dt = dims[transposed];

    Matrix out(rho.rows(), rho.cols());
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        const Eigen::Index dc = (c / st) % dt;
        const Eigen::Index c_rest = c - dc * st;
        for (Eigen::Index r = 0; r < rho.rows(); ++r) {
            const Eigen::Index dr = (r / st) % dt;
            const Eigen::Index r_rest = r - dr * st;
            out(r_rest + dc * st, c_rest + dr * st) = rho(r, c);
        }
    }
    return out;
}

DensityOp partial_transpose(const DensityOp& rho, int transposed) {
    Matrix out = partial_transpose(rho.matrix, rho.dims, transposed);
    return make_density(std::move(out), rho.dims);
}

}  // namespace rydbec
