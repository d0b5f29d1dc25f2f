#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "qcst/matcore.hpp"
#include "qcst/matrix_io.hpp"
#include "qcst/rng.hpp"

namespace qcst {

// ---------------------------------------------------------------------------
// Random and reference states
// ---------------------------------------------------------------------------

/// Ginibre-induced rank-r state: rho = G G^dag / Tr(G G^dag) with G a d x r
/// matrix of standard complex Gaussians. Uniform over rank-r states in the
/// Hilbert-Schmidt-induced sense; r = 1 gives Haar-random pure states.
inline DensityMatrix random_rank_r_density(int d, int r, RngStream& rng) {
    if (d < 1) throw InvalidInputError("random_rank_r_density: d must be >= 1");
    if (r < 1 || r > d) throw InvalidInputError("random_rank_r_density: need 1 <= r <= d");
    ComplexMatrix g(d, r);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < r; ++j)
            g(i, j) = rng.complex_gaussian();
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = (rho + rho.adjoint()) / 2.0;
    return DensityMatrix(std::move(rho), r);
}

inline DensityMatrix random_rank_r_density(int d, int r, std::uint64_t seed) {
    RngStream rng = RngStream::derive(seed, {});
    return random_rank_r_density(d, r, rng);
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix,
/// with the R diagonal phases absorbed so the distribution is exactly Haar.
inline ComplexMatrix haar_unitary(int d, RngStream& rng) {
    ComplexMatrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            g(i, j) = rng.complex_gaussian();
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < d; ++j) {
        Complex diag = r(j, j);
        double mag = std::abs(diag);
        q.col(j) *= (mag > 0) ? diag / mag : Complex(1, 0);
    }
    return q;
}

enum class PaperState { Rho1, Rho2 };

/// Rho1 = |0><0|; Rho2 = (1/d) sum_{i,j} |i><j| (rank 1, every entry 1/d).
inline DensityMatrix paper_state(PaperState which, int d = 7) {
    if (d < 2) throw InvalidInputError("paper_state: d must be >= 2");
    if (which == PaperState::Rho1) {
        ComplexMatrix m = ComplexMatrix::Zero(d, d);
        m(0, 0) = 1.0;
        return DensityMatrix(std::move(m), 1);
    }
    ComplexMatrix m = ComplexMatrix::Constant(d, d, Complex(1.0 / d, 0.0));
    return DensityMatrix(std::move(m), 1);
}

enum class StateKind { HaarPure, HaarRankR, Rho1, Rho2, FromFile };

struct StateSpec {
    int dim = 2;
    int rank = 1;
    StateKind kind = StateKind::HaarPure;
    std::uint64_t seed = 0;
    std::string path; // FromFile only
};

inline DensityMatrix make_state(const StateSpec& spec) {
    switch (spec.kind) {
        case StateKind::HaarPure:
            return random_rank_r_density(spec.dim, 1, spec.seed);
        case StateKind::HaarRankR:
            return random_rank_r_density(spec.dim, spec.rank, spec.seed);
        case StateKind::Rho1:
            return paper_state(PaperState::Rho1, spec.dim);
        case StateKind::Rho2:
            return paper_state(PaperState::Rho2, spec.dim);
        case StateKind::FromFile:
            return DensityMatrix(load_matrix(spec.path));
    }
    throw InvalidInputError("make_state: unknown state kind");
}

// ---------------------------------------------------------------------------
// Ancilla embedding
// ---------------------------------------------------------------------------

/// System dimension d1 and ancilla dimension d2, the smallest power of two
/// with d2 >= d1 (so d1 <= d2 < 2 d1).
struct EmbeddingPlan {
    int d1 = 0;
    int d2 = 0;
};

inline EmbeddingPlan plan_embedding(int d1) {
    if (d1 < 2) throw InvalidInputError("plan_embedding: d1 must be >= 2");
    return {d1, static_cast<int>(std::bit_ceil(static_cast<unsigned>(d1)))};
}

/// The swap unitary on C^{d1} (system) tensor C^{d2} (ancilla):
///   W = sum_{i,j < d1} |i_S><j_S| x |j_A><i_A|  +  sum_{k >= d1} 1_S x |k_A><k_A|.
/// It exchanges the system with the first d1 ancilla levels and leaves the
/// remaining ancilla levels alone. Tensor index convention: (s, a) -> s*d2 + a.
inline ComplexMatrix build_swap_W(const EmbeddingPlan& plan) {
    if (plan.d1 < 1 || plan.d2 < plan.d1)
        throw InvalidInputError("build_swap_W: invalid embedding plan");
    const int d1 = plan.d1, d2 = plan.d2;
    const Eigen::Index n = static_cast<Eigen::Index>(d1) * d2;
    ComplexMatrix w = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d1; ++j)
            w(static_cast<Eigen::Index>(i) * d2 + j, static_cast<Eigen::Index>(j) * d2 + i) = 1.0;
    for (int s = 0; s < d1; ++s)
        for (int k = d1; k < d2; ++k)
            w(static_cast<Eigen::Index>(s) * d2 + k, static_cast<Eigen::Index>(s) * d2 + k) = 1.0;
    return w;
}

/// Zero-pad rho into the top-left d1 x d1 block of a d2 x d2 state.
inline DensityMatrix embed(const DensityMatrix& rho, const EmbeddingPlan& plan) {
    if (rho.dim() != plan.d1)
        throw InvalidInputError("embed: state dimension does not match plan.d1");
    ComplexMatrix m = ComplexMatrix::Zero(plan.d2, plan.d2);
    m.topLeftCorner(plan.d1, plan.d1) = rho.mat();
    return DensityMatrix(std::move(m), rho.rank_hint());
}

/// Top-left block plus the Frobenius mass of everything outside it.
/// No validation or renormalization; extract() builds on this.
struct BlockSplit {
    ComplexMatrix block;
    double leakage = 0.0;
};

inline BlockSplit split_block(const ComplexMatrix& m, int d1) {
    if (d1 < 1 || d1 > m.rows() || m.rows() != m.cols())
        throw InvalidInputError("split_block: bad block size");
    BlockSplit out;
    out.block = m.topLeftCorner(d1, d1);
    double total_sq = m.squaredNorm();
    double block_sq = out.block.squaredNorm();
    out.leakage = std::sqrt(std::max(total_sq - block_sq, 0.0));
    return out;
}

struct ExtractResult {
    DensityMatrix state;
    double leakage = 0.0;
};

/// Cut the top-left d1 x d1 block and renormalize it to unit trace. Nuclear
/// norm solutions are not trace constrained, so the renormalization is part
/// of the contract; leakage above tolerance is an error, not a warning.
inline ExtractResult extract(const ComplexMatrix& rho_a, int d1,
                             double leakage_tol = default_tolerances.block_leakage) {
    BlockSplit split = split_block(rho_a, d1);
    if (split.leakage > leakage_tol)
        throw BlockLeakageError("extract: mass outside the top-left block exceeds tolerance",
                                split.leakage);
    double tr = split.block.trace().real();
    if (tr <= 0.0)
        throw InvalidInputError("extract: block trace is not positive");
    ComplexMatrix m = split.block / tr;
    m = (m + m.adjoint()) / 2.0;
    return {DensityMatrix(std::move(m)), split.leakage};
}

inline ExtractResult extract(const DensityMatrix& rho_a, int d1,
                             double leakage_tol = default_tolerances.block_leakage) {
    return extract(rho_a.mat(), d1, leakage_tol);
}

// ---------------------------------------------------------------------------
// Dilation Hamiltonian check
// ---------------------------------------------------------------------------

/// Residuals for the dilation H = [[0, W], [W^dag, 0]] of a unitary W:
/// H^2 = identity, exp(-i H pi/2) = -i H, and the finite series
/// exp(-i H t) = cos(t) 1 - i sin(t) H at a list of sample times.
struct DilationReport {
    double h_squared_residual = 0.0;
    double exp_residual = 0.0; // || exp(-i H pi/2) + i H ||_F
    std::vector<double> series_residuals;
    double max_series_residual = 0.0;
};

inline DilationReport dilation_check(const ComplexMatrix& w,
                                     const std::vector<double>& times = {0.3, 1.0,
                                                                         1.5707963267948966},
                                     const Tolerances& tol = default_tolerances) {
    if (w.rows() != w.cols())
        throw InvalidInputError("dilation_check: W must be square");
    const Eigen::Index n = w.rows();
    double unitarity = (w * w.adjoint() - ComplexMatrix::Identity(n, n)).norm();
    if (unitarity > tol.unitary_residual)
        throw InvalidInputError("dilation_check: W is not unitary within tolerance");

    ComplexMatrix h = ComplexMatrix::Zero(2 * n, 2 * n);
    h.topRightCorner(n, n) = w;
    h.bottomLeftCorner(n, n) = w.adjoint();

    DilationReport report;
    report.h_squared_residual =
        (h * h - ComplexMatrix::Identity(2 * n, 2 * n)).norm();

    EigResult eig = hermitian_eig(h);
    auto exp_minus_iht = [&](double t) {
        ComplexVector phases(eig.eigenvalues.size());
        for (Eigen::Index i = 0; i < phases.size(); ++i)
            phases(i) = std::exp(Complex(0, -eig.eigenvalues(i) * t));
        return ComplexMatrix(eig.eigenvectors * phases.asDiagonal() *
                             eig.eigenvectors.adjoint());
    };

    const double half_pi = 1.5707963267948966;
    report.exp_residual = (exp_minus_iht(half_pi) + Complex(0, 1) * h).norm();

    for (double t : times) {
        ComplexMatrix series = std::cos(t) * ComplexMatrix::Identity(2 * n, 2 * n) -
                               Complex(0, 1) * std::sin(t) * h;
        report.series_residuals.push_back((exp_minus_iht(t) - series).norm());
    }
    for (double r : report.series_residuals)
        report.max_series_residual = std::max(report.max_series_residual, r);
    return report;
}

} // namespace qcst
