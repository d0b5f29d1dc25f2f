#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qcst/errors.hpp"
#include "qcst/tolerances.hpp"

namespace qcst {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline bool all_finite(const ComplexMatrix& x) {
    return x.allFinite();
}

inline void require_finite(const ComplexMatrix& x, const char* who) {
    if (!all_finite(x))
        throw InvalidInputError(std::string(who) + ": matrix has non-finite entries");
}

/// Frobenius residual of A against its adjoint, relative to max(1, ||A||_F).
inline double hermiticity_residual(const ComplexMatrix& a) {
    return (a - a.adjoint()).norm() / std::max(1.0, a.norm());
}

inline bool is_hermitian(const ComplexMatrix& a, double rel_tol = default_tolerances.hermitian_rel) {
    return a.rows() == a.cols() && hermiticity_residual(a) <= rel_tol;
}

// ---------------------------------------------------------------------------
// Norms. Singular values of a general matrix come from Eigen's SVD; Hermitian
// callers (the solver hot path) use |eigenvalue| fast paths instead.
// ---------------------------------------------------------------------------

inline RealVector singular_values(const ComplexMatrix& x) {
    require_finite(x, "singular_values");
    Eigen::JacobiSVD<ComplexMatrix> svd(x);
    return svd.singularValues();
}

/// Sum of singular values.
inline double nuclear_norm(const ComplexMatrix& x) {
    return singular_values(x).sum();
}

/// sqrt(Tr(X^dag X)) = sqrt(sum of squared singular values).
inline double frobenius_norm(const ComplexMatrix& x) {
    require_finite(x, "frobenius_norm");
    return x.norm();
}

/// Largest singular value.
inline double operator_norm(const ComplexMatrix& x) {
    require_finite(x, "operator_norm");
    if (x.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(x);
    return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------
// Hermitian types
// ---------------------------------------------------------------------------

/// Square complex matrix validated to be Hermitian on construction:
/// ||A - A^dag||_F <= tol * max(1, ||A||_F). Entries are stored exactly as
/// given (no symmetrization), so callers see their own data.
class HermitianMatrix {
public:
    explicit HermitianMatrix(ComplexMatrix m, const Tolerances& tol = default_tolerances)
        : m_(std::move(m)) {
        require_finite(m_, "HermitianMatrix");
        if (m_.rows() != m_.cols())
            throw InvalidInputError("HermitianMatrix: matrix must be square");
        if (hermiticity_residual(m_) > tol.hermitian_rel)
            throw InvalidInputError("HermitianMatrix: not Hermitian within tolerance");
    }

    Eigen::Index dim() const { return m_.rows(); }
    const ComplexMatrix& mat() const { return m_; }

private:
    ComplexMatrix m_;
};

struct EigResult {
    RealVector eigenvalues;     // ascending
    ComplexMatrix eigenvectors; // columns, unitary
};

/// Eigendecomposition of a Hermitian matrix: A = V diag(lambda) V^dag with
/// eigenvalues ascending. This is the single dense decomposition the rest of
/// the library builds on (Hermitian singular values are |eigenvalues|).
inline EigResult hermitian_eig(const ComplexMatrix& a,
                               const Tolerances& tol = default_tolerances) {
    require_finite(a, "hermitian_eig");
    if (!is_hermitian(a, tol.hermitian_rel))
        throw InvalidInputError("hermitian_eig: input not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

inline EigResult hermitian_eig(const HermitianMatrix& a,
                               const Tolerances& tol = default_tolerances) {
    return hermitian_eig(a.mat(), tol);
}

/// Eigenvalues only (ascending), skipping eigenvector accumulation.
inline RealVector hermitian_eigenvalues(const ComplexMatrix& a,
                                        const Tolerances& tol = default_tolerances) {
    require_finite(a, "hermitian_eigenvalues");
    if (!is_hermitian(a, tol.hermitian_rel))
        throw InvalidInputError("hermitian_eigenvalues: input not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

/// Number of eigenvalues strictly above rank_rel * lambda_max.
inline int numerical_rank(const RealVector& eigenvalues_ascending,
                          double rank_rel = default_tolerances.rank_rel) {
    const Eigen::Index n = eigenvalues_ascending.size();
    if (n == 0) return 0;
    const double lambda_max = eigenvalues_ascending(n - 1);
    if (lambda_max <= 0.0) return 0;
    const double threshold = rank_rel * lambda_max;
    int r = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (eigenvalues_ascending(i) > threshold) ++r;
    return r;
}

/// PSD square root via eigendecomposition. Eigenvalues in
/// [psd_sqrt_min_eig, 0) are clamped at zero; anything lower is rejected.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& a,
                              const Tolerances& tol = default_tolerances) {
    EigResult eig = hermitian_eig(a, tol);
    RealVector roots(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        double lambda = eig.eigenvalues(i);
        if (lambda < tol.psd_sqrt_min_eig)
            throw InvalidInputError("psd_sqrt: input has a significantly negative eigenvalue");
        roots(i) = std::sqrt(std::max(lambda, 0.0));
    }
    ComplexMatrix b = eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
    return (b + b.adjoint()) / 2.0;
}

/// Projection onto the PSD cone: negative eigenvalues (of any magnitude) are
/// zeroed. Used to make solver iterates valid fidelity inputs.
inline ComplexMatrix psd_clamp(const ComplexMatrix& a,
                               const Tolerances& tol = default_tolerances) {
    EigResult eig = hermitian_eig(a, tol);
    RealVector clamped = eig.eigenvalues.cwiseMax(0.0);
    ComplexMatrix b = eig.eigenvectors * clamped.asDiagonal() * eig.eigenvectors.adjoint();
    return (b + b.adjoint()) / 2.0;
}

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

/// Hermitian, positive semidefinite (eigenvalues >= -1e-10), unit trace.
/// rank_hint records the construction rank when known.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m, std::optional<int> rank_hint = std::nullopt,
                           const Tolerances& tol = default_tolerances)
        : m_(std::move(m)), rank_hint_(rank_hint) {
        require_finite(m_, "DensityMatrix");
        if (m_.rows() != m_.cols())
            throw InvalidInputError("DensityMatrix: matrix must be square");
        if (hermiticity_residual(m_) > tol.hermitian_rel)
            throw InvalidInputError("DensityMatrix: not Hermitian within tolerance");
        if (std::abs(m_.trace().real() - 1.0) > tol.density_trace ||
            std::abs(m_.trace().imag()) > tol.density_trace)
            throw InvalidInputError("DensityMatrix: trace must be 1");
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) < tol.density_min_eig)
            throw InvalidInputError("DensityMatrix: negative eigenvalue beyond tolerance");
    }

    Eigen::Index dim() const { return m_.rows(); }
    const ComplexMatrix& mat() const { return m_; }
    std::optional<int> rank_hint() const { return rank_hint_; }

    /// Numerical rank (eigenvalues above rank_rel * lambda_max).
    int rank(double rank_rel = default_tolerances.rank_rel) const {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
        return numerical_rank(es.eigenvalues(), rank_rel);
    }

private:
    ComplexMatrix m_;
    std::optional<int> rank_hint_;
};

// ---------------------------------------------------------------------------
// Fidelity
// ---------------------------------------------------------------------------

/// Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
///
/// Accepts Hermitian near-PSD inputs: eigenvalues in [fidelity_clamp_min, 0)
/// are clamped to zero, anything lower is rejected. Run solver output through
/// psd_clamp first if it can be indefinite.
inline double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                       const Tolerances& tol = default_tolerances) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw InvalidInputError("fidelity: dimension mismatch");

    auto clamp_psd_checked = [&](const ComplexMatrix& a, const char* who) {
        EigResult eig = hermitian_eig(a, tol);
        for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
            if (eig.eigenvalues(i) < tol.fidelity_clamp_min)
                throw InvalidInputError(std::string("fidelity: ") + who +
                                        " has a significantly negative eigenvalue");
        RealVector lam = eig.eigenvalues.cwiseMax(0.0);
        return std::pair{eig.eigenvectors, lam};
    };

    auto [v_rho, lam_rho] = clamp_psd_checked(rho, "rho");
    auto [v_sig, lam_sig] = clamp_psd_checked(sigma, "sigma");

    RealVector sqrt_lam = lam_rho.cwiseSqrt();
    ComplexMatrix root_rho = v_rho * sqrt_lam.asDiagonal() * v_rho.adjoint();
    ComplexMatrix sigma_psd = v_sig * lam_sig.asDiagonal() * v_sig.adjoint();
    ComplexMatrix inner = root_rho * sigma_psd * root_rho;
    inner = (inner + inner.adjoint()) / 2.0;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(inner, Eigen::EigenvaluesOnly);
    const Eigen::Index n = es.eigenvalues().size();
    // Discard eigenvalues at the round-off floor: sqrt turns 1e-16-sized
    // noise into 1e-8-sized trace contributions otherwise.
    const double lambda_max = std::max(es.eigenvalues()(n - 1), 0.0);
    const double cutoff = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * lambda_max;
    double trace_root = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > cutoff) trace_root += std::sqrt(es.eigenvalues()(i));
    return trace_root * trace_root;
}

inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma,
                       const Tolerances& tol = default_tolerances) {
    return fidelity(rho.mat(), sigma.mat(), tol);
}

// ---------------------------------------------------------------------------
// Small helpers shared across modules
// ---------------------------------------------------------------------------

/// Kronecker product, row-major index convention: (i1,i2) -> i1*cols(b)+i2.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Trace inner product <X, Y> = Tr(X^dag Y).
inline Complex trace_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
    return (x.adjoint() * y).trace();
}

} // namespace qcst
