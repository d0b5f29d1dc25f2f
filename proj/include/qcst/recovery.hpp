#pragma once

#include <cmath>
#include <functional>

#include "qcst/matcore.hpp"
#include "qcst/sensing.hpp"

namespace qcst {

struct SolverOptions {
    double penalty = 1.0;
    int max_iters = 5000;
    double eps_abs = 1e-7;
    double eps_rel = 1e-6;
    double constraint_tol = 1e-6;
    bool adaptive_penalty = false;
    bool psd = false;

    void validate() const {
        if (penalty <= 0 || eps_abs <= 0 || eps_rel <= 0 || constraint_tol <= 0)
            throw InvalidInputError("SolverOptions: tolerances and penalty must be positive");
        if (max_iters < 1) throw InvalidInputError("SolverOptions: max_iters must be positive");
    }
};

struct RecoveryResult {
    ComplexMatrix sigma_star;
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double constraint_residual = 0.0;
    double nuclear_value = 0.0;
    bool converged = false;
};

/// Called once per iteration with the current Z iterate (post-threshold).
using IterateObserver = std::function<void(int iter, const ComplexMatrix& z)>;

namespace detail {

/// Eigenvalue soft-threshold: lambda -> sign(lambda) max(|lambda| - tau, 0),
/// or max(lambda - tau, 0) when a positive semidefinite iterate is requested.
/// Returns the thresholded matrix and accumulates the surviving |lambda| sum.
inline ComplexMatrix eig_soft_threshold(const ComplexMatrix& x, double tau, bool psd,
                                        double& nuclear_value) {
    ComplexMatrix sym = Complex(0.5, 0.0) * (x + x.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eig_soft_threshold: eigendecomposition failed");
    RealVector lambda = es.eigenvalues();
    nuclear_value = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        double v = lambda(i);
        double shrunk = psd ? std::max(v - tau, 0.0) : std::copysign(std::max(std::abs(v) - tau, 0.0), v);
        lambda(i) = shrunk;
        nuclear_value += std::abs(shrunk);
    }
    return es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace detail

/// Nuclear-norm minimization subject to the sampled expectation constraints,
/// by ADMM splitting min ||Z||_* over A(X) = b, X = Z:
///   X <- Pi_affine(Z - U)
///   Z <- eigenvalue soft-threshold of X + U at 1/penalty
///   U <- U + X - Z
/// Converged when primal and dual residuals pass the usual absolute/relative
/// bounds and Z itself satisfies the constraints to constraint_tol.
inline RecoveryResult recover(const OperatorBasis& basis, const MeasurementRecord& record,
                              const SolverOptions& opts = {},
                              const IterateObserver& observer = nullptr) {
    opts.validate();
    if (record.dim != basis.dim() || record.basis_kind != basis.kind())
        throw InvalidInputError("recover: record does not match basis");
    const int d = basis.dim();
    const SensingMap sensing(basis, record.omega);
    const RealVector& b = record.values;

    double rho = opts.penalty;
    ComplexMatrix z = sensing.apply_adjoint(b);
    ComplexMatrix u = ComplexMatrix::Zero(d, d);
    ComplexMatrix x = z;

    RecoveryResult result;
    double nuclear = 0.0;
    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        x = sensing.project_affine(z - u, b);
        ComplexMatrix z_prev = std::move(z);
        z = detail::eig_soft_threshold(x + u, 1.0 / rho, opts.psd, nuclear);
        u += x - z;
        if (observer) observer(iter, z);

        const double r_norm = (x - z).norm();
        const double s_norm = rho * (z - z_prev).norm();
        const double eps_pri =
            d * opts.eps_abs + opts.eps_rel * std::max(x.norm(), z.norm());
        const double eps_dual = d * opts.eps_abs + opts.eps_rel * (rho * u).norm();
        const double constraint = (sensing.apply(z) - b).norm();

        result.iterations = iter;
        result.primal_residual = r_norm;
        result.dual_residual = s_norm;
        result.constraint_residual = constraint;
        if (r_norm <= eps_pri && s_norm <= eps_dual && constraint <= opts.constraint_tol) {
            result.converged = true;
            break;
        }
        // Residual balancing can limit-cycle if left on forever; freezing it
        // restores the fixed-penalty convergence guarantee for the tail.
        if (opts.adaptive_penalty && iter <= 1000) {
            if (r_norm > 10.0 * s_norm) {
                rho *= 2.0;
                u *= 0.5;
            } else if (s_norm > 10.0 * r_norm) {
                rho *= 0.5;
                u *= 2.0;
            }
        }
    }
    result.nuclear_value = nuclear;
    result.sigma_star = Complex(0.5, 0.0) * (z + z.adjoint().eval());
    return result;
}

/// Independent check solver: fixed-point continuation on the penalized
/// problem min mu ||sigma||_* + (1/2) ||A(sigma) - b||^2. Each stage runs
/// accelerated proximal-gradient steps sigma <- SVT_mu(y - A^dag(A(y) - b))
/// with gradient-restarted momentum (unit step is safe; A A^dag = I on the
/// sampled rows), shrinking mu by 4x per stage. Looser convergence
/// certificate than the ADMM route; intended for cross-checks, not
/// production runs.
inline RecoveryResult recover_reference(const OperatorBasis& basis,
                                        const MeasurementRecord& record,
                                        const SolverOptions& opts = {}) {
    opts.validate();
    if (record.dim != basis.dim() || record.basis_kind != basis.kind())
        throw InvalidInputError("recover_reference: record does not match basis");
    const int d = basis.dim();
    const SensingMap sensing(basis, record.omega);
    const RealVector& b = record.values;

    ComplexMatrix sigma = sensing.apply_adjoint(b);
    ComplexMatrix y = sigma;
    double mu = std::max(1.0, b.cwiseAbs().maxCoeff());
    const double mu_final = 1e-8;
    const double inner_tol = 1e-5;
    double nuclear = 0.0;
    int total_iters = 0;

    RecoveryResult result;
    while (true) {
        double momentum = 1.0;
        y = sigma;
        for (int inner = 0; inner < 400 && total_iters < opts.max_iters; ++inner) {
            ++total_iters;
            RealVector residual = sensing.apply(y) - b;
            ComplexMatrix grad_step = y;
            sensing.add_adjoint(-residual, grad_step);
            ComplexMatrix next = detail::eig_soft_threshold(grad_step, mu, opts.psd, nuclear);
            if (trace_inner(y - next, next - sigma).real() > 0.0) {
                momentum = 1.0;
                y = sigma;
                continue;
            }
            double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
            y = next + Complex((momentum - 1.0) / momentum_next, 0.0) * (next - sigma);
            double step = (next - sigma).norm() / std::max(1.0, sigma.norm());
            sigma = std::move(next);
            momentum = momentum_next;
            if (step < inner_tol * std::min(1.0, mu)) break;
        }
        if (mu <= mu_final || total_iters >= opts.max_iters) break;
        mu = std::max(mu * 0.25, mu_final);
    }

    result.sigma_star = Complex(0.5, 0.0) * (sigma + sigma.adjoint().eval());
    result.iterations = total_iters;
    result.constraint_residual = (sensing.apply(result.sigma_star) - b).norm();
    result.nuclear_value = nuclear;
    result.converged = result.constraint_residual <= 1e-4 * std::max(1.0, b.norm());
    return result;
}

struct SuccessCriterion {
    enum class Kind { Fidelity, FrobeniusError };
    Kind kind = Kind::Fidelity;
    double fidelity_threshold = 0.999;
    double frobenius_tol = 1e-3;
};

/// Whether a recovered iterate counts as a successful reconstruction of the
/// known truth. The fidelity route clamps the iterate to the density-matrix
/// cone first (soft-thresholding can leave slightly negative directions).
inline bool success(const DensityMatrix& truth, const ComplexMatrix& sigma_star,
                    const SuccessCriterion& criterion = {}) {
    switch (criterion.kind) {
        case SuccessCriterion::Kind::FrobeniusError:
            return (truth.mat() - sigma_star).norm() <= criterion.frobenius_tol;
        case SuccessCriterion::Kind::Fidelity: {
            ComplexMatrix clamped = psd_clamp(sigma_star);
            double trace = clamped.trace().real();
            if (trace <= 0.0) return false;
            clamped /= trace;
            return fidelity(truth.mat(), clamped) >= criterion.fidelity_threshold;
        }
    }
    throw InvalidInputError("success: unknown criterion kind");
}

/// Fidelity between the truth and the clamped, renormalized iterate (the
/// quantity averaged in the sweeps).
inline double recovered_fidelity(const DensityMatrix& truth, const ComplexMatrix& sigma_star) {
    ComplexMatrix clamped = psd_clamp(sigma_star);
    double trace = clamped.trace().real();
    if (trace <= 0.0) return 0.0;
    clamped /= trace;
    return fidelity(truth.mat(), clamped);
}

inline bool run_success(const DensityMatrix& truth, const RecoveryResult& result,
                        const SuccessCriterion& criterion = {}) {
    return result.converged && success(truth, result.sigma_star, criterion);
}

} // namespace qcst
