#pragma once

namespace qcst {

/// Central numeric tolerance record. All validation thresholds live here so
/// tests can tighten (or callers relax) them in one place. Residual norms are
/// Frobenius unless stated otherwise.
struct Tolerances {
    /// Hermiticity: ||A - A^dag||_F <= hermitian_rel * max(1, ||A||_F).
    double hermitian_rel = 1e-12;
    /// Density matrices: smallest eigenvalue may not fall below this.
    double density_min_eig = -1e-10;
    /// Density matrices: |Tr - 1| bound.
    double density_trace = 1e-10;
    /// psd_sqrt rejects inputs with eigenvalues below this.
    double psd_sqrt_min_eig = -1e-8;
    /// Fidelity clamps input eigenvalues in [fidelity_clamp_min, 0) to zero.
    double fidelity_clamp_min = -1e-8;
    /// Numerical rank: eigenvalues > rank_rel * lambda_max count. Ties round down.
    double rank_rel = 1e-10;
    /// extract(): allowed mass outside the top-left block.
    double block_leakage = 1e-6;
    /// measure(): allowed imaginary part of an expectation value.
    double measure_imag = 1e-12;
    /// dilation_check(): unitarity required of the input.
    double unitary_residual = 1e-10;
};

inline constexpr Tolerances default_tolerances{};

} // namespace qcst
