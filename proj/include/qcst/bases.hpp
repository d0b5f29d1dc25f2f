#pragma once

#include <string>
#include <vector>

#include "qcst/matcore.hpp"

namespace qcst {

enum class BasisKind { PauliTensor, SuD };

inline std::string to_string(BasisKind k) {
    return k == BasisKind::PauliTensor ? "pauli" : "sud";
}

inline BasisKind basis_kind_from_string(const std::string& s) {
    if (s == "pauli") return BasisKind::PauliTensor;
    if (s == "sud") return BasisKind::SuD;
    throw InvalidInputError("unknown basis kind: '" + s + "' (expected pauli or sud)");
}

/// Ordered set of d^2 Hermitian matrices orthonormal under <X,Y> = Tr(X^dag Y).
///
/// PauliTensor (d = 2^n): element a is (sigma_{i1} x ... x sigma_{in}) / sqrt(d)
/// where (i1..in) are the base-4 digits of a, most significant first, and
/// sigma_0..sigma_3 = I, X, Y, Z. Element 0 is I/sqrt(d).
///
/// SuD (any d >= 2): normalized identity first, then symmetric
/// (|j><k| + |k><j|)/sqrt(2) for j<k in lexicographic (j,k) order, then
/// antisymmetric (-i|j><k| + i|k><j|)/sqrt(2) in the same order, then
/// diagonal h_l = diag(1,..,1,-l,0,..,0)/sqrt(l(l+1)) for l = 1..d-1.
class OperatorBasis {
public:
    static constexpr int default_dim_cap = 64;

    static OperatorBasis pauli(int n, int dim_cap = default_dim_cap) {
        if (n < 1) throw InvalidInputError("pauli_basis: n must be >= 1");
        if (n > 30 || (1 << n) > dim_cap)
            throw ResourceLimitError("pauli_basis: 2^n exceeds dimension cap");
        const int d = 1 << n;
        const double scale = 1.0 / std::sqrt(static_cast<double>(d));

        ComplexMatrix sigma[4];
        for (auto& s : sigma) s = ComplexMatrix::Zero(2, 2);
        sigma[0] << 1, 0, 0, 1;
        sigma[1] << 0, 1, 1, 0;
        sigma[2] << 0, Complex(0, -1), Complex(0, 1), 0;
        sigma[3] << 1, 0, 0, -1;

        OperatorBasis basis(BasisKind::PauliTensor, d);
        basis.elements_.reserve(static_cast<std::size_t>(d) * d);
        const int count = d * d; // 4^n
        for (int a = 0; a < count; ++a) {
            ComplexMatrix w = ComplexMatrix::Identity(1, 1);
            // digits of a in base 4, most significant first
            for (int pos = n - 1; pos >= 0; --pos) {
                int digit = (a >> (2 * pos)) & 3;
                w = kron(w, sigma[digit]);
            }
            basis.elements_.push_back(w * scale);
        }
        return basis;
    }

    static OperatorBasis sud(int d, int dim_cap = default_dim_cap) {
        if (d < 2) throw InvalidInputError("sud_basis: d must be >= 2");
        if (d > dim_cap) throw ResourceLimitError("sud_basis: d exceeds dimension cap");

        OperatorBasis basis(BasisKind::SuD, d);
        basis.elements_.reserve(static_cast<std::size_t>(d) * d);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

        basis.elements_.push_back(ComplexMatrix::Identity(d, d) /
                                  std::sqrt(static_cast<double>(d)));
        for (int j = 0; j < d; ++j)
            for (int k = j + 1; k < d; ++k) {
                ComplexMatrix w = ComplexMatrix::Zero(d, d);
                w(j, k) = inv_sqrt2;
                w(k, j) = inv_sqrt2;
                basis.elements_.push_back(std::move(w));
            }
        for (int j = 0; j < d; ++j)
            for (int k = j + 1; k < d; ++k) {
                ComplexMatrix w = ComplexMatrix::Zero(d, d);
                w(j, k) = Complex(0, -inv_sqrt2);
                w(k, j) = Complex(0, inv_sqrt2);
                basis.elements_.push_back(std::move(w));
            }
        for (int l = 1; l < d; ++l) {
            ComplexMatrix w = ComplexMatrix::Zero(d, d);
            const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
            for (int i = 0; i < l; ++i) w(i, i) = norm;
            w(l, l) = -static_cast<double>(l) * norm;
            basis.elements_.push_back(std::move(w));
        }
        return basis;
    }

    BasisKind kind() const { return kind_; }
    int dim() const { return dim_; }
    int size() const { return static_cast<int>(elements_.size()); }
    const ComplexMatrix& element(int a) const { return elements_.at(static_cast<std::size_t>(a)); }
    const std::vector<ComplexMatrix>& elements() const { return elements_; }

private:
    OperatorBasis(BasisKind kind, int dim) : kind_(kind), dim_(dim) {}

    BasisKind kind_;
    int dim_;
    std::vector<ComplexMatrix> elements_;
};

inline OperatorBasis pauli_basis(int n, int dim_cap = OperatorBasis::default_dim_cap) {
    return OperatorBasis::pauli(n, dim_cap);
}

inline OperatorBasis sud_basis(int d, int dim_cap = OperatorBasis::default_dim_cap) {
    return OperatorBasis::sud(d, dim_cap);
}

// ---------------------------------------------------------------------------
// Coherence parameters
// ---------------------------------------------------------------------------

struct CoherenceValue {
    double value = 0.0;
    int argmax = 0; // lowest index attaining the maximum
};

/// nu1 = d * max_a ||w_a||^2 (squared operator norm). State independent.
/// The squared norm of a Hermitian element is its largest squared eigenvalue.
inline CoherenceValue coherence_nu1(const OperatorBasis& basis) {
    CoherenceValue best{-1.0, 0};
    for (int a = 0; a < basis.size(); ++a) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(basis.element(a), Eigen::EigenvaluesOnly);
        const RealVector& lam = es.eigenvalues();
        double norm_sq = std::max(lam(0) * lam(0), lam(lam.size() - 1) * lam(lam.size() - 1));
        if (norm_sq > best.value) best = {norm_sq, a};
    }
    best.value *= basis.dim();
    return best;
}

/// Column-space projector factor of rho: the eigenvectors with eigenvalue
/// above rank_rel * lambda_max, as columns (so P_U = V V^dag).
inline ComplexMatrix range_factor(const DensityMatrix& rho,
                                  double rank_rel = default_tolerances.rank_rel) {
    EigResult eig = hermitian_eig(rho.mat());
    int r = numerical_rank(eig.eigenvalues, rank_rel);
    if (r == 0) throw InvalidInputError("range_factor: state has numerical rank zero");
    return eig.eigenvectors.rightCols(r);
}

/// Squared Frobenius norm of P w + w P - P w P for P = V V^dag, computed as
/// 2||V^dag w||^2 - ||V^dag w V||^2.
inline double coherence_expression_sq(const ComplexMatrix& w, const ComplexMatrix& v) {
    ComplexMatrix b = v.adjoint() * w;    // r x d
    double term1 = b.squaredNorm();
    double term2 = (b * v).squaredNorm(); // r x r
    return 2.0 * term1 - term2;
}

/// nu2 = (d / 2r) * max_a ||P_U w_a + w_a P_U - P_U w_a P_U||_F^2 where P_U
/// projects onto the span of the eigenvectors of rho with eigenvalue above
/// the rank threshold.
inline CoherenceValue coherence_nu2(const OperatorBasis& basis, const DensityMatrix& rho,
                                    double rank_rel = default_tolerances.rank_rel) {
    if (rho.dim() != basis.dim())
        throw InvalidInputError("coherence_nu2: state and basis dimensions differ");
    ComplexMatrix v = range_factor(rho, rank_rel);
    const int r = static_cast<int>(v.cols());
    CoherenceValue best{-1.0, 0};
    for (int a = 0; a < basis.size(); ++a) {
        double val = coherence_expression_sq(basis.element(a), v);
        if (val > best.value) best = {val, a};
    }
    best.value *= basis.dim() / (2.0 * r);
    return best;
}

/// nu = min(nu1, nu2) together with both components and their argmax indices.
struct CoherenceReport {
    double nu1 = 0.0;
    double nu2 = 0.0;
    double nu = 0.0;
    int argmax_index_nu1 = 0;
    int argmax_index_nu2 = 0;
};

inline CoherenceReport coherence_report(const OperatorBasis& basis, const DensityMatrix& rho,
                                        double rank_rel = default_tolerances.rank_rel) {
    CoherenceValue n1 = coherence_nu1(basis);
    CoherenceValue n2 = coherence_nu2(basis, rho, rank_rel);
    return {n1.value, n2.value, std::min(n1.value, n2.value), n1.argmax, n2.argmax};
}

/// For a pure state, the bound max_{i != j} rho_ii + rho_jj that the SU(d)
/// coherence expression reduces to.
inline double sud_pure_bound(const DensityMatrix& rho,
                             double rank_rel = default_tolerances.rank_rel) {
    if (rho.rank(rank_rel) != 1)
        throw InvalidInputError("sud_pure_bound: state must have rank 1");
    const Eigen::Index d = rho.dim();
    double best = -1.0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            if (i == j) continue;
            double s = rho.mat()(i, i).real() + rho.mat()(j, j).real();
            best = std::max(best, s);
        }
    return best;
}

} // namespace qcst
