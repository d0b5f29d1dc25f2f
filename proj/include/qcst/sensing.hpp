#pragma once

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "qcst/bases.hpp"
#include "qcst/matcore.hpp"
#include "qcst/rng.hpp"

namespace qcst {

/// A sampled set of measurement settings Omega (sorted, distinct indices into
/// an operator basis) and the real expectation values b_a = Tr(w_a rho).
struct MeasurementRecord {
    BasisKind basis_kind = BasisKind::SuD;
    int dim = 0;
    std::vector<int> omega;
    RealVector values;

    int m() const { return static_cast<int>(omega.size()); }
};

/// m distinct indices drawn uniformly from all size-m subsets of [0, pool),
/// returned sorted. Partial Fisher-Yates over an index array, so the result
/// is a deterministic function of the stream.
inline std::vector<int> sample_omega(int pool, int m, RngStream& rng) {
    if (pool < 1) throw InvalidInputError("sample_omega: pool must be positive");
    if (m < 1 || m > pool) throw InvalidInputError("sample_omega: need 0 < m <= pool");
    std::vector<int> idx(static_cast<std::size_t>(pool));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < m; ++i) {
        const std::uint64_t j = i + rng.uniform_below(static_cast<std::uint64_t>(pool - i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(m));
    std::sort(idx.begin(), idx.end());
    return idx;
}

/// Sampling with replacement (sensitivity studies only; indices may repeat,
/// returned sorted).
inline std::vector<int> sample_omega_with_replacement(int pool, int m, RngStream& rng) {
    if (pool < 1) throw InvalidInputError("sample_omega: pool must be positive");
    if (m < 1) throw InvalidInputError("sample_omega: m must be positive");
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (auto& i : idx) i = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(pool)));
    std::sort(idx.begin(), idx.end());
    return idx;
}

inline std::vector<int> full_omega(const OperatorBasis& basis) {
    std::vector<int> idx(static_cast<std::size_t>(basis.size()));
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

/// Expectation values b_k = Tr(w_{omega[k]} rho). The imaginary part must
/// vanish (Hermitian observable, Hermitian state); it is checked and dropped.
inline MeasurementRecord measure(const DensityMatrix& rho, const OperatorBasis& basis,
                                 const std::vector<int>& omega,
                                 const Tolerances& tol = default_tolerances) {
    if (rho.dim() != basis.dim())
        throw InvalidInputError("measure: state and basis dimensions differ");
    MeasurementRecord record;
    record.basis_kind = basis.kind();
    record.dim = basis.dim();
    record.omega = omega;
    record.values.resize(static_cast<Eigen::Index>(omega.size()));
    for (std::size_t k = 0; k < omega.size(); ++k) {
        int a = omega[k];
        if (a < 0 || a >= basis.size())
            throw InvalidInputError("measure: omega index out of range");
        Complex value = trace_inner(basis.element(a), rho.mat());
        if (std::abs(value.imag()) > tol.measure_imag)
            throw InvalidInputError("measure: expectation value has a non-real component");
        record.values(static_cast<Eigen::Index>(k)) = value.real();
    }
    return record;
}

/// Adjoint of the sensing map: sum_k coeffs[k] * w_{omega[k]}.
inline HermitianMatrix sensing_adjoint(const MeasurementRecord& record,
                                       const OperatorBasis& basis, const RealVector& coeffs) {
    if (coeffs.size() != static_cast<Eigen::Index>(record.omega.size()))
        throw InvalidInputError("sensing_adjoint: coefficient length does not match omega");
    if (record.dim != basis.dim() || record.basis_kind != basis.kind())
        throw InvalidInputError("sensing_adjoint: record does not match basis");
    ComplexMatrix out = ComplexMatrix::Zero(basis.dim(), basis.dim());
    for (std::size_t k = 0; k < record.omega.size(); ++k)
        out += coeffs(static_cast<Eigen::Index>(k)) * basis.element(record.omega[k]);
    return HermitianMatrix(std::move(out));
}

/// The linear map A(X)_k = <w_{omega[k]}, X> and its adjoint, precompiled to
/// the nonzero entries of the selected elements. Basis elements here are very
/// sparse (Pauli words have one entry per row, SU(d) generators at most d),
/// so this is what makes the solver iteration cheap.
class SensingMap {
public:
    SensingMap(const OperatorBasis& basis, std::vector<int> omega)
        : dim_(basis.dim()), omega_(std::move(omega)) {
        entries_.resize(omega_.size());
        for (std::size_t k = 0; k < omega_.size(); ++k) {
            int a = omega_[k];
            if (a < 0 || a >= basis.size())
                throw InvalidInputError("SensingMap: omega index out of range");
            const ComplexMatrix& w = basis.element(a);
            for (Eigen::Index i = 0; i < w.rows(); ++i)
                for (Eigen::Index j = 0; j < w.cols(); ++j)
                    if (w(i, j) != Complex(0, 0))
                        entries_[k].push_back({i, j, w(i, j)});
        }
    }

    int dim() const { return dim_; }
    int m() const { return static_cast<int>(omega_.size()); }
    const std::vector<int>& omega() const { return omega_; }

    /// <w_k, X> for one selected element; real part only (Hermitian pairing).
    double row_inner(std::size_t k, const ComplexMatrix& x) const {
        double acc = 0.0;
        for (const Entry& e : entries_[k])
            acc += (std::conj(e.value) * x(e.row, e.col)).real();
        return acc;
    }

    RealVector apply(const ComplexMatrix& x) const {
        RealVector out(static_cast<Eigen::Index>(entries_.size()));
        for (std::size_t k = 0; k < entries_.size(); ++k)
            out(static_cast<Eigen::Index>(k)) = row_inner(k, x);
        return out;
    }

    ComplexMatrix apply_adjoint(const RealVector& y) const {
        ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
        add_adjoint(y, out);
        return out;
    }

    /// out += sum_k y_k w_k, touching only stored nonzeros.
    void add_adjoint(const RealVector& y, ComplexMatrix& out) const {
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            const double c = y(static_cast<Eigen::Index>(k));
            if (c == 0.0) continue;
            for (const Entry& e : entries_[k]) out(e.row, e.col) += c * e.value;
        }
    }

    /// Exact projection onto {X : A(X) = b}: X = M - A^dag(A(M) - b).
    /// Exact because the selected basis rows are orthonormal.
    ComplexMatrix project_affine(const ComplexMatrix& m, const RealVector& b) const {
        ComplexMatrix out = m;
        RealVector correction = b - apply(m);
        add_adjoint(correction, out);
        return out;
    }

private:
    struct Entry {
        Eigen::Index row, col;
        Complex value;
    };

    int dim_;
    std::vector<int> omega_;
    std::vector<std::vector<Entry>> entries_;
};

// ---------------------------------------------------------------------------
// Record serialization: header "basis=<kind> d=<d> m=<m>", then "index value"
// lines.
// ---------------------------------------------------------------------------

inline void write_record(std::ostream& os, const MeasurementRecord& record) {
    os << "basis=" << to_string(record.basis_kind) << " d=" << record.dim
       << " m=" << record.m() << "\n";
    os.precision(17);
    for (int k = 0; k < record.m(); ++k)
        os << record.omega[static_cast<std::size_t>(k)] << " " << record.values(k) << "\n";
}

inline MeasurementRecord read_record(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw IoError("record: empty input");
    MeasurementRecord record;
    int m = -1;
    std::istringstream hs(header);
    std::string field;
    while (hs >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) throw IoError("record: malformed header field: " + field);
        std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        if (key == "basis")
            record.basis_kind = basis_kind_from_string(value);
        else if (key == "d")
            record.dim = std::stoi(value);
        else if (key == "m")
            m = std::stoi(value);
        else
            throw IoError("record: unknown header field: " + key);
    }
    if (record.dim <= 0 || m < 0) throw IoError("record: incomplete header");
    record.omega.resize(static_cast<std::size_t>(m));
    record.values.resize(m);
    for (int k = 0; k < m; ++k) {
        if (!(is >> record.omega[static_cast<std::size_t>(k)] >> record.values(k)))
            throw IoError("record: truncated entries");
    }
    return record;
}

inline void save_record(const std::string& path, const MeasurementRecord& record) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_record(os, record);
}

inline MeasurementRecord load_record(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open for reading: " + path);
    return read_record(is);
}

} // namespace qcst
