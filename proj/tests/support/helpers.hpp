#pragma once

#include "qcst/matcore.hpp"
#include "qcst/rng.hpp"

namespace testutil {

inline qcst::ComplexMatrix random_complex(int rows, int cols, qcst::RngStream& rng) {
    qcst::ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_gaussian();
    return m;
}

inline qcst::ComplexMatrix random_hermitian(int d, qcst::RngStream& rng) {
    qcst::ComplexMatrix g = random_complex(d, d, rng);
    return (g + g.adjoint()) / 2.0;
}

/// The fixed 3x3 complex matrix whose singular values were computed in an
/// independent environment and frozen below.
inline qcst::ComplexMatrix frozen_3x3() {
    qcst::ComplexMatrix m(3, 3);
    m << qcst::Complex(1, 2), qcst::Complex(0.5, -1), qcst::Complex(-0.25, 0.75),
        qcst::Complex(2, -0.5), qcst::Complex(-1, 1), qcst::Complex(0.125, 0),
        qcst::Complex(0, 1.5), qcst::Complex(0.75, 0.25), qcst::Complex(-0.5, -2);
    return m;
}

inline constexpr double frozen_3x3_nuclear = 7.0275589118579216;
inline constexpr double frozen_3x3_operator = 3.7555700936825009;
inline constexpr double frozen_3x3_frobenius = 4.5017357763422767;

} // namespace testutil
