#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qcst/matcore.hpp"

namespace qcst {

static_assert(std::endian::native == std::endian::little,
              "binary matrix format assumes a little-endian host");

// Text format: header line "d <rows> <cols>", then one line per row of
// whitespace-separated "re,im" pairs.
// Binary format: uint64 rows, uint64 cols, then rows*cols little-endian
// doubles interleaved re,im in row-major order.

inline void write_matrix_text(std::ostream& os, const ComplexMatrix& m) {
    os << "d " << m.rows() << " " << m.cols() << "\n";
    os.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << " ";
            os << m(i, j).real() << "," << m(i, j).imag();
        }
        os << "\n";
    }
}

inline ComplexMatrix read_matrix_text(std::istream& is) {
    std::string tag;
    if (!(is >> tag)) throw IoError("matrix text: empty input");
    if (tag != "d") throw IoError("matrix text: expected header tag 'd', got '" + tag + "'");
    Eigen::Index rows = 0, cols = 0;
    if (!(is >> rows >> cols) || rows <= 0 || cols <= 0)
        throw IoError("matrix text: bad header dimensions");
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            std::string pair;
            if (!(is >> pair)) throw IoError("matrix text: truncated entries");
            auto comma = pair.find(',');
            if (comma == std::string::npos)
                throw IoError("matrix text: entry missing comma: '" + pair + "'");
            try {
                double re = std::stod(pair.substr(0, comma));
                double im = std::stod(pair.substr(comma + 1));
                m(i, j) = Complex(re, im);
            } catch (const std::exception&) {
                throw IoError("matrix text: unparsable entry: '" + pair + "'");
            }
        }
    }
    return m;
}

/// Reads consecutive text blocks until end of stream (used for basis dumps).
inline std::vector<ComplexMatrix> read_matrix_blocks_text(std::istream& is) {
    std::vector<ComplexMatrix> blocks;
    while (true) {
        is >> std::ws;
        if (is.peek() == std::char_traits<char>::eof()) break;
        blocks.push_back(read_matrix_text(is));
    }
    return blocks;
}

inline void write_matrix_binary(std::ostream& os, const ComplexMatrix& m) {
    std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
    std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
    os.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    os.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double re = m(i, j).real(), im = m(i, j).imag();
            os.write(reinterpret_cast<const char*>(&re), sizeof re);
            os.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
    }
}

inline ComplexMatrix read_matrix_binary(std::istream& is) {
    std::uint64_t rows = 0, cols = 0;
    is.read(reinterpret_cast<char*>(&rows), sizeof rows);
    is.read(reinterpret_cast<char*>(&cols), sizeof cols);
    if (!is || rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 20))
        throw IoError("matrix binary: bad header");
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double re = 0, im = 0;
            is.read(reinterpret_cast<char*>(&re), sizeof re);
            is.read(reinterpret_cast<char*>(&im), sizeof im);
            if (!is) throw IoError("matrix binary: truncated data");
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

enum class MatrixFileFormat { Text, Binary };

inline void save_matrix(const std::string& path, const ComplexMatrix& m,
                        MatrixFileFormat fmt = MatrixFileFormat::Text) {
    std::ofstream os(path, fmt == MatrixFileFormat::Binary ? std::ios::binary : std::ios::out);
    if (!os) throw IoError("cannot open for writing: " + path);
    if (fmt == MatrixFileFormat::Binary)
        write_matrix_binary(os, m);
    else
        write_matrix_text(os, m);
    if (!os) throw IoError("write failed: " + path);
}

inline ComplexMatrix load_matrix(const std::string& path,
                                 MatrixFileFormat fmt = MatrixFileFormat::Text) {
    std::ifstream is(path, fmt == MatrixFileFormat::Binary ? std::ios::binary : std::ios::in);
    if (!is) throw IoError("cannot open for reading: " + path);
    return fmt == MatrixFileFormat::Binary ? read_matrix_binary(is) : read_matrix_text(is);
}

} // namespace qcst
