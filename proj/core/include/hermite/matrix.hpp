#pragma once

#include "hermite/errors.hpp"
#include "hermite/numeric.hpp"

#include <cstddef>
#include <vector>

namespace hermite {

// Dense row-major matrix with value semantics.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T()) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<T>& data() const { return data_; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
    Matrix<T> t(a.cols(), a.rows(), a.rows() && a.cols() ? a(0, 0) : T());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
    require(a.cols() == b.rows() && a.cols() > 0, ErrorCode::InvariantBreach, "matrix shape mismatch");
    Matrix<T> c(a.rows(), b.cols(), a(0, 0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            T acc = a(i, 0) * b(0, j);
            for (std::size_t k = 1; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    return c;
}

using RationalMatrix = Matrix<Rational>;
using IntegerMatrix = Matrix<Integer>;

RationalMatrix rational_identity(std::size_t n);
Rational determinant(RationalMatrix a);
RationalMatrix inverse(const RationalMatrix& a);
// Solves a x = b for square nonsingular a.
std::vector<Rational> solve(const RationalMatrix& a, const std::vector<Rational>& b);

// Symmetric decomposition a = L^t diag(d) L with L unit upper triangular,
// so q(x) = sum_i d_i (x_i + sum_{j>i} L(i,j) x_j)^2. Returns false when a
// leading principal minor vanishes.
struct LdlData {
    RationalMatrix upper;
    std::vector<Rational> diag;
};
bool ldl_decompose(const RationalMatrix& a, LdlData& out);

// Column-style Hermite normal form of the lattice spanned by the columns of
// gens (m x k integer). Returns a square m x m upper triangular basis with
// positive diagonal, and transform (k x m) with gens * transform = basis.
struct HermiteForm {
    IntegerMatrix basis;
    IntegerMatrix transform;
};
HermiteForm column_hnf(const IntegerMatrix& gens);

} // namespace hermite
