#pragma once

#include "hermite/field.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hermite {

using FieldMatrix = Matrix<FieldElement>;

FieldMatrix field_identity(const Field& field, std::size_t n);
FieldMatrix field_zero_matrix(const Field& field, std::size_t rows, std::size_t cols);
FieldMatrix to_field_matrix(const Field& field, const RationalMatrix& m);
FieldElement field_determinant(FieldMatrix a);
// Throws Singular.
FieldMatrix field_inverse(const FieldMatrix& a);
bool is_integral(const FieldMatrix& m);

// Symmetric Gram matrix over K.
class GramForm {
public:
    GramForm() = default;
    // Throws InvalidInput unless square and symmetric.
    explicit GramForm(FieldMatrix entries);
    static GramForm identity(const Field& field, std::size_t n);

    const Field& field() const { return entries_(0, 0).field(); }
    std::size_t n() const { return entries_.rows(); }
    const FieldElement& operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
    const FieldMatrix& entries() const { return entries_; }
    bool is_integral() const { return integral_; }

    FieldElement evaluate(const std::vector<FieldElement>& x) const;

    friend bool operator==(const GramForm& a, const GramForm& b) { return a.entries_ == b.entries_; }

private:
    FieldMatrix entries_;
    bool integral_ = false;
};

// Q[T] = T^t Q T.
GramForm transform(const GramForm& q, const FieldMatrix& t);

// Q = U^t H U with U unipotent upper triangular and H = diag(outer).
struct LagrangeData {
    std::vector<FieldElement> outer;
    FieldMatrix unipotent;

    const FieldElement& inner(std::size_t i, std::size_t j) const { return unipotent(i, j); }
    std::size_t n() const { return outer.size(); }
};

// Throws SingularMinor when a leading principal minor vanishes.
LagrangeData lagrange_expand(const GramForm& q);
GramForm assemble(const LagrangeData& data);

struct DeterminantData {
    FieldElement det;
    Rational norm;
};
DeterminantData determinant_data(const GramForm& q);

// Exact inverse Gram matrix; throws Singular.
GramForm dual_form(const GramForm& q);

bool is_positive_definite(const GramForm& q);

struct RandomFormParams {
    long entry_bound = 2;  // coordinates of M lie in [-entry_bound, entry_bound]
    long shift_bound = 2;  // tp coordinates of the diagonal shift lie in [1, shift_bound]
};
// M^t M + diag(c_i) with M random integral and c_i totally positive.
GramForm random_pd_form(const Field& field, std::size_t n, std::uint64_t seed, const RandomFormParams& params = {});

// Embedding images of a matrix over K, one real matrix per embedding.
class HumbertMatrix {
public:
    HumbertMatrix() = default;
    explicit HumbertMatrix(std::vector<Matrix<Interval>> components) : components_(std::move(components)) {}
    static HumbertMatrix embed(const FieldMatrix& m, mpfr_prec_t prec = default_precision);

    std::size_t d() const { return components_.size(); }
    const Matrix<Interval>& operator[](std::size_t nu) const { return components_[nu]; }
    Matrix<Interval>& operator[](std::size_t nu) { return components_[nu]; }

private:
    std::vector<Matrix<Interval>> components_;
};

// Matrix files: one row per line, entries separated by commas, '#' comments.
FieldMatrix parse_field_matrix(const Field& field, const std::string& text);
std::string format_field_matrix(const FieldMatrix& m);
FieldMatrix read_field_matrix_file(const Field& field, const std::string& path);
GramForm read_form_file(const Field& field, const std::string& path);

} // namespace hermite
