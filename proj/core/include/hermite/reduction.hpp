#pragma once

#include "hermite/constants.hpp"
#include "hermite/form.hpp"
#include "hermite/lattice_enum.hpp"

#include <string>
#include <vector>

namespace hermite {

enum class ReductionMode { Hkz, Balanced };
enum class Level { None, Weakly, Hkz, Balanced };
std::string to_string(ReductionMode mode);
std::string to_string(Level level);

struct ReductionResult {
    FieldMatrix transform;  // T in GL_n(O)
    GramForm reduced;       // Q[T]
    LagrangeData lagrange;  // expansion of Q[T]
    std::vector<FieldMatrix> layers;  // Z_1, ..., Z_{n-1} for balanced runs
    ReductionMode mode = ReductionMode::Hkz;
};

struct SizeReduction {
    LagrangeData data;
    FieldMatrix transform;
};
// Subtracts ring multiples of earlier columns so every inner coefficient lies
// in the covering box; the outer coefficients are unchanged.
SizeReduction size_reduce(const LagrangeData& data, FieldMatrix transform);

// Square matrix over O with first column y and unit determinant; y must be
// unimodular.
FieldMatrix unimodular_completion(const std::vector<FieldElement>& y);

ReductionResult hkz_reduce(const GramForm& q, const EnumOptions& opts = {});

struct BalancedUnipotent {
    FieldMatrix y;                    // unipotent over O
    std::vector<FieldMatrix> layers;  // Z_k supported on the k-th superdiagonal
};
// X Y = exp(Z_1) ... exp(Z_{n-1}) with every Z_k entry in the covering box.
BalancedUnipotent balance_unipotent(const FieldMatrix& x);
FieldMatrix nilpotent_exp(const FieldMatrix& z);

ReductionResult balanced_hkz_reduce(const GramForm& q, const EnumOptions& opts = {});

struct Margin {
    std::string name;
    Interval value;  // should not exceed 1
    bool holds = false;
};

struct Certificate {
    Level level = Level::None;
    bool weakly = false;
    bool hkz = false;
    bool balanced = false;
    bool prop37 = false;       // diagonal and determinant bounds
    bool cross_check = false;  // h_i^(nu) <= lambda^2 alpha_bar(n)^(1/d) h_j^(mu)
    Rational minimum;
    LagrangeData lagrange;
    std::vector<Margin> margins;
    std::vector<std::string> failures;
};

Certificate verify(const GramForm& q, const ConstantsTable& constants, const EnumOptions& opts = {});
std::string format_certificate(const Certificate& c);

} // namespace hermite
