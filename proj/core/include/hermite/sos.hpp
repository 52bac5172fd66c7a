#pragma once

#include "hermite/constants.hpp"
#include "hermite/form.hpp"
#include "hermite/lattice_enum.hpp"
#include "hermite/reduction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hermite {

struct RepresentOptions {
    std::size_t budget = 5'000'000;  // search nodes before BudgetExceeded
};

// c_1..c_k in O with sum c_i^2 = a. Returns nullopt when the bounded search
// box |c_i|_nu <= sqrt(a^(nu)) holds no solution.
std::optional<std::vector<FieldElement>> represent_element(const FieldElement& a, int k,
                                                           const RepresentOptions& opts = {});

// k x 2 matrix M over O with M^t M = b for a symmetric positive semidefinite 2 x 2 b.
std::optional<FieldMatrix> represent_binary(const FieldMatrix& b, int k, const RepresentOptions& opts = {});

// Integer helpers over Z, exposed for testing.
std::optional<std::vector<Integer>> two_squares(const Integer& n);
std::optional<std::vector<Integer>> three_squares(const Integer& n);
std::vector<Integer> four_squares(const Integer& n);

struct PairMatrix {
    FieldElement f_pi;
    FieldElement w_pi;
    FieldMatrix m;  // d x 2 with m^t m = [[f_pi, pi], [pi, w_pi]]
};
PairMatrix pair_matrix(const FieldElement& pi, long p, int ell);

// Lemma-style definiteness tests on Humbert data: with a split t (t_ij > 0,
// sum_j t_ij = a_i, t_ij t_ji > s_ij^2), or the scaled small-entry test
// |s_ij| < sqrt(a_i a_j) / n. Returns whether a hypothesis is certified.
bool pd_criteria(const std::vector<std::vector<Interval>>& a, const HumbertMatrix& s,
                 const std::optional<HumbertMatrix>& split = std::nullopt);

struct Block {
    std::string kind;  // "diagonal", "pair", "scaled"
    std::size_t i = 0;
    std::size_t j = 0;
    FieldMatrix gram;     // n x n contribution to A + S
    FieldMatrix witness;  // rows x n with witness^t witness = gram
};

struct BlockDecomposition {
    std::vector<FieldElement> b;  // diagonal remainders
    FieldMatrix pi;               // residues of s_ij in the residue system
    FieldMatrix pair_n;           // n_ij from the pairs
    FieldMatrix t_prime;
    FieldMatrix delta;
    FieldMatrix q;  // (s_ij - pi_ij) / p^l
    std::vector<Block> blocks;
};

struct DecomposeParams {
    long p = 2;
    int ell = 1;
    Integer gamma;
    long r_eff = 1;
    RepresentOptions represent;
};

// Block decomposition of A + S into diagonal, pair and p^l-scaled rank-2
// blocks, each with a sum-of-squares witness.
BlockDecomposition decompose_a_plus_s(const FieldMatrix& a, const FieldMatrix& s, const FieldMatrix& t,
                                      const DecomposeParams& params);

struct SosWitness {
    FieldMatrix forms;  // row i holds the coefficients of L_i
    std::vector<std::string> provenance;
    // Backbone intermediates on the reduced form Q' = Q[T].
    FieldMatrix transform;
    FieldMatrix p;
    FieldMatrix a;
    FieldMatrix s;
    std::vector<Margin> margins;
};

struct BackboneOptions {
    EnumOptions enumeration;
    RepresentOptions represent;
};

SosWitness backbone(const GramForm& q, const ConstantsTable& constants, const BackboneOptions& opts = {});

bool verify_sos(const GramForm& q, const SosWitness& w);
bool verify_sos(const GramForm& q, const FieldMatrix& forms);

std::string format_witness(const SosWitness& w);

} // namespace hermite
