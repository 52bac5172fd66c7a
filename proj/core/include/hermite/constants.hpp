#pragma once

#include "hermite/field.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hermite {

struct OmegaSigma {
    Interval omega;         // volume of the n-dimensional unit ball
    Interval sigma;         // 4^d omega^(-2d/n) |d_K|
    Interval sigma_bound;   // (e^(-1+1/n) n^(1+1/n))^d |d_K|
    bool bound_holds = false;
};
OmegaSigma omega_sigma(const Field& field, int n, mpfr_prec_t prec = default_precision);

// 1 + 1/2 + ... + 1/m.
Rational harmonic(int m);
// alpha(m) = sigma_{m+1} prod_{k=2}^{m+1} sigma_k^(1/(k-1)).
Interval alpha_exact(const Field& field, int m, mpfr_prec_t prec = default_precision);

// Coefficient of x^m in exp(beta x / (1 - x)) as a polynomial in beta:
// sum_{k=1}^m binom(m-1, k-1) beta^k / k!, and 1 for m = 0.
Polynomial maclaurin_c(int m);
Interval evaluate_at(const Polynomial& p, const Interval& x);

// Residue system {sum f_i w_i : 1 <= f_i <= p^l} over the totally positive basis.
struct PairData {
    std::vector<Integer> f;  // coordinates over the totally positive basis
    FieldElement pi;
    FieldElement f_pi;  // sum f_i^2
    FieldElement w_pi;  // sum w_i^2
};
Integer prime_power(long p, int ell);
long default_prime(const Field& field);
// Throws RamifiedPrime when p divides d_K.
void require_unramified(const Field& field, long p);
// The element of the residue system congruent to s modulo p^l O.
PairData residue_representative(const Field& field, const FieldElement& s, long p, int ell);
// Throws NotInP unless pi lies in the residue system.
PairData pair_data(const Field& field, const FieldElement& pi, long p, int ell);
// Full residue system; throws NotResidueSystem if the classes do not cover O / p^l O.
std::vector<PairData> residue_system(const Field& field, long p, int ell);
// ceil(max over the residue system of the largest embedding of f_pi, w_pi, pi).
Integer gamma_constant(const Field& field, long p, int ell);
// Largest embedded value, used for the sup-embedding ceiling.
Rational sup_embedding_upper(const FieldElement& a);

// Frozen per-field effective constants, stored in the constants file.
struct EffectiveConstants {
    std::string field_name;
    int nmax = 64;
    long prime = 0;
    int ell = 1;          // effective l for rank-2 representations
    long r_eff = 1;       // effective trace bound for five squares
    long r_sweep_hi = 0;  // calibration range for r_eff
    long ell_corpus = 0;  // number of binary forms tried per l
    Rational d1;
    Rational d4;
    Rational d5;
    Rational xi;
};

struct Thresholds {
    Interval step1, step2, step3a, step3b, step3c;
    Interval max;
};

class ConstantsTable {
public:
    ConstantsTable(const Field& field, EffectiveConstants eff, mpfr_prec_t prec = default_precision);

    // Computes D1, D4 and (D5, xi) for the given calibration data.
    static EffectiveConstants derive(const Field& field, long prime, int ell, long r_eff, int nmax = 64,
                                     mpfr_prec_t prec = default_precision);

    const Field& field() const { return *field_; }
    const EffectiveConstants& effective() const { return eff_; }
    mpfr_prec_t precision() const { return prec_; }

    Interval beta() const;
    Rational lambda() const { return field_->lambda_impl(); }
    Interval d3() const { return field_->unit_data().d3; }

    OmegaSigma omega_sigma(int n) const { return hermite::omega_sigma(*field_, n, prec_); }
    Interval sigma(int n) const { return omega_sigma(n).sigma; }
    Interval alpha(int m) const { return alpha_exact(*field_, m, prec_); }
    Interval alpha_bar(int m) const;
    Interval d2() const;
    Interval c(int m) const;
    Interval c_bar(int m) const;
    Integer gamma() const { return gamma_; }

    // Diagonal-to-outer bounds for HKZ-reduced forms.
    Interval c_j(int j) const;
    Interval delta(int n) const;

    Thresholds thresholds(int n) const;
    Integer block_count(int n) const;
    Integer g_bound(int n) const;
    Rational kappa() const { return eff_.xi + 1; }
    Interval big_d() const;

    // Re-checks every inequality the frozen constants promise up to nmax.
    // Returns the first failing check, if any.
    std::optional<std::string> validate() const;

private:
    mpfr_prec_t integer_precision(int n) const;

    const Field* field_;
    EffectiveConstants eff_;
    mpfr_prec_t prec_;
    Integer gamma_;
};

EffectiveConstants parse_constants(const std::string& text);
std::string format_constants(const EffectiveConstants& eff);
EffectiveConstants read_constants_file(const std::string& path);

} // namespace hermite
