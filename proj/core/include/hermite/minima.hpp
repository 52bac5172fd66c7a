#pragma once

#include "hermite/form.hpp"
#include "hermite/lattice_enum.hpp"

#include <vector>

namespace hermite {

// x -> Tr(Q(x)) as an integer-coefficient form on Z^(dn); coordinate k of
// x_i sits at index i * d + k.
struct TraceFormData {
    RationalMatrix gram;
    std::size_t n = 0;
    std::size_t d = 0;

    std::vector<FieldElement> to_vector(const Field& field, const std::vector<Integer>& z) const;
    std::vector<Integer> to_coordinates(const std::vector<FieldElement>& x) const;
};

TraceFormData trace_form(const GramForm& q);
std::vector<LatticePoint> enumerate_below(const TraceFormData& t, const Rational& bound, const EnumOptions& opts = {});

struct ShortVectorReport {
    Rational minimum;
    std::vector<FieldElement> witness;
    Rational search_bound;
    std::size_t candidates = 0;
};

// Exact min N(Q(x)) over nonzero x in O^n.
ShortVectorReport minimum(const GramForm& q, const EnumOptions& opts = {});

struct HermiteReport {
    Rational minimum;
    Rational det_norm;
    Interval sigma;
    Interval ratio;  // min(Q) / (sigma_n d(Q)^(1/n))
};
// Throws ViolationDetected if min(Q) > sigma_n d(Q)^(1/n).
HermiteReport hermite_check(const GramForm& q, const ShortVectorReport& report);

} // namespace hermite
