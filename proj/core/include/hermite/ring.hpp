#pragma once

#include "hermite/field.hpp"
#include "hermite/lattice_enum.hpp"

#include <optional>
#include <vector>

namespace hermite {

// a in O with |x - a|_nu <= beta for all nu; exact for x in K.
FieldElement round_to_ring(const FieldElement& x);
// Same for a target given by per-embedding enclosures.
FieldElement round_to_ring(const Field& field, const std::vector<Interval>& target);

// Nonzero z in O minimizing Tr(h z^2); h must be totally positive.
FieldElement trace_minimizer(const FieldElement& h, const EnumOptions& opts = {});

// Unit eps with all embedding ratios of eps^2 h at most lambda_impl.
FieldElement balance_unit(const FieldElement& h);
FieldElement unit_from_exponents(const Field& field, const std::vector<long>& exponents);

// Certified test of h^(nu) <= bound * h^(mu) for all nu, mu.
Verdict ratio_within(const FieldElement& h, const Rational& bound);
// Enclosure of max_{nu,mu} h^(nu) / h^(mu) for totally positive h.
Interval max_embedding_ratio(const FieldElement& h, mpfr_prec_t prec = default_precision);

bool is_unit(const FieldElement& x);
// q with a = q b when b divides a in O.
std::optional<FieldElement> exact_quotient(const FieldElement& a, const FieldElement& b);

struct BezoutData {
    FieldElement g;  // generator of aO + bO
    FieldElement s;
    FieldElement t;  // s a + t b = g
};
BezoutData ring_gcd(const FieldElement& a, const FieldElement& b);
// Generator search for aO + bO through its Hermite normal form, used when
// Euclidean steps stall.
BezoutData ideal_generator(const FieldElement& a, const FieldElement& b, const EnumOptions& opts = {});

} // namespace hermite
