#pragma once

#include "hermite/matrix.hpp"
#include "hermite/numeric.hpp"

#include <cstddef>
#include <vector>

namespace hermite {

struct EnumOptions {
    std::size_t budget = 20'000'000;  // visited nodes before BudgetExceeded
    unsigned threads = 1;
};

struct LatticePoint {
    std::vector<Integer> x;
    Rational value;
};

// Nonzero integer vectors with x^t G x <= bound, one per +- pair (the last
// nonzero coordinate is positive), sorted by value then lexicographically.
std::vector<LatticePoint> enumerate_short(const RationalMatrix& gram, const Rational& bound,
                                          const EnumOptions& opts = {});

// All integer vectors with (x - c)^t G (x - c) <= bound, same ordering.
std::vector<LatticePoint> enumerate_near(const RationalMatrix& gram, const std::vector<Rational>& center,
                                         const Rational& bound, const EnumOptions& opts = {});

Rational evaluate_form(const RationalMatrix& gram, const std::vector<Integer>& x);

} // namespace hermite
