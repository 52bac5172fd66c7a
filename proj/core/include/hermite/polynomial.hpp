#pragma once

#include "hermite/matrix.hpp"
#include "hermite/numeric.hpp"

#include <vector>

namespace hermite {

// Dense univariate polynomial over the rationals, coefficients low to high.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& leading() const { return c_.back(); }

    Rational operator()(const Rational& x) const;
    Polynomial derivative() const;

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    // Euclidean division: a = q b + r with deg r < deg b.
    static void divmod(const Polynomial& a, const Polynomial& b, Polynomial& q, Polynomial& r);

private:
    std::vector<Rational> c_;
    void trim();
};

Polynomial gcd(Polynomial a, Polynomial b);
Polynomial squarefree_part(const Polynomial& p);

// Characteristic polynomial det(x I - m) by the Faddeev-LeVerrier recursion.
Polynomial characteristic_polynomial(const RationalMatrix& m);

class SturmSequence {
public:
    explicit SturmSequence(const Polynomial& squarefree);
    // Number of distinct real roots in the half-open interval (a, b].
    int count_roots(const Rational& a, const Rational& b) const;
    int count_real_roots() const;
    const Polynomial& base() const { return seq_.front(); }

private:
    std::vector<Polynomial> seq_;
    int variations(const Rational& x) const;
    int variations_at_infinity(int sign) const;
};

// Cauchy bound: every real root has absolute value below the result.
Rational root_bound(const Polynomial& p);

} // namespace hermite
