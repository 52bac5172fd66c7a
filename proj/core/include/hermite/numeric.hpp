#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <string_view>

namespace hermite {

using Integer = mpz_class;
using Rational = mpq_class;

// Canonical p / q; q must be nonzero.
Rational ratio(const Integer& p, const Integer& q);
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

Integer floor_rational(const Rational& q);
Integer ceil_rational(const Rational& q);
// Nearest integer, halves rounded up.
Integer round_rational(const Rational& q);
Integer isqrt(const Integer& n);
bool is_perfect_square(const Integer& n);
Rational abs_rational(const Rational& q);
Rational pow_rational(const Rational& q, unsigned long e);

// Smallest rational of the form k / 10^digits that is >= q.
Rational round_up_decimal(const Rational& q, unsigned digits);

inline constexpr mpfr_prec_t default_precision = 256;

// Closed real interval with MPFR endpoints and outward rounding.
class Interval {
public:
    explicit Interval(mpfr_prec_t prec = default_precision);
    Interval(const Rational& q, mpfr_prec_t prec);
    Interval(long value, mpfr_prec_t prec);
    static Interval hull(const Rational& lo, const Rational& hi, mpfr_prec_t prec);
    static Interval pi(mpfr_prec_t prec);

    Interval(const Interval& other);
    Interval(Interval&& other) noexcept;
    Interval& operator=(const Interval& other);
    Interval& operator=(Interval&& other) noexcept;
    ~Interval();

    mpfr_prec_t precision() const { return prec_; }
    Rational lower() const;
    Rational upper() const;
    double mid() const;
    bool is_finite() const;

    bool contains(const Rational& q) const;
    bool contains_zero() const;
    bool certainly_positive() const;
    bool certainly_negative() const;
    bool certainly_le(const Interval& other) const;
    bool certainly_lt(const Interval& other) const;
    bool overlaps(const Interval& other) const;

    Interval operator-() const;
    Interval& operator+=(const Interval& o);
    Interval& operator-=(const Interval& o);
    Interval& operator*=(const Interval& o);
    Interval& operator/=(const Interval& o);

    friend Interval operator+(Interval a, const Interval& b) { return a += b; }
    friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
    friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
    friend Interval operator/(Interval a, const Interval& b) { return a /= b; }

    friend Interval abs(const Interval& x);
    friend Interval sqrt(const Interval& x);
    friend Interval exp(const Interval& x);
    friend Interval log(const Interval& x);
    friend Interval pow(const Interval& x, const Rational& e);
    friend Interval pow(const Interval& x, long e);
    friend Interval max(const Interval& a, const Interval& b);
    friend Interval min(const Interval& a, const Interval& b);

    // "[lo, hi]@prec" with directed decimal rounding of each endpoint.
    std::string format(int digits = 20) const;

    const __mpfr_struct* lo_ptr() const { return lo_; }
    const __mpfr_struct* hi_ptr() const { return hi_; }

private:
    mpfr_prec_t prec_;
    mpfr_t lo_;
    mpfr_t hi_;

    void widen_to(mpfr_prec_t prec);
};

// Volume of the n-dimensional unit ball, from the pi-power and factorial
// closed forms.
Interval unit_ball_volume(int n, mpfr_prec_t prec = default_precision);

// Outcome of a certified comparison.
enum class Verdict { Holds, Fails, Undecided };

} // namespace hermite
