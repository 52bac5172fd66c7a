#include "hermite/numeric.hpp"

#include "hermite/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>

namespace hermite {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

Rational parse_decimal(std::string_view text) {
    bool negative = false;
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    std::string_view body = text.substr(pos);
    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
        std::string exp_text(body.substr(e + 1));
        std::string_view ev = exp_text;
        std::size_t sign = (!ev.empty() && (ev[0] == '-' || ev[0] == '+')) ? 1 : 0;
        require(all_digits(ev.substr(sign)), ErrorCode::InvalidInput, "bad exponent in '" + std::string(text) + "'");
        exponent = std::strtol(exp_text.c_str(), nullptr, 10);
        body = body.substr(0, e);
    }
    std::string digits;
    long frac_len = 0;
    if (auto dot = body.find('.'); dot != std::string_view::npos) {
        std::string_view ip = body.substr(0, dot);
        std::string_view fp = body.substr(dot + 1);
        require((ip.empty() || all_digits(ip)) && (fp.empty() || all_digits(fp)) && !(ip.empty() && fp.empty()),
                ErrorCode::InvalidInput, "bad decimal '" + std::string(text) + "'");
        digits = std::string(ip) + std::string(fp);
        frac_len = static_cast<long>(fp.size());
    } else {
        require(all_digits(body), ErrorCode::InvalidInput, "bad number '" + std::string(text) + "'");
        digits = std::string(body);
    }
    Integer num(digits, 10);
    long shift = exponent - frac_len;
    Integer p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
    Rational q = shift >= 0 ? Rational(num * p10) : Rational(num, p10);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

} // namespace

Rational ratio(const Integer& p, const Integer& q) {
    require(q != 0, ErrorCode::InvalidInput, "zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

Rational parse_rational(std::string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    text = text.substr(b, e - b);
    require(!text.empty(), ErrorCode::InvalidInput, "empty number");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_decimal(text.substr(0, slash));
        Rational den = parse_decimal(text.substr(slash + 1));
        require(den != 0, ErrorCode::InvalidInput, "zero denominator in '" + std::string(text) + "'");
        Rational q = num / den;
        return q;
    }
    return parse_decimal(text);
}

std::string format_rational(const Rational& q) { return q.get_str(10); }

Integer floor_rational(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer ceil_rational(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer round_rational(const Rational& q) {
    Rational shifted = q + Rational(1, 2);
    return floor_rational(shifted);
}

Integer isqrt(const Integer& n) {
    require(n >= 0, ErrorCode::InvariantBreach, "isqrt of a negative integer");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_perfect_square(const Integer& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

Rational abs_rational(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Rational pow_rational(const Rational& q, unsigned long e) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), e);
    r.canonicalize();
    return r;
}

Rational round_up_decimal(const Rational& q, unsigned digits) {
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    Rational scaled = q * scale;
    Rational r(ceil_rational(scaled), scale);
    r.canonicalize();
    return r;
}

// ---- Interval ----

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Rational& q, mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(long value, mpfr_prec_t prec) : Interval(Rational(value), prec) {}

Interval Interval::hull(const Rational& lo, const Rational& hi, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other.prec_) {
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
    if (this != &other) {
        mpfr_set_prec(lo_, other.prec_);
        mpfr_set_prec(hi_, other.prec_);
        prec_ = other.prec_;
        mpfr_set(lo_, other.lo_, MPFR_RNDD);
        mpfr_set(hi_, other.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
    if (this != &other) {
        std::swap(prec_, other.prec_);
        mpfr_swap(lo_, other.lo_);
        mpfr_swap(hi_, other.hi_);
    }
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

void Interval::widen_to(mpfr_prec_t prec) {
    if (prec <= prec_) return;
    mpfr_prec_round(lo_, prec, MPFR_RNDD);
    mpfr_prec_round(hi_, prec, MPFR_RNDU);
    prec_ = prec;
}

namespace {

Rational mpfr_to_rational(const __mpfr_struct* x) {
    require(mpfr_number_p(x) != 0, ErrorCode::PrecisionExhausted, "non-finite interval endpoint");
    if (mpfr_zero_p(x)) return Rational(0);
    Integer m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    Rational r(m);
    if (e >= 0) {
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    } else {
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    }
    return r;
}

} // namespace

Rational Interval::lower() const { return mpfr_to_rational(lo_); }
Rational Interval::upper() const { return mpfr_to_rational(hi_); }

double Interval::mid() const {
    double a = mpfr_get_d(lo_, MPFR_RNDN);
    double b = mpfr_get_d(hi_, MPFR_RNDN);
    return 0.5 * a + 0.5 * b;
}

bool Interval::is_finite() const { return mpfr_number_p(lo_) && mpfr_number_p(hi_); }

bool Interval::contains(const Rational& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
bool Interval::certainly_positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::certainly_negative() const { return mpfr_sgn(hi_) < 0; }
bool Interval::certainly_le(const Interval& other) const { return mpfr_lessequal_p(hi_, other.lo_) != 0; }
bool Interval::certainly_lt(const Interval& other) const { return mpfr_less_p(hi_, other.lo_) != 0; }
bool Interval::overlaps(const Interval& other) const {
    return mpfr_lessequal_p(lo_, other.hi_) && mpfr_lessequal_p(other.lo_, hi_);
}

Interval Interval::operator-() const {
    Interval r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

Interval& Interval::operator+=(const Interval& o) {
    widen_to(o.prec_);
    mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
    return *this;
}

Interval& Interval::operator-=(const Interval& o) {
    widen_to(o.prec_);
    mpfr_t t;
    mpfr_init2(t, prec_);
    mpfr_sub(t, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(hi_, hi_, o.lo_, MPFR_RNDU);
    mpfr_swap(lo_, t);
    mpfr_clear(t);
    return *this;
}

Interval& Interval::operator*=(const Interval& o) {
    widen_to(o.prec_);
    mpfr_t a, b, c, d;
    mpfr_inits2(prec_, a, b, c, d, static_cast<mpfr_ptr>(nullptr));
    mpfr_mul(a, lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(b, lo_, o.hi_, MPFR_RNDD);
    mpfr_mul(c, hi_, o.lo_, MPFR_RNDD);
    mpfr_mul(d, hi_, o.hi_, MPFR_RNDD);
    mpfr_min(a, a, b, MPFR_RNDD);
    mpfr_min(c, c, d, MPFR_RNDD);
    mpfr_t lo;
    mpfr_init2(lo, prec_);
    mpfr_min(lo, a, c, MPFR_RNDD);
    mpfr_mul(a, lo_, o.lo_, MPFR_RNDU);
    mpfr_mul(b, lo_, o.hi_, MPFR_RNDU);
    mpfr_mul(c, hi_, o.lo_, MPFR_RNDU);
    mpfr_mul(d, hi_, o.hi_, MPFR_RNDU);
    mpfr_max(a, a, b, MPFR_RNDU);
    mpfr_max(c, c, d, MPFR_RNDU);
    mpfr_max(hi_, a, c, MPFR_RNDU);
    mpfr_swap(lo_, lo);
    mpfr_clears(a, b, c, d, lo, static_cast<mpfr_ptr>(nullptr));
    return *this;
}

Interval& Interval::operator/=(const Interval& o) {
    require(!o.contains_zero(), ErrorCode::PrecisionExhausted, "interval division by an enclosure of zero");
    widen_to(o.prec_);
    Interval inv(prec_);
    mpfr_ui_div(inv.lo_, 1, o.hi_, MPFR_RNDD);
    mpfr_ui_div(inv.hi_, 1, o.lo_, MPFR_RNDU);
    return *this *= inv;
}

Interval abs(const Interval& x) {
    if (mpfr_sgn(x.lo_) >= 0) return x;
    if (mpfr_sgn(x.hi_) <= 0) return -x;
    Interval r(x.prec_);
    mpfr_set_zero(r.lo_, 1);
    mpfr_neg(r.hi_, x.lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

Interval sqrt(const Interval& x) {
    require(mpfr_sgn(x.hi_) >= 0, ErrorCode::InvariantBreach, "square root of a negative interval");
    Interval r(x.prec_);
    if (mpfr_sgn(x.lo_) <= 0) {
        mpfr_set_zero(r.lo_, 1);
    } else {
        mpfr_sqrt(r.lo_, x.lo_, MPFR_RNDD);
    }
    mpfr_sqrt(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

Interval exp(const Interval& x) {
    Interval r(x.prec_);
    mpfr_exp(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

Interval log(const Interval& x) {
    require(mpfr_sgn(x.lo_) > 0, ErrorCode::PrecisionExhausted, "logarithm of an interval touching zero");
    Interval r(x.prec_);
    mpfr_log(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

Interval pow(const Interval& x, const Rational& e) {
    if (e == 0) return Interval(Rational(1), x.prec_);
    if (e.get_den() == 1 && e.get_num().fits_slong_p()) return pow(x, e.get_num().get_si());
    return exp(log(x) * Interval(e, x.prec_));
}

Interval pow(const Interval& x, long e) {
    if (e == 0) return Interval(Rational(1), x.prec_);
    if (e < 0) return Interval(Rational(1), x.prec_) / pow(x, -e);
    Interval r(x.prec_);
    if (e % 2 == 1 || mpfr_sgn(x.lo_) >= 0) {
        mpfr_pow_si(r.lo_, x.lo_, e, MPFR_RNDD);
        mpfr_pow_si(r.hi_, x.hi_, e, MPFR_RNDU);
    } else if (mpfr_sgn(x.hi_) <= 0) {
        mpfr_pow_si(r.lo_, x.hi_, e, MPFR_RNDD);
        mpfr_pow_si(r.hi_, x.lo_, e, MPFR_RNDU);
    } else {
        mpfr_t t;
        mpfr_init2(t, x.prec_);
        mpfr_pow_si(t, x.lo_, e, MPFR_RNDU);
        mpfr_pow_si(r.hi_, x.hi_, e, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        mpfr_set_zero(r.lo_, 1);
    }
    return r;
}

Interval max(const Interval& a, const Interval& b) {
    mpfr_prec_t p = std::max(a.prec_, b.prec_);
    Interval r(p);
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval min(const Interval& a, const Interval& b) {
    mpfr_prec_t p = std::max(a.prec_, b.prec_);
    Interval r(p);
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

namespace {

std::string endpoint(const __mpfr_struct* x, int digits, mpfr_rnd_t rnd) {
    if (mpfr_zero_p(x)) return "0";
    if (!mpfr_number_p(x)) return mpfr_nan_p(x) ? "nan" : (mpfr_sgn(x) > 0 ? "inf" : "-inf");
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(digits), x, rnd);
    std::string m(s);
    mpfr_free_str(s);
    bool neg = !m.empty() && m[0] == '-';
    if (neg) m.erase(0, 1);
    std::string out = neg ? "-" : "";
    out += m.substr(0, 1);
    if (m.size() > 1) out += "." + m.substr(1);
    out += "e" + std::to_string(static_cast<long>(e) - 1);
    return out;
}

} // namespace

std::string Interval::format(int digits) const {
    return "[" + endpoint(lo_, digits, MPFR_RNDD) + ", " + endpoint(hi_, digits, MPFR_RNDU) + "]@" +
           std::to_string(static_cast<long>(prec_));
}

Interval unit_ball_volume(int n, mpfr_prec_t prec) {
    require(n >= 1, ErrorCode::InvalidInput, "unit ball dimension must be positive");
    auto factorial = [](long k) {
        Integer f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
        return f;
    };
    Interval pi = Interval::pi(prec);
    if (n % 2 == 0) return pow(pi, static_cast<long>(n / 2)) / Interval(Rational(factorial(n / 2)), prec);
    Integer two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(n + 1));
    Rational coeff(two_pow * factorial((n + 1) / 2), factorial(n + 1));
    coeff.canonicalize();
    return pow(pi, static_cast<long>((n - 1) / 2)) * Interval(coeff, prec);
}

} // namespace hermite
