#include "hermite/polynomial.hpp"

#include "hermite/errors.hpp"

#include <algorithm>
#include <utility>

namespace hermite {

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Polynomial::operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
    return Polynomial(std::move(d));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return Polynomial(std::move(r));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
}

void Polynomial::divmod(const Polynomial& a, const Polynomial& b, Polynomial& q, Polynomial& r) {
    require(!b.is_zero(), ErrorCode::InvariantBreach, "polynomial division by zero");
    std::vector<Rational> rem = a.c_;
    int db = b.degree();
    std::vector<Rational> quot(std::max(0, a.degree() - db + 1), Rational(0));
    for (int k = a.degree(); k >= db; --k) {
        Rational f = rem[k] / b.leading();
        if (f == 0) continue;
        quot[k - db] = f;
        for (int j = 0; j <= db; ++j) rem[k - db + j] -= f * b.c_[j];
    }
    q = Polynomial(std::move(quot));
    r = Polynomial(std::move(rem));
}

Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
        Polynomial q, r;
        Polynomial::divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    std::vector<Rational> c = a.coeffs();
    Rational lead = c.back();
    for (auto& x : c) x /= lead;
    return Polynomial(std::move(c));
}

Polynomial squarefree_part(const Polynomial& p) {
    if (p.degree() <= 0) return p;
    Polynomial g = gcd(p, p.derivative());
    Polynomial q, r;
    Polynomial::divmod(p, g, q, r);
    return q;
}

Polynomial characteristic_polynomial(const RationalMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<Rational> c(n + 1, Rational(0));
    c[n] = 1;
    RationalMatrix mk(n, n, Rational(0));
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k
        RationalMatrix next(n, n, Rational(0));
        if (k == 1) {
            next = rational_identity(n);
        } else {
            next = multiply(m, mk);
            for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
        }
        mk = next;
        RationalMatrix am = multiply(m, mk);
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -tr / static_cast<long>(k);
    }
    return Polynomial(std::move(c));
}

SturmSequence::SturmSequence(const Polynomial& squarefree) {
    seq_.push_back(squarefree);
    if (squarefree.degree() <= 0) return;
    seq_.push_back(squarefree.derivative());
    while (seq_.back().degree() > 0) {
        Polynomial q, r;
        Polynomial::divmod(seq_[seq_.size() - 2], seq_.back(), q, r);
        if (r.is_zero()) break;
        seq_.push_back(Polynomial() - r);
    }
}

int SturmSequence::variations(const Rational& x) const {
    int count = 0;
    int last = 0;
    for (const auto& p : seq_) {
        int s = sgn(p(x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

int SturmSequence::variations_at_infinity(int sign) const {
    int count = 0;
    int last = 0;
    for (const auto& p : seq_) {
        if (p.is_zero()) continue;
        int s = sgn(p.leading());
        if (sign < 0 && p.degree() % 2 == 1) s = -s;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

int SturmSequence::count_roots(const Rational& a, const Rational& b) const {
    if (seq_.front().degree() <= 0) return 0;
    return variations(a) - variations(b);
}

int SturmSequence::count_real_roots() const {
    if (seq_.front().degree() <= 0) return 0;
    return variations_at_infinity(-1) - variations_at_infinity(1);
}

Rational root_bound(const Polynomial& p) {
    Rational m = 0;
    for (int i = 0; i < p.degree(); ++i) m = std::max(m, abs_rational(p.coeffs()[i] / p.leading()));
    return m + 1;
}

} // namespace hermite
