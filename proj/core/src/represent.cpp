#include "hermite/errors.hpp"
#include "hermite/ring.hpp"
#include "hermite/sos.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>

namespace hermite {

namespace {

bool is_probable_prime(const Integer& n) { return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

Integer powmod(const Integer& b, const Integer& e, const Integer& m) {
    Integer r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

// x^2 + y^2 = p for a prime p = 1 mod 4, by Cornacchia's descent.
std::vector<Integer> cornacchia(const Integer& p) {
    Integer root;
    for (Integer c = 2;; ++c) {
        Integer t = powmod(c, (p - 1) / 4, p);
        if ((t * t) % p == p - 1) {
            root = t;
            break;
        }
    }
    Integer r0 = p, r1 = root;
    while (r1 * r1 > p) {
        Integer r2 = r0 % r1;
        r0 = r1;
        r1 = r2;
    }
    Integer y = isqrt(p - r1 * r1);
    require(r1 * r1 + y * y == p, ErrorCode::InvariantBreach, "Cornacchia descent failed");
    return {r1, y};
}

// Square root of n modulo an odd prime p (Tonelli-Shanks); n must be a residue.
Integer sqrt_mod(const Integer& n, const Integer& p) {
    Integer q = p - 1, z = 2;
    long e = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++e;
    }
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    Integer c = powmod(z, q, p), x = powmod(n, (q + 1) / 2, p), t = powmod(n, q, p);
    long m = e;
    while (t != 1) {
        long i = 0;
        for (Integer tt = t; tt != 1; tt = (tt * tt) % p) ++i;
        Integer b = c;
        for (long j = 0; j < m - i - 1; ++j) b = (b * b) % p;
        x = (x * b) % p;
        c = (b * b) % p;
        t = (t * c) % p;
        m = i;
    }
    return x;
}

// x^2 + 2 y^2 = p for a prime p = 1, 3 mod 8, by Cornacchia's descent.
std::vector<Integer> cornacchia_two(const Integer& p) {
    Integer r0 = p, r1 = sqrt_mod(p - 2, p);
    while (r1 * r1 > p) {
        Integer r2 = r0 % r1;
        r0 = r1;
        r1 = r2;
    }
    Integer y2 = (p - r1 * r1) / 2;
    require(r1 * r1 + 2 * y2 == p && is_perfect_square(y2), ErrorCode::InvariantBreach, "Cornacchia descent failed");
    return {r1, isqrt(y2)};
}

constexpr long brute_force_limit = 10'000'000;
constexpr long trial_division_limit = 100'000;

// Shared node counter for the enumerations.
struct Budget {
    std::size_t limit;
    std::size_t used = 0;
    void tick() {
        if (++used > limit) fail(ErrorCode::BudgetExceeded, "sum of squares search exceeded its budget");
    }
};

// Nonzero c in O with a - c^2 totally nonnegative, one per sign, ordered by
// Tr(c^2) then coordinates.
struct Candidates {
    std::vector<FieldElement> c;
    std::vector<FieldElement> sq;
    std::vector<Rational> tr;
    std::map<std::vector<Rational>, std::size_t> root;  // c^2 -> index
};

Candidates square_candidates(const FieldElement& a, Budget& budget) {
    const Field& f = a.field();
    Candidates out;
    Rational bound = f.trace(a);
    out.c.push_back(f.zero());
    out.sq.push_back(f.zero());
    out.tr.push_back(Rational(0));
    out.root[f.zero().coords()] = 0;
    if (bound <= 0) return out;
    EnumOptions eo;
    eo.budget = budget.limit;
    for (const auto& pt : enumerate_short(f.trace_gram(), bound, eo)) {
        budget.tick();
        FieldElement c = f.element(std::vector<Rational>(pt.x.begin(), pt.x.end()));
        FieldElement s = c * c;
        if (!f.is_totally_nonnegative(a - s)) continue;
        out.root[s.coords()] = out.c.size();
        out.c.push_back(c);
        out.sq.push_back(s);
        out.tr.push_back(pt.value);
    }
    return out;
}

// Multisets of k candidates (indices nonincreasing) whose squares sum to rem.
class SquareSearch {
public:
    SquareSearch(const Candidates& cand, Budget& budget) : cand_(cand), budget_(budget) {}

    // Calls visit(indices) for every solution until it returns true.
    template <class Visit>
    bool run(const FieldElement& a, int k, Visit&& visit) {
        std::vector<std::size_t> chosen;
        return dfs(a, k, cand_.c.size() - 1, chosen, visit);
    }

private:
    template <class Visit>
    bool dfs(const FieldElement& rem, int slots, std::size_t max_idx, std::vector<std::size_t>& chosen, Visit& visit) {
        budget_.tick();
        const Field& f = rem.field();
        if (rem.is_zero()) {
            std::vector<std::size_t> full = chosen;
            full.resize(chosen.size() + static_cast<std::size_t>(slots), 0);
            return visit(full);
        }
        if (slots == 0) return false;
        Rational t = f.trace(rem);
        if (slots == 1) {
            auto it = cand_.root.find(rem.coords());
            if (it == cand_.root.end() || it->second > max_idx) return false;
            chosen.push_back(it->second);
            bool done = visit(chosen);
            chosen.pop_back();
            return done;
        }
        for (std::size_t idx = max_idx; idx >= 1; --idx) {
            // Remaining squares are no larger in trace than this one.
            if (cand_.tr[idx] * slots < t) break;
            if (cand_.tr[idx] > t) continue;
            FieldElement next = rem - cand_.sq[idx];
            if (!f.is_totally_nonnegative(next)) continue;
            chosen.push_back(idx);
            bool done = dfs(next, slots - 1, idx, chosen, visit);
            chosen.pop_back();
            if (done) return true;
        }
        return false;
    }

    const Candidates& cand_;
    Budget& budget_;
};

std::optional<std::vector<FieldElement>> enumerate_element(const FieldElement& a, int k, Budget& budget) {
    Candidates cand = square_candidates(a, budget);
    SquareSearch search(cand, budget);
    std::optional<std::vector<FieldElement>> out;
    search.run(a, k, [&](const std::vector<std::size_t>& idx) {
        std::vector<FieldElement> c;
        for (std::size_t i : idx) c.push_back(cand.c[i]);
        out = std::move(c);
        return true;
    });
    return out;
}

std::vector<FieldElement> to_elements(const Field& f, const std::vector<Integer>& v, std::size_t k) {
    std::vector<FieldElement> out;
    for (const auto& x : v) out.push_back(f.from_rational(Rational(x)));
    while (out.size() < k) out.push_back(f.zero());
    return out;
}

Integer as_integer(const FieldElement& x) {
    require(x.field().d() == 1 && x.is_integral(), ErrorCode::InvariantBreach, "expected a rational integer");
    Rational v = x.coord(0) / x.field().one_coords()[0];
    require(v.get_den() == 1, ErrorCode::InvariantBreach, "expected a rational integer");
    return v.get_num();
}

// x^2 + 2 y^2 = n, or nullopt (heuristic for large n with a composite cofactor).
std::optional<std::array<Integer, 2>> square_plus_twice_square(const Integer& n) {
    if (n < 0) return std::nullopt;
    if (n == 0) return std::array<Integer, 2>{0, 0};
    Integer m = n, x = 1, y = 0;
    auto times = [&](const Integer& u, const Integer& v) {
        Integer nx = x * u - 2 * y * v;
        y = x * v + y * u;
        x = nx;
    };
    while (m % 2 == 0) {
        m /= 2;
        times(0, 1);
    }
    for (long q = 3; q <= trial_division_limit && q * q <= m; q += 2) {
        if (m % q != 0) continue;
        long e = 0;
        while (m % q == 0) {
            m /= q;
            ++e;
        }
        if (q % 8 == 5 || q % 8 == 7) {
            if (e % 2 != 0) return std::nullopt;
            for (long i = 0; i < e / 2; ++i) times(q, 0);
        } else {
            auto uv = cornacchia_two(Integer(q));
            for (long i = 0; i < e; ++i) times(uv[0], uv[1]);
        }
    }
    if (m > 1) {
        if (is_probable_prime(m)) {
            if (m % 8 == 5 || m % 8 == 7) return std::nullopt;
            auto uv = cornacchia_two(m);
            times(uv[0], uv[1]);
        } else if (is_perfect_square(m)) {
            times(isqrt(m), 0);
        } else {
            if (m > brute_force_limit) return std::nullopt;
            std::optional<std::array<Integer, 2>> part;
            for (Integer v = 0; 2 * v * v <= m && !part; ++v)
                if (is_perfect_square(m - 2 * v * v)) part = std::array<Integer, 2>{isqrt(m - 2 * v * v), v};
            if (!part) return std::nullopt;
            times((*part)[0], (*part)[1]);
        }
    }
    require(x * x + 2 * y * y == n, ErrorCode::InvariantBreach, "x^2 + 2y^2 composition failed");
    return std::array<Integer, 2>{abs(x), abs(y)};
}

using Row = std::array<Integer, 2>;

// Sum of `slots` squares equal to n, or nullopt (heuristic for large n).
std::optional<std::vector<Integer>> squares_in(const Integer& n, std::size_t slots) {
    if (n < 0) return std::nullopt;
    switch (slots) {
    case 0: return n == 0 ? std::optional<std::vector<Integer>>(std::vector<Integer>{}) : std::nullopt;
    case 1: return is_perfect_square(n) ? std::optional<std::vector<Integer>>(std::vector<Integer>{isqrt(n)}) : std::nullopt;
    case 2: return two_squares(n);
    case 3: return three_squares(n);
    default: {
        auto v = four_squares(n);
        v.resize(slots, 0);
        return v;
    }
    }
}

// Rows for a reduced [[a, b], [b, c]] with first column (x1, x2, x3, 0, ...)
// where x1^2 + x2^2 = a - x3^2 has coprime parts, so the second column is a
// linear solution plus a short sum of squares.
std::optional<std::vector<Row>> binary_with_head(const Integer& a, const Integer& b, const Integer& c, std::size_t slots) {
    for (Integer x3 = 0; x3 <= 400; ++x3) {
        const std::size_t used = x3 == 0 ? 2 : 3;
        if (used > slots) break;
        Integer head = a - x3 * x3;
        if (head <= 0) break;
        auto xy = two_squares(head);
        if (!xy) continue;
        Integer g, g1, g2;
        mpz_gcdext(g.get_mpz_t(), g1.get_mpz_t(), g2.get_mpz_t(), (*xy)[0].get_mpz_t(), (*xy)[1].get_mpz_t());
        if (g != 1) continue;
        const long w3_span = x3 == 0 ? 0 : 60;
        for (long step = 0; step <= 2 * w3_span; ++step) {
            Integer w3 = (step % 2 == 0) ? Integer(step / 2) : Integer(-(step + 1) / 2);
            Integer target = b - x3 * w3;
            Integer w1 = target * g1, w2 = target * g2;
            // Move along (x2, -x1) towards the shortest solution.
            Integer k0 = round_rational(ratio(-(w1 * (*xy)[1] - w2 * (*xy)[0]), head));
            for (long j = 0; j <= 80; ++j) {
                Integer kk = k0 + ((j % 2 == 0) ? Integer(j / 2) : Integer(-(j + 1) / 2));
                Integer v1 = w1 + kk * (*xy)[1], v2 = w2 - kk * (*xy)[0];
                auto tail = squares_in(c - v1 * v1 - v2 * v2 - w3 * w3, slots - used);
                if (!tail) continue;
                std::vector<Row> rows{{(*xy)[0], v1}, {(*xy)[1], v2}};
                if (used == 3) rows.push_back({x3, w3});
                for (const auto& t : *tail) rows.push_back({0, t});
                return rows;
            }
        }
    }
    return std::nullopt;
}

// Five rows with first column (x1, x2, y, y, 0). With w3 + w4 = sigma and
// w3 - w4 = delta the tail needs delta^2 + 2 w5^2 = 2 (c - w1^2 - w2^2) - sigma^2,
// which covers forms whose values are all divisible by 4.
std::optional<std::vector<Row>> binary_with_pair_head(const Integer& a, const Integer& b, const Integer& c) {
    for (Integer y = 1; 2 * y * y < a && y <= 200; ++y) {
        Integer head = a - 2 * y * y;
        auto xy = two_squares(head);
        if (!xy) continue;
        Integer g, g1, g2;
        mpz_gcdext(g.get_mpz_t(), g1.get_mpz_t(), g2.get_mpz_t(), (*xy)[0].get_mpz_t(), (*xy)[1].get_mpz_t());
        if (g != 1) continue;
        for (long step = 0; step <= 120; ++step) {
            Integer sigma = (step % 2 == 0) ? Integer(step / 2) : Integer(-(step + 1) / 2);
            Integer target = b - y * sigma;
            Integer w1 = target * g1, w2 = target * g2;
            Integer k0 = round_rational(ratio(-(w1 * (*xy)[1] - w2 * (*xy)[0]), head));
            for (long j = 0; j <= 80; ++j) {
                Integer kk = k0 + ((j % 2 == 0) ? Integer(j / 2) : Integer(-(j + 1) / 2));
                Integer v1 = w1 + kk * (*xy)[1], v2 = w2 - kk * (*xy)[0];
                auto tail = square_plus_twice_square(2 * (c - v1 * v1 - v2 * v2) - sigma * sigma);
                if (!tail) continue;
                const Integer& delta = (*tail)[0];
                return std::vector<Row>{{(*xy)[0], v1}, {(*xy)[1], v2}, {y, (sigma + delta) / 2},
                                        {y, (sigma - delta) / 2}, {0, (*tail)[1]}};
            }
        }
    }
    return std::nullopt;
}

// At most `slots` rows for [[a, b], [b, c]] over Z.
std::optional<std::vector<Row>> binary_over_z(Integer a, Integer b, Integer c, std::size_t slots) {
    std::vector<Row> rows;
    const Integer det = a * c - b * b;
    if (a < 0 || c < 0 || det < 0) return std::nullopt;
    if ((a != 0 || b != 0 || c != 0) && a % 4 == 0 && b % 4 == 0 && c % 4 == 0) {
        auto quarter = binary_over_z(a / 4, b / 4, c / 4, slots);
        if (quarter)
            for (auto& row : *quarter) row = {2 * row[0], 2 * row[1]};
        if (quarter) return quarter;
    }
    if (det == 0) {
        if (a == 0 && c == 0) return rows;
        if (slots < 4) return std::nullopt;
        if (a == 0 || c == 0) {
            for (const auto& r : four_squares(a + c)) rows.push_back(a == 0 ? Row{0, r} : Row{r, 0});
            return rows;
        }
        Integer m;
        mpz_gcd(m.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
        Integer s = isqrt(a / m), t = isqrt(c / m);
        if (b < 0) t = -t;
        require(m * s * s == a && m * t * t == c && m * s * t == b, ErrorCode::InvariantBreach, "rank one split failed");
        for (const auto& r : four_squares(m)) rows.push_back(Row{r * s, r * t});
        return rows;
    }
    // Reduce to |2b| <= a <= c, tracking the basis change r (columns).
    Integer r00 = 1, r01 = 0, r10 = 0, r11 = 1;
    while (true) {
        if (2 * abs(b) > a) {
            Integer qn = round_rational(ratio(b, a));
            c = c - 2 * qn * b + qn * qn * a;
            b = b - qn * a;
            r01 -= qn * r00;
            r11 -= qn * r10;
            continue;
        }
        if (a > c) {
            std::swap(a, c);
            std::swap(r00, r01);
            std::swap(r10, r11);
            continue;
        }
        break;
    }
    // Try short primitive first columns v via a unimodular change s = [v | w].
    std::optional<std::vector<Row>> found;
    std::array<Integer, 4> used{1, 0, 0, 1};
    for (long radius = 1; radius <= 8 && !found; ++radius)
        for (long v0 = 0; v0 <= radius && !found; ++v0)
            for (long v2 = -radius; v2 <= radius && !found; ++v2) {
                if (std::max(v0, std::abs(v2)) != radius || (v0 == 0 && v2 < 0) || std::gcd(v0, std::abs(v2)) != 1)
                    continue;
                Integer g, s3, ms1;
                mpz_gcdext(g.get_mpz_t(), s3.get_mpz_t(), ms1.get_mpz_t(), Integer(v0).get_mpz_t(), Integer(v2).get_mpz_t());
                // v0 s3 - s1 v2 = 1 with s1 = -ms1.
                const std::array<Integer, 4> s{Integer(v0), -ms1, Integer(v2), s3};
                Integer na = a * s[0] * s[0] + 2 * b * s[0] * s[2] + c * s[2] * s[2];
                Integer nb = a * s[0] * s[1] + b * (s[0] * s[3] + s[1] * s[2]) + c * s[2] * s[3];
                Integer nc = a * s[1] * s[1] + 2 * b * s[1] * s[3] + c * s[3] * s[3];
                found = binary_with_head(na, nb, nc, slots);
                if (!found && slots >= 5) found = binary_with_pair_head(na, nb, nc);
                if (found) used = s;
            }
    if (!found) {
        // Halving: 2(u^t u + v^t v) = (u + v)^t (u + v) + (u - v)^t (u - v).
        if (slots < 4 || a % 2 != 0 || b % 2 != 0 || c % 2 != 0) return std::nullopt;
        auto half = binary_over_z(a / 2, b / 2, c / 2, 4);
        if (!half) return std::nullopt;
        half->resize(4, Row{0, 0});
        found = std::vector<Row>{};
        for (std::size_t i = 0; i < 4; i += 2) {
            const Row &u = (*half)[i], &v = (*half)[i + 1];
            found->push_back({u[0] + v[0], u[1] + v[1]});
            found->push_back({u[0] - v[0], u[1] - v[1]});
        }
        used = {1, 0, 0, 1};
    }
    // Undo both changes: M = M_s S^(-1) R^(-1).
    const Integer t00 = r00 * used[0] + r01 * used[2], t01 = r00 * used[1] + r01 * used[3];
    const Integer t10 = r10 * used[0] + r11 * used[2], t11 = r10 * used[1] + r11 * used[3];
    const Integer det_t = t00 * t11 - t01 * t10;
    for (auto& row : *found) {
        Integer u = row[0] * t11 - row[1] * t10;
        Integer v = -row[0] * t01 + row[1] * t00;
        row = {u * det_t, v * det_t};
    }
    return found;
}

} // namespace

std::optional<std::vector<Integer>> two_squares(const Integer& n) {
    if (n < 0) return std::nullopt;
    if (n == 0) return std::vector<Integer>{0, 0};
    // Gaussian product over the factorization; the cofactor left after trial
    // division must be 1, a square or a prime.
    Integer m = n, x = 1, y = 0;
    auto times = [&](const Integer& u, const Integer& v) {
        Integer nx = x * u - y * v;
        y = x * v + y * u;
        x = nx;
    };
    while (m % 2 == 0) {
        m /= 2;
        times(1, 1);
    }
    for (long q = 3; q <= trial_division_limit && q * q <= m; q += 2) {
        if (m % q != 0) continue;
        long e = 0;
        while (m % q == 0) {
            m /= q;
            ++e;
        }
        if (q % 4 == 3) {
            if (e % 2 != 0) return std::nullopt;
            for (long i = 0; i < e / 2; ++i) times(q, 0);
        } else {
            auto uv = cornacchia(Integer(q));
            for (long i = 0; i < e; ++i) times(uv[0], uv[1]);
        }
    }
    if (m > 1) {
        if (is_probable_prime(m)) {
            if (m % 4 == 3) return std::nullopt;
            auto uv = cornacchia(m);
            times(uv[0], uv[1]);
        } else if (is_perfect_square(m)) {
            times(isqrt(m), 0);
        } else {
            if (m > brute_force_limit) return std::nullopt;
            std::optional<std::vector<Integer>> part;
            for (Integer u = 0; 2 * u * u <= m && !part; ++u)
                if (is_perfect_square(m - u * u)) part = std::vector<Integer>{isqrt(m - u * u), u};
            if (!part) return std::nullopt;
            times((*part)[0], (*part)[1]);
        }
    }
    x = abs(x);
    y = abs(y);
    if (x < y) std::swap(x, y);
    require(x * x + y * y == n, ErrorCode::InvariantBreach, "two square composition failed");
    return std::vector<Integer>{x, y};
}

std::optional<std::vector<Integer>> three_squares(const Integer& n) {
    if (n < 0) return std::nullopt;
    if (n == 0) return std::vector<Integer>{0, 0, 0};
    Integer m = n, scale = 1;
    while (m % 4 == 0) {
        m /= 4;
        scale *= 2;
    }
    if (m % 8 == 7) return std::nullopt;
    for (Integer z = isqrt(m); z >= 0; --z) {
        auto two = two_squares(m - z * z);
        if (!two) continue;
        std::vector<Integer> out{(*two)[0] * scale, (*two)[1] * scale, z * scale};
        std::sort(out.begin(), out.end(), std::greater<>());
        return out;
    }
    return std::nullopt;
}

std::vector<Integer> four_squares(const Integer& n) {
    require(n >= 0, ErrorCode::InvalidInput, "negative integers are not sums of squares");
    if (auto t = three_squares(n)) return {(*t)[0], (*t)[1], (*t)[2], 0};
    Integer m = n, scale = 1;
    while (m % 4 == 0) {
        m /= 4;
        scale *= 2;
    }
    auto t = three_squares(m - 1);
    require(t.has_value(), ErrorCode::InvariantBreach, "three square split failed");
    std::vector<Integer> out{(*t)[0] * scale, (*t)[1] * scale, (*t)[2] * scale, scale};
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::optional<std::vector<FieldElement>> represent_element(const FieldElement& a, int k, const RepresentOptions& opts) {
    require(k >= 1, ErrorCode::InvalidInput, "number of squares must be positive");
    require(a.is_integral(), ErrorCode::InvalidInput, "only integral elements are represented");
    const Field& f = a.field();
    const std::size_t kk = static_cast<std::size_t>(k);
    if (a.is_zero()) return std::vector<FieldElement>(kk, f.zero());
    if (!f.is_totally_nonnegative(a)) return std::nullopt;
    if (f.d() == 1 && k >= 4) return to_elements(f, four_squares(as_integer(a)), kk);
    Budget budget{opts.budget};
    return enumerate_element(a, k, budget);
}

std::optional<FieldMatrix> represent_binary(const FieldMatrix& b, int k, const RepresentOptions& opts) {
    require(b.rows() == 2 && b.cols() == 2 && b(0, 1) == b(1, 0), ErrorCode::InvalidInput,
            "binary representation needs a symmetric 2 x 2 matrix");
    require(k >= 1, ErrorCode::InvalidInput, "number of squares must be positive");
    require(is_integral(b), ErrorCode::InvalidInput, "only integral matrices are represented");
    const Field& f = b(0, 0).field();
    const std::size_t kk = static_cast<std::size_t>(k);
    const FieldElement &b11 = b(0, 0), &b12 = b(0, 1), &b22 = b(1, 1);
    if (!f.is_totally_nonnegative(b11) || !f.is_totally_nonnegative(b22) ||
        !f.is_totally_nonnegative(b11 * b22 - b12 * b12))
        return std::nullopt;
    FieldMatrix out = field_zero_matrix(f, kk, 2);
    if (f.d() == 1) {
        auto rows = binary_over_z(as_integer(b11), as_integer(b12), as_integer(b22), kk);
        if (rows && rows->size() <= kk) {
            for (std::size_t i = 0; i < rows->size(); ++i)
                for (std::size_t j = 0; j < 2; ++j) out(i, j) = f.from_rational(Rational((*rows)[i][j]));
            require(multiply(transpose(out), out) == b, ErrorCode::InvariantBreach, "binary witness mismatch");
            return out;
        }
    }

    Budget budget{opts.budget};
    Candidates first = square_candidates(b11, budget);
    Candidates second = square_candidates(b22, budget);
    // Signed candidates for the second column where the first is nonzero.
    std::vector<std::size_t> signed_idx;
    for (std::size_t i = 0; i < second.c.size(); ++i) signed_idx.push_back(i);
    std::optional<FieldMatrix> result;
    SquareSearch outer(first, budget);
    outer.run(b11, k, [&](const std::vector<std::size_t>& idx) {
        std::vector<FieldElement> v;
        for (std::size_t i : idx) v.push_back(first.c[i]);
        std::size_t support = 0;
        while (support < kk && !v[support].is_zero()) ++support;
        // Positions below support take signed values; the zero tail is a multiset.
        std::vector<FieldElement> w(kk, f.zero());
        std::function<bool(std::size_t, const FieldElement&, const FieldElement&)> place =
            [&](std::size_t pos, const FieldElement& rem, const FieldElement& dot) -> bool {
            budget.tick();
            if (pos == support) {
                if (dot != b12) return false;
                SquareSearch tail(second, budget);
                return tail.run(rem, static_cast<int>(kk - support), [&](const std::vector<std::size_t>& t) {
                    for (std::size_t i = 0; i < t.size(); ++i) w[support + i] = second.c[t[i]];
                    FieldMatrix m = field_zero_matrix(f, kk, 2);
                    for (std::size_t i = 0; i < kk; ++i) {
                        m(i, 0) = v[i];
                        m(i, 1) = w[i];
                    }
                    result = m;
                    return true;
                });
            }
            if (pos + 1 == support) {
                // The last slot under the support is forced by the inner product.
                auto x = exact_quotient(b12 - dot, v[pos]);
                if (!x || !x->is_integral()) return false;
                FieldElement next = rem - *x * *x;
                if (!f.is_totally_nonnegative(next)) return false;
                w[pos] = *x;
                return place(pos + 1, next, b12);
            }
            // Cauchy-Schwarz: (b12 - dot)^2 <= (sum_{i >= pos} v_i^2) rem in every embedding.
            {
                FieldElement tail_norm = f.zero();
                for (std::size_t i = pos; i < support; ++i) tail_norm += v[i] * v[i];
                FieldElement gap = b12 - dot;
                if (!f.is_totally_nonnegative(tail_norm * rem - gap * gap)) return false;
            }
            for (std::size_t i : signed_idx) {
                for (int sign : {1, -1}) {
                    if (i == 0 && sign < 0) continue;
                    FieldElement c = sign > 0 ? second.c[i] : -second.c[i];
                    FieldElement next = rem - second.sq[i];
                    if (!f.is_totally_nonnegative(next)) continue;
                    w[pos] = c;
                    if (place(pos + 1, next, dot + v[pos] * c)) return true;
                }
            }
            return false;
        };
        return place(0, b22, f.zero());
    });
    if (result) require(multiply(transpose(*result), *result) == b, ErrorCode::InvariantBreach, "binary witness mismatch");
    return result;
}

PairMatrix pair_matrix(const FieldElement& pi, long p, int ell) {
    const Field& f = pi.field();
    PairData pd = pair_data(f, pi, p, ell);
    PairMatrix out{pd.f_pi, pd.w_pi, field_zero_matrix(f, f.d(), 2)};
    for (std::size_t i = 0; i < f.d(); ++i) {
        out.m(i, 0) = f.from_rational(Rational(pd.f[i]));
        out.m(i, 1) = f.tp_basis()[i];
    }
    FieldMatrix g = multiply(transpose(out.m), out.m);
    require(g(0, 0) == pd.f_pi && g(0, 1) == pi && g(1, 1) == pd.w_pi, ErrorCode::InvariantBreach,
            "pair matrix does not reproduce the pair");
    return out;
}

} // namespace hermite
