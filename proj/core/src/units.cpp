#include "hermite/errors.hpp"
#include "hermite/field.hpp"
#include "hermite/ring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hermite {

namespace {

Interval abs_log_embedding(const FieldElement& x, std::size_t nu, mpfr_prec_t prec) {
    return log(abs(x.field().embed_at(x, nu, prec)));
}

// Exponent vectors of the box [-bound, bound]^k in lexicographic order.
std::vector<std::vector<long>> exponent_box(std::size_t k, long bound) {
    std::vector<std::vector<long>> out;
    std::vector<long> e(k, -bound);
    if (k == 0) return {std::vector<long>{}};
    while (true) {
        out.push_back(e);
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (e[i] < bound) {
                ++e[i];
                for (std::size_t j = i + 1; j < k; ++j) e[j] = -bound;
                break;
            }
            if (i == 0) return out;
        }
    }
}

// Squared spread (max |y^nu| / min |y^nu|)^2.
Interval squared_spread(const FieldElement& y, mpfr_prec_t prec) {
    const Field& f = y.field();
    Interval hi = abs(f.embed_at(y, 0, prec));
    Interval lo = hi;
    for (std::size_t nu = 1; nu < f.d(); ++nu) {
        Interval v = abs(f.embed_at(y, nu, prec));
        hi = max(hi, v);
        lo = min(lo, v);
    }
    Interval r = hi / lo;
    return r * r;
}

} // namespace

void compute_unit_data(Field& field) {
    const mpfr_prec_t prec = default_precision;
    const std::size_t d = field.d();
    UnitData& u = field.unit_data_;
    u.logs.clear();
    for (const auto& unit : field.units()) {
        std::vector<Interval> row;
        for (std::size_t nu = 0; nu < d; ++nu) row.push_back(abs_log_embedding(unit, nu, prec));
        u.logs.push_back(row);
    }
    // D3 from the Minkowski ellipsoid volume.
    Interval two_d = pow(Interval(Rational(2), prec), static_cast<long>(d));
    Interval inner = two_d * sqrt(Interval(Rational(field.abs_discriminant()), prec)) / unit_ball_volume(field.degree(), prec);
    u.d3 = pow(inner, ratio(2, field.degree()));

    Interval one(Rational(1), prec);
    if (d == 1) {
        u.lambda_babai = one;
        u.constant_c = one;
        u.y_reps = {field.one_coords()};
        u.y_spread = one;
        u.lambda = one;
        u.lambda_impl = 1;
        u.available = true;
        return;
    }

    // Babai rounding ratio bound in the basis 2 log|u_i|.
    Interval worst(Rational(0), prec);
    for (std::size_t nu = 0; nu < d; ++nu)
        for (std::size_t mu = 0; mu < d; ++mu) {
            Interval s(Rational(0), prec);
            for (const auto& row : u.logs) s += abs(row[nu] - row[mu]);
            worst = max(worst, s);
        }
    u.lambda_babai = exp(worst);

    // Units eps_mu large at mu and small elsewhere; keep the one minimizing C_mu.
    Interval c_total = one;
    u.eps_exponents.clear();
    auto box = exponent_box(d - 1, 6);
    for (std::size_t mu = 0; mu < d; ++mu) {
        bool found = false;
        Interval best_c = one;
        std::vector<long> best_e;
        for (const auto& e : box) {
            if (std::all_of(e.begin(), e.end(), [](long v) { return v == 0; })) continue;
            std::vector<Interval> l(d, Interval(Rational(0), prec));
            for (std::size_t i = 0; i + 1 < d; ++i)
                for (std::size_t nu = 0; nu < d; ++nu) l[nu] += Interval(Rational(e[i]), prec) * u.logs[i][nu];
            bool ok = l[mu].certainly_positive();
            for (std::size_t nu = 0; nu < d && ok; ++nu)
                if (nu != mu) ok = l[nu].certainly_negative();
            if (!ok) continue;
            Interval a = exp(l[mu] * Interval(Rational(2), prec)) - one;
            Interval cm(Rational(0), prec);
            for (std::size_t nu = 0; nu < d; ++nu) {
                if (nu == mu) continue;
                Interval b = one - exp(l[nu] * Interval(Rational(2), prec));
                cm = max(cm, a / b);
            }
            if (!found || cm.upper() < best_c.upper()) {
                best_c = cm;
                best_e = e;
                found = true;
            }
        }
        require(found, ErrorCode::InvariantBreach, "no unit with the required sign pattern in the search box");
        c_total = mu == 0 ? best_c : max(c_total, best_c);
        u.eps_exponents.push_back(best_e);
    }
    u.constant_c = c_total;

    // Associate classes of elements with |N(y)| <= D3^(d/2).
    Interval norm_bound = pow(u.d3, ratio(field.degree(), 2));
    Interval tr_bound = Interval(Rational(field.degree()), prec) *
                        pow(u.lambda_babai, Rational(field.degree() - 1, field.degree())) * u.d3;
    auto points = enumerate_short(field.trace_gram(), tr_bound.upper());
    struct ClassRep {
        FieldElement rep;
        Rational abs_norm;
        Interval spread;
    };
    std::vector<ClassRep> classes;
    for (const auto& p : points) {
        std::vector<Rational> c(p.x.begin(), p.x.end());
        FieldElement y = field.element(c);
        Rational n = abs_rational(field.norm(y));
        if (!(Interval(n, prec).certainly_le(norm_bound) || norm_bound.contains(n))) continue;
        Interval spread = squared_spread(y, prec);
        bool merged = false;
        for (auto& cls : classes) {
            if (cls.abs_norm != n) continue;
            auto q = exact_quotient(y, cls.rep);
            if (!q) continue;
            merged = true;
            if (spread.upper() < cls.spread.upper()) {
                cls.rep = y;
                cls.spread = spread;
            }
            break;
        }
        if (!merged) classes.push_back(ClassRep{y, n, spread});
    }
    require(!classes.empty(), ErrorCode::InvariantBreach, "associate class enumeration found no elements");
    Interval spread_max = classes.front().spread;
    u.y_reps.clear();
    for (const auto& cls : classes) {
        spread_max = max(spread_max, cls.spread);
        u.y_reps.push_back(cls.rep.coords());
    }
    u.y_spread = spread_max;
    u.lambda = c_total * spread_max;
    u.lambda_impl = round_up_decimal(u.lambda.upper(), 6);
    if (u.lambda_impl < 1) u.lambda_impl = 1;
    u.available = true;
}

bool is_unit(const FieldElement& x) {
    if (!x.is_integral() || x.is_zero()) return false;
    Rational n = x.field().norm(x);
    return n == 1 || n == -1;
}

std::optional<FieldElement> exact_quotient(const FieldElement& a, const FieldElement& b) {
    if (b.is_zero()) return std::nullopt;
    FieldElement q = a * b.inverse();
    if (!q.is_integral()) return std::nullopt;
    return q;
}

FieldElement unit_from_exponents(const Field& field, const std::vector<long>& exponents) {
    FieldElement e = field.one();
    for (std::size_t i = 0; i < exponents.size(); ++i)
        if (exponents[i] != 0) e *= field.units()[i].pow(exponents[i]);
    return e;
}

Verdict ratio_within(const FieldElement& h, const Rational& bound) {
    const Field& f = h.field();
    bool undecided = false;
    std::vector<RationalEnclosure> enc;
    for (std::size_t nu = 0; nu < f.d(); ++nu) enc.push_back(f.enclosure(h, nu));
    for (std::size_t nu = 0; nu < f.d(); ++nu)
        for (std::size_t mu = 0; mu < f.d(); ++mu) {
            if (nu == mu) continue;
            if (enc[nu].upper() <= bound * enc[mu].lower()) continue;
            if (enc[nu].lower() > bound * enc[mu].upper()) return Verdict::Fails;
            undecided = true;
        }
    return undecided ? Verdict::Undecided : Verdict::Holds;
}

Interval max_embedding_ratio(const FieldElement& h, mpfr_prec_t prec) {
    const Field& f = h.field();
    Interval hi = f.embed_at(h, 0, prec);
    Interval lo = hi;
    for (std::size_t nu = 1; nu < f.d(); ++nu) {
        Interval v = f.embed_at(h, nu, prec);
        hi = max(hi, v);
        lo = min(lo, v);
    }
    return hi / lo;
}

FieldElement trace_minimizer(const FieldElement& h, const EnumOptions& opts) {
    const Field& f = h.field();
    require(f.is_totally_positive(h), ErrorCode::InvalidInput, "trace minimizer needs a totally positive element");
    const std::size_t d = f.d();
    RationalMatrix g(d, d, Rational(0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) g(i, j) = f.trace(h * f.basis_element(i) * f.basis_element(j));
    Rational bound = g(0, 0);
    for (std::size_t i = 1; i < d; ++i) bound = std::min(bound, g(i, i));
    if (f.unit_data().available) {
        Interval n(abs_rational(f.norm(h)), default_precision);
        Rational b3 = (f.unit_data().d3 * pow(n, Rational(1, f.degree()))).upper();
        bound = std::min(bound, b3);
    }
    auto pts = enumerate_short(g, bound, opts);
    require(!pts.empty(), ErrorCode::InvariantBreach, "trace minimizer search region is empty");
    std::vector<Rational> c(pts.front().x.begin(), pts.front().x.end());
    return f.element(c);
}

namespace {

double log_objective(const std::vector<double>& logh, const std::vector<std::vector<double>>& ul,
                     const std::vector<long>& e) {
    double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
    for (std::size_t nu = 0; nu < logh.size(); ++nu) {
        double v = logh[nu];
        for (std::size_t i = 0; i < e.size(); ++i) v += 2.0 * static_cast<double>(e[i]) * ul[i][nu];
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    return hi - lo;
}

// Solves the small dense system a x = b in doubles (partial pivoting).
std::vector<double> solve_double(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
        x[k] = s / a[k][k];
    }
    return x;
}

FieldElement lemma_construction(const FieldElement& h) {
    const Field& f = h.field();
    FieldElement y0 = trace_minimizer(h);
    for (const auto& rep : f.unit_data().y_reps) {
        auto q = exact_quotient(y0, f.element(rep));
        if (q && is_unit(*q)) return *q;
    }
    fail(ErrorCode::InvariantBreach, "trace minimizer is not associate to a class representative");
}

} // namespace

FieldElement balance_unit(const FieldElement& h) {
    const Field& f = h.field();
    require(f.unit_data().available, ErrorCode::UnsupportedField, "unit balancing needs unit data");
    require(f.is_totally_positive(h), ErrorCode::InvalidInput, "unit balancing needs a totally positive element");
    const std::size_t d = f.d();
    if (d == 1) return f.one();
    const mpfr_prec_t prec = default_precision;
    std::vector<double> logh(d);
    for (std::size_t nu = 0; nu < d; ++nu) logh[nu] = log(f.embed_at(h, nu, prec)).mid();
    std::vector<std::vector<double>> ul(d - 1, std::vector<double>(d));
    for (std::size_t i = 0; i + 1 < d; ++i)
        for (std::size_t nu = 0; nu < d; ++nu) ul[i][nu] = f.unit_data().logs[i][nu].mid();
    double mean = 0;
    for (double v : logh) mean += v;
    mean /= static_cast<double>(d);
    std::vector<std::vector<double>> a(d - 1, std::vector<double>(d - 1));
    std::vector<double> b(d - 1);
    for (std::size_t nu = 0; nu + 1 < d; ++nu) {
        for (std::size_t i = 0; i + 1 < d; ++i) a[nu][i] = 2.0 * ul[i][nu];
        b[nu] = logh[nu] - mean;
    }
    std::vector<double> t = solve_double(a, b);
    std::vector<long> e(d - 1);
    for (std::size_t i = 0; i + 1 < d; ++i) e[i] = -std::lround(t[i]);

    // Local descent on the max log-ratio, then the lexicographically smallest
    // vector attaining the optimum in the surrounding unit box.
    double best = log_objective(logh, ul, e);
    for (int iter = 0; iter < 1000; ++iter) {
        std::vector<long> cand_best = e;
        double cand_val = best;
        for (std::size_t i = 0; i + 1 < d; ++i)
            for (long delta : {-1L, 1L}) {
                std::vector<long> c = e;
                c[i] += delta;
                double v = log_objective(logh, ul, c);
                if (v < cand_val - 1e-12 || (std::fabs(v - cand_val) <= 1e-12 && v < best - 1e-12 && c < cand_best)) {
                    cand_val = v;
                    cand_best = c;
                }
            }
        if (cand_val >= best - 1e-12) break;
        e = cand_best;
        best = cand_val;
    }
    for (const auto& delta : exponent_box(d - 1, 1)) {
        std::vector<long> c = e;
        for (std::size_t i = 0; i + 1 < d; ++i) c[i] += delta[i];
        double v = log_objective(logh, ul, c);
        if (v <= best + 1e-9 && c < e) e = c;
    }
    FieldElement eps = unit_from_exponents(f, e);
    Verdict v = ratio_within(eps * eps * h, f.lambda_impl());
    if (v == Verdict::Holds) return eps;
    FieldElement alt = lemma_construction(h);
    if (ratio_within(alt * alt * h, f.lambda_impl()) == Verdict::Holds) return alt;
    require(v != Verdict::Undecided, ErrorCode::PrecisionExhausted, "unit balancing ratio is undecided");
    fail(ErrorCode::InvariantBreach, "no balancing unit satisfies the ratio bound");
}

// ---- rounding ----

FieldElement round_to_ring(const FieldElement& x) {
    const Field& f = x.field();
    const std::size_t d = f.d();
    std::vector<Rational> a0(d);
    for (std::size_t j = 0; j < d; ++j) a0[j] = Rational(round_rational(x.coord(j)));
    FieldElement first = f.element(a0);
    if (f.in_beta_box(x - first)) return first;
    Rational radius = Rational(static_cast<long>(d)) * f.beta_squared();
    auto pts = enumerate_near(f.trace_gram(), x.coords(), radius);
    for (const auto& p : pts) {
        FieldElement a = f.element(std::vector<Rational>(p.x.begin(), p.x.end()));
        if (f.in_beta_box(x - a)) return a;
    }
    fail(ErrorCode::InvariantBreach, "no ring element within the covering box");
}

FieldElement round_to_ring(const Field& f, const std::vector<Interval>& target) {
    const std::size_t d = f.d();
    require(target.size() == d, ErrorCode::InvariantBreach, "target has the wrong length");
    mpfr_prec_t prec = target[0].precision();
    Interval beta = f.beta(prec);
    bool undecided = false;
    auto check = [&](const FieldElement& a) {
        bool ok = true;
        for (std::size_t nu = 0; nu < d && ok; ++nu) {
            Interval r = abs(target[nu] - f.embed_at(a, nu, prec));
            if (r.certainly_le(beta)) continue;
            if (!beta.certainly_lt(r)) undecided = true;
            ok = false;
        }
        return ok;
    };
    // Approximate real coordinates through the inverse embedding matrix.
    RationalMatrix einv = inverse(f.spec().embeddings);
    std::vector<Rational> y(d, Rational(0));
    for (std::size_t j = 0; j < d; ++j) {
        Interval s(Rational(0), prec);
        for (std::size_t nu = 0; nu < d; ++nu) s += Interval(einv(j, nu), prec) * target[nu];
        y[j] = (s.lower() + s.upper()) / 2;
    }
    std::vector<Rational> a0(d);
    for (std::size_t j = 0; j < d; ++j) a0[j] = Rational(round_rational(y[j]));
    FieldElement first = f.element(a0);
    if (check(first)) return first;
    Rational radius = Rational(static_cast<long>(d)) * f.beta_squared() * Rational(1025, 1024) + Rational(1, 1 << 20);
    for (const auto& p : enumerate_near(f.trace_gram(), y, radius)) {
        FieldElement a = f.element(std::vector<Rational>(p.x.begin(), p.x.end()));
        if (check(a)) return a;
    }
    require(!undecided, ErrorCode::PrecisionExhausted, "enclosures too wide to certify the covering box");
    fail(ErrorCode::InvariantBreach, "no ring element within the covering box");
}

// ---- gcd ----

BezoutData ring_gcd(const FieldElement& a, const FieldElement& b) {
    const Field& f = a.field();
    if (b.is_zero()) return BezoutData{a, f.one(), f.zero()};
    if (a.is_zero()) return BezoutData{b, f.zero(), f.one()};
    FieldElement r0 = a, s0 = f.one(), t0 = f.zero();
    FieldElement r1 = b, s1 = f.zero(), t1 = f.one();
    const std::size_t d = f.d();
    while (!r1.is_zero()) {
        FieldElement exact = r0 * r1.inverse();
        std::vector<Rational> base(d);
        for (std::size_t j = 0; j < d; ++j) base[j] = Rational(round_rational(exact.coord(j)));
        Rational n1 = abs_rational(f.norm(r1));
        std::optional<FieldElement> best_q;
        Rational best_n;
        for (const auto& delta : exponent_box(d, 1)) {
            std::vector<Rational> c = base;
            for (std::size_t j = 0; j < d; ++j) c[j] += delta[j];
            FieldElement q = f.element(c);
            Rational n = abs_rational(f.norm(r0 - q * r1));
            if (!best_q || n < best_n) {
                best_q = q;
                best_n = n;
            }
        }
        if (best_n >= n1) return ideal_generator(a, b);
        FieldElement q = *best_q;
        FieldElement r2 = r0 - q * r1, s2 = s0 - q * s1, t2 = t0 - q * t1;
        r0 = r1;
        s0 = s1;
        t0 = t1;
        r1 = r2;
        s1 = s2;
        t1 = t2;
    }
    return BezoutData{r0, s0, t0};
}

BezoutData ideal_generator(const FieldElement& a, const FieldElement& b, const EnumOptions& opts) {
    const Field& f = a.field();
    const std::size_t d = f.d();
    require(!(a.is_zero() && b.is_zero()), ErrorCode::InvalidInput, "ideal generator of the zero ideal");
    require(f.supports_reduction(), ErrorCode::UnsupportedField, "principal generators need class number one");
    IntegerMatrix gens(d, 2 * d, Integer(0));
    for (std::size_t k = 0; k < d; ++k) {
        FieldElement x = a * f.basis_element(k), y = b * f.basis_element(k);
        for (std::size_t i = 0; i < d; ++i) {
            gens(i, k) = x.coord(i).get_num();
            gens(i, d + k) = y.coord(i).get_num();
        }
    }
    HermiteForm h = column_hnf(gens);
    Integer index = 1;
    for (std::size_t i = 0; i < d; ++i) index *= h.basis(i, i);
    RationalMatrix bq(d, d, Rational(0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) bq(i, j) = Rational(h.basis(i, j));
    RationalMatrix gram = multiply(multiply(transpose(bq), f.trace_gram()), bq);
    Rational bound = gram(0, 0);
    for (std::size_t i = 1; i < d; ++i) bound = std::min(bound, gram(i, i));
    for (int round = 0; round < 24; ++round, bound *= 2) {
        for (const auto& p : enumerate_short(gram, bound, opts)) {
            std::vector<Rational> c(d, Rational(0));
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) c[i] += bq(i, j) * p.x[j];
            FieldElement g = f.element(c);
            if (abs_rational(f.norm(g)) != Rational(index)) continue;
            std::vector<Rational> s(d, Rational(0)), t(d, Rational(0));
            for (std::size_t k = 0; k < 2 * d; ++k) {
                Integer w = 0;
                for (std::size_t j = 0; j < d; ++j) w += h.transform(k, j) * p.x[j];
                if (k < d)
                    s[k] = Rational(w);
                else
                    t[k - d] = Rational(w);
            }
            FieldElement sv(f, s), tv(f, t);
            require(sv * a + tv * b == g, ErrorCode::InvariantBreach, "Bezout coefficients do not reproduce the generator");
            return BezoutData{g, sv, tv};
        }
    }
    fail(ErrorCode::BudgetExceeded, "no principal generator found within the search budget");
}

} // namespace hermite
