#include "hermite/reduction.hpp"

#include "hermite/minima.hpp"
#include "hermite/ring.hpp"

#include <sstream>

namespace hermite {

std::string to_string(ReductionMode mode) { return mode == ReductionMode::Hkz ? "hkz" : "balanced"; }

std::string to_string(Level level) {
    switch (level) {
    case Level::None: return "none";
    case Level::Weakly: return "weakly";
    case Level::Hkz: return "hkz";
    case Level::Balanced: return "balanced";
    }
    return "none";
}

SizeReduction size_reduce(const LagrangeData& data, FieldMatrix transform) {
    LagrangeData out = data;
    const std::size_t n = data.n();
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = j; i-- > 0;) {
            FieldElement a = round_to_ring(out.unipotent(i, j));
            if (a.is_zero()) continue;
            for (std::size_t k = 0; k <= i; ++k) out.unipotent(k, j) -= a * out.unipotent(k, i);
            for (std::size_t r = 0; r < transform.rows(); ++r) transform(r, j) -= a * transform(r, i);
        }
    return SizeReduction{std::move(out), std::move(transform)};
}

FieldMatrix unimodular_completion(const std::vector<FieldElement>& y) {
    require(!y.empty(), ErrorCode::InvalidInput, "empty vector");
    const Field& f = y.front().field();
    const std::size_t m = y.size();
    std::vector<FieldElement> v = y;
    // v_inv accumulates the inverses of the row operations applied to v.
    FieldMatrix v_inv = field_identity(f, m);
    for (std::size_t k = m - 1; k >= 1; --k) {
        const FieldElement a = v[k - 1], b = v[k];
        if (b.is_zero()) continue;
        BezoutData g = ring_gcd(a, b);
        auto ap = exact_quotient(a, g.g);
        auto bp = exact_quotient(b, g.g);
        require(ap && bp, ErrorCode::InvariantBreach, "gcd does not divide its arguments");
        // [[s, t], [-b', a']] has determinant 1 and maps (a, b) to (g, 0).
        v[k - 1] = g.g;
        v[k] = f.zero();
        for (std::size_t r = 0; r < m; ++r) {
            FieldElement c0 = v_inv(r, k - 1), c1 = v_inv(r, k);
            v_inv(r, k - 1) = c0 * *ap + c1 * *bp;
            v_inv(r, k) = c1 * g.s - c0 * g.t;
        }
    }
    require(is_unit(v[0]), ErrorCode::InvariantBreach, "vector is not unimodular");
    for (std::size_t r = 0; r < m; ++r) v_inv(r, 0) *= v[0];
    for (std::size_t r = 0; r < m; ++r)
        require(v_inv(r, 0) == y[r], ErrorCode::InvariantBreach, "completion lost the first column");
    return v_inv;
}

namespace {

// Gram matrix of the projection onto the complement of the first j basis vectors.
GramForm projected_form(const LagrangeData& l, std::size_t j) {
    const std::size_t n = l.n();
    const std::size_t m = n - j;
    const Field& f = l.outer.front().field();
    FieldMatrix g = field_zero_matrix(f, m, m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b) {
            FieldElement s = f.zero();
            for (std::size_t i = j; i <= j + a; ++i) s += l.outer[i] * l.unipotent(i, j + a) * l.unipotent(i, j + b);
            g(a, b) = s;
            g(b, a) = s;
        }
    return GramForm(std::move(g));
}

FieldElement field_det_check(const FieldMatrix& t) {
    FieldElement det = field_determinant(t);
    require(is_unit(det), ErrorCode::InvariantBreach, "transformation is not invertible over O");
    return det;
}

} // namespace

ReductionResult hkz_reduce(const GramForm& q, const EnumOptions& opts) {
    const Field& f = q.field();
    require(f.supports_reduction(), ErrorCode::UnsupportedField, "reduction needs class number one");
    require(q.is_integral(), ErrorCode::InvalidInput, "reduction needs an integral form");
    require(is_positive_definite(q), ErrorCode::InvalidInput, "form is not positive definite");
    const std::size_t n = q.n();
    FieldMatrix t = field_identity(f, n);
    for (std::size_t j = 0; j < n; ++j) {
        LagrangeData l = lagrange_expand(transform(q, t));
        GramForm g = projected_form(l, j);
        ShortVectorReport rep = minimum(g, opts);
        std::vector<FieldElement> y = rep.witness;
        FieldElement eps = balance_unit(g.evaluate(y));
        for (auto& c : y) c *= eps;
        FieldMatrix c = unimodular_completion(y);
        FieldMatrix next = t;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t b = 0; b < n - j; ++b) {
                FieldElement s = f.zero();
                for (std::size_t a = 0; a < n - j; ++a) s += t(r, j + a) * c(a, b);
                next(r, j + b) = s;
            }
        t = std::move(next);
    }
    SizeReduction sr = size_reduce(lagrange_expand(transform(q, t)), t);
    ReductionResult out;
    out.transform = std::move(sr.transform);
    field_det_check(out.transform);
    out.reduced = transform(q, out.transform);
    out.lagrange = lagrange_expand(out.reduced);
    require(out.lagrange.outer == sr.data.outer && out.lagrange.unipotent == sr.data.unipotent,
            ErrorCode::InvariantBreach, "size reduction changed the expansion inconsistently");
    out.mode = ReductionMode::Hkz;
    return out;
}

FieldMatrix nilpotent_exp(const FieldMatrix& z) {
    const Field& f = z(0, 0).field();
    const std::size_t n = z.rows();
    FieldMatrix result = field_identity(f, n);
    FieldMatrix term = field_identity(f, n);
    for (std::size_t k = 1; k < n; ++k) {
        term = multiply(term, z);
        FieldMatrix scaled = term;
        Rational inv(1);
        for (std::size_t i = 2; i <= k; ++i) inv /= static_cast<long>(i);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) result(r, c) += scaled(r, c) * inv;
    }
    return result;
}

BalancedUnipotent balance_unipotent(const FieldMatrix& x) {
    const Field& f = x(0, 0).field();
    const std::size_t n = x.rows();
    for (std::size_t i = 0; i < n; ++i) {
        require(x(i, i) == f.one(), ErrorCode::InvalidInput, "matrix is not unipotent");
        for (std::size_t j = 0; j < i; ++j) require(x(i, j).is_zero(), ErrorCode::InvalidInput, "matrix is not upper triangular");
    }
    BalancedUnipotent out;
    out.y = field_identity(f, n);
    FieldMatrix r = x;
    for (std::size_t k = 1; k < n; ++k) {
        FieldMatrix yk = field_identity(f, n);
        for (std::size_t i = 0; i + k < n; ++i) yk(i, i + k) = -round_to_ring(r(i, i + k));
        FieldMatrix ry = multiply(r, yk);
        FieldMatrix z = field_zero_matrix(f, n, n);
        for (std::size_t i = 0; i + k < n; ++i) z(i, i + k) = ry(i, i + k);
        FieldMatrix minus_z = z;
        for (std::size_t i = 0; i + k < n; ++i) minus_z(i, i + k) = -z(i, i + k);
        r = multiply(nilpotent_exp(minus_z), ry);
        out.y = multiply(out.y, yk);
        out.layers.push_back(std::move(z));
    }
    require(r == field_identity(f, n), ErrorCode::InvariantBreach, "layer peeling left a nontrivial residual");
    return out;
}

ReductionResult balanced_hkz_reduce(const GramForm& q, const EnumOptions& opts) {
    ReductionResult base = hkz_reduce(q, opts);
    BalancedUnipotent bu = balance_unipotent(base.lagrange.unipotent);
    ReductionResult out;
    out.transform = multiply(base.transform, bu.y);
    field_det_check(out.transform);
    out.reduced = transform(q, out.transform);
    out.lagrange = lagrange_expand(out.reduced);
    require(out.lagrange.outer == base.lagrange.outer, ErrorCode::InvariantBreach,
            "unipotent balancing changed the outer coefficients");
    require(out.lagrange.unipotent == multiply(base.lagrange.unipotent, bu.y), ErrorCode::InvariantBreach,
            "unipotent balancing produced an unexpected expansion");
    out.layers = std::move(bu.layers);
    out.mode = ReductionMode::Balanced;
    return out;
}

// ---- verification ----

namespace {

// Exact test |u^(nu)| <= p(beta) for a polynomial p with nonnegative
// coefficients, using beta^2 = |d_K| / 4.
bool abs_le_beta_poly(const FieldElement& u, std::size_t nu, const Polynomial& p) {
    const Field& f = u.field();
    const Rational r = f.beta_squared();
    Rational a(0), b(0), power(1);
    const auto& c = p.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k % 2 == 0)
            a += c[k] * power;
        else {
            b += c[k] * power;
            power *= r;
        }
    }
    // p(beta) = a + b beta with a, b >= 0.
    FieldElement w = u * u - f.from_rational(a * a + b * b * r);
    if (f.sign(w, nu) <= 0) return true;
    FieldElement e = f.from_rational(4 * a * a * b * b * r) - w * w;
    return f.sign(e, nu) >= 0;
}

Interval abs_embed(const FieldElement& a, std::size_t nu) { return abs(a.field().embed_at(a, nu)); }

struct Checker {
    Certificate& cert;
    void add(std::string name, Interval value, bool holds) {
        if (!holds) cert.failures.push_back(name);
        cert.margins.push_back(Margin{std::move(name), std::move(value), holds});
    }
};

std::string pair_name(const char* prefix, std::size_t i, std::size_t j) {
    return std::string(prefix) + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

} // namespace

Certificate verify(const GramForm& q, const ConstantsTable& constants, const EnumOptions& opts) {
    Certificate cert;
    const Field& f = q.field();
    const mpfr_prec_t prec = constants.precision();
    const std::size_t n = q.n();
    const std::size_t d = f.d();
    Checker check{cert};
    const Interval one(Rational(1), prec);
    try {
        cert.lagrange = lagrange_expand(q);
        cert.minimum = minimum(q, opts).minimum;
    } catch (const Error& e) {
        cert.failures.push_back(std::string("expansion: ") + e.what());
        return cert;
    }
    const auto& h = cert.lagrange.outer;
    const FieldMatrix& u = cert.lagrange.unipotent;
    for (const auto& hi : h)
        if (!f.is_totally_positive(hi)) {
            cert.failures.push_back("outer coefficient not totally positive");
            return cert;
        }
    const Rational lambda = constants.lambda();
    const Interval lam(lambda, prec);

    // Outer coefficients: norm chain and embedding ratios.
    std::vector<Rational> norms;
    for (const auto& hi : h) norms.push_back(f.norm(hi));
    bool weakly = true;
    {
        bool eq = norms[0] == cert.minimum;
        check.add("N(h1)/min", Interval(norms[0], prec) / Interval(cert.minimum, prec), eq);
        weakly = weakly && eq;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Interval m = Interval(norms[i], prec) /
                         (constants.alpha_bar(static_cast<int>(j - i)) * Interval(norms[j], prec));
            bool ok = m.certainly_le(one);
            check.add(pair_name("chain", i, j), m, ok);
            weakly = weakly && ok;
        }
    for (std::size_t i = 0; i < n; ++i) {
        Interval m = max_embedding_ratio(h[i], prec) / lam;
        bool ok = ratio_within(h[i], lambda) == Verdict::Holds;
        check.add("ratio(" + std::to_string(i + 1) + ")", m, ok);
        weakly = weakly && ok;
    }

    // Inner coefficients: covering box and graded boxes for Q and Q^-1.
    const Interval beta = constants.beta();
    FieldMatrix u_inv = field_inverse(u);
    bool box = true, graded = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Interval mu(Rational(0), prec), mg(Rational(0), prec), md(Rational(0), prec);
            bool in_box = f.in_beta_box(u(i, j));
            Polynomial cm = maclaurin_c(static_cast<int>(j - i));
            Interval cv = constants.c(static_cast<int>(j - i));
            bool in_e = true, in_e_dual = true;
            for (std::size_t nu = 0; nu < d; ++nu) {
                mu = max(mu, abs_embed(u(i, j), nu) / beta);
                mg = max(mg, abs_embed(u(i, j), nu) / cv);
                md = max(md, abs_embed(u_inv(i, j), nu) / cv);
                in_e = in_e && abs_le_beta_poly(u(i, j), nu, cm);
                in_e_dual = in_e_dual && abs_le_beta_poly(u_inv(i, j), nu, cm);
            }
            check.add(pair_name("box", i, j), mu, in_box);
            check.add(pair_name("graded", i, j), mg, in_e);
            check.add(pair_name("graded_dual", i, j), md, in_e_dual);
            box = box && in_box;
            graded = graded && in_e && in_e_dual;
        }

    // Diagonal entries against outer coefficients.
    bool prop = true;
    FieldElement diag_prod = f.one();
    for (std::size_t j = 0; j < n; ++j) {
        const FieldElement& a = q(j, j);
        diag_prod *= a;
        bool lower = f.is_totally_nonnegative(a - h[j]);
        Interval cj = constants.c_j(static_cast<int>(j + 1));
        Interval m(Rational(0), prec);
        // a = h exactly when the column above j vanishes; C_j >= 1 settles it.
        bool upper = a == h[j];
        bool certified = true;
        for (std::size_t nu = 0; nu < d; ++nu) {
            Interval v = f.embed_at(a, nu, prec) / (cj * f.embed_at(h[j], nu, prec));
            m = max(m, v);
            certified = certified && v.certainly_le(one);
        }
        upper = upper || certified;
        check.add("diag(" + std::to_string(j + 1) + ")", m, lower && upper);
        prop = prop && lower && upper;
    }
    {
        FieldElement det = determinant_data(q).det;
        bool lower = f.is_totally_nonnegative(diag_prod - det);
        Interval delta = constants.delta(static_cast<int>(n));
        Interval m(Rational(0), prec);
        bool upper = diag_prod == det;
        bool certified = true;
        for (std::size_t nu = 0; nu < d; ++nu) {
            Interval v = f.embed_at(diag_prod, nu, prec) / (delta * f.embed_at(det, nu, prec));
            m = max(m, v);
            certified = certified && v.certainly_le(one);
        }
        upper = upper || certified;
        check.add("det", m, lower && upper);
        prop = prop && lower && upper;
    }

    // Redundant bound h_i^(nu) <= lambda^2 alpha_bar(n)^(1/d) h_j^(mu) for i <= j.
    bool cross = true;
    {
        Interval k = lam * lam * pow(constants.alpha_bar(static_cast<int>(n)), Rational(1, static_cast<long>(d)));
        Interval m(Rational(0), prec);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                Interval hi_max = f.embed_at(h[i], 0, prec), hj_min = f.embed_at(h[j], 0, prec);
                for (std::size_t nu = 1; nu < d; ++nu) {
                    hi_max = max(hi_max, f.embed_at(h[i], nu, prec));
                    hj_min = min(hj_min, f.embed_at(h[j], nu, prec));
                }
                Interval v = hi_max / (k * hj_min);
                m = max(m, v);
                cross = cross && v.certainly_le(one);
            }
        check.add("cross", m, cross);
    }

    cert.weakly = weakly;
    cert.hkz = weakly && box;
    cert.balanced = weakly && graded;
    cert.prop37 = prop;
    cert.cross_check = cross;
    cert.level = cert.balanced ? Level::Balanced : cert.hkz ? Level::Hkz : cert.weakly ? Level::Weakly : Level::None;
    return cert;
}

std::string format_certificate(const Certificate& c) {
    std::ostringstream out;
    out << "level " << to_string(c.level) << '\n';
    out << "weakly " << (c.weakly ? "yes" : "no") << '\n';
    out << "hkz " << (c.hkz ? "yes" : "no") << '\n';
    out << "balanced " << (c.balanced ? "yes" : "no") << '\n';
    out << "prop37 " << (c.prop37 ? "yes" : "no") << '\n';
    out << "cross_check " << (c.cross_check ? "yes" : "no") << '\n';
    out << "minimum " << format_rational(c.minimum) << '\n';
    for (std::size_t i = 0; i < c.lagrange.outer.size(); ++i)
        out << "outer " << i + 1 << " " << format_element(c.lagrange.outer[i]) << '\n';
    for (std::size_t i = 0; i < c.lagrange.outer.size(); ++i)
        for (std::size_t j = i + 1; j < c.lagrange.outer.size(); ++j)
            out << "inner " << i + 1 << " " << j + 1 << " " << format_element(c.lagrange.unipotent(i, j)) << '\n';
    for (const auto& m : c.margins)
        out << "margin " << m.name << " " << m.value.format(12) << " " << (m.holds ? "ok" : "FAIL") << '\n';
    return out.str();
}

} // namespace hermite
