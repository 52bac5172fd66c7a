#include "doctest.h"
#include "support.hpp"

#include "hermite/minima.hpp"
#include "hermite/reduction.hpp"
#include "hermite/ring.hpp"

#include <map>
#include <optional>

using namespace hermite;
using hermite::test::el;

namespace {

GramForm parse_form(const Field& f, const std::string& text) { return GramForm(parse_field_matrix(f, text)); }

const ConstantsTable& table(const char* name) {
    static std::map<std::string, std::unique_ptr<ConstantsTable>> cache;
    auto it = cache.find(name);
    if (it != cache.end()) return *it->second;
    auto f = test::field(name);
    EffectiveConstants eff = ConstantsTable::derive(*f, default_prime(*f), 1, 1, 16);
    return *cache.emplace(name, std::make_unique<ConstantsTable>(*f, eff)).first->second;
}

void check_equivalence(const GramForm& q, const ReductionResult& r) {
    const Field& f = q.field();
    CHECK(transform(q, r.transform) == r.reduced);
    CHECK(abs_rational(f.norm(field_determinant(r.transform))) == 1);
    CHECK(is_integral(r.transform));
    CHECK(assemble(r.lagrange) == r.reduced);
}

// Minimum of the lattice projected orthogonally to the first i basis
// vectors of q, by an integer box sweep over Q.
Rational projected_box_minimum(const GramForm& q, std::size_t i, long radius) {
    const std::size_t m = q.n() - i;
    std::vector<Rational> gram(m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            // Schur complement of the leading i x i block
            gram[a * m + b] = q(i + a, i + b).coord(0);
        }
    RationalMatrix lead(i, i), cross(i, m);
    for (std::size_t a = 0; a < i; ++a) {
        for (std::size_t b = 0; b < i; ++b) lead(a, b) = q(a, b).coord(0);
        for (std::size_t b = 0; b < m; ++b) cross(a, b) = q(a, i + b).coord(0);
    }
    if (i > 0) {
        RationalMatrix inv = inverse(lead);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                for (std::size_t c = 0; c < i; ++c)
                    for (std::size_t e = 0; e < i; ++e) gram[a * m + b] -= cross(c, a) * inv(c, e) * cross(e, b);
    }
    std::vector<long> z(m, -radius);
    std::optional<Rational> best;
    while (true) {
        bool nonzero = false;
        for (long v : z) nonzero = nonzero || v != 0;
        if (nonzero) {
            Rational v(0);
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b) v += gram[a * m + b] * z[a] * z[b];
            if (!best || v < *best) best = v;
        }
        std::size_t k = 0;
        while (k < m && z[k] == radius) z[k++] = -radius;
        if (k == m) break;
        ++z[k];
    }
    return *best;
}

} // namespace

TEST_SUITE("reduction") {

TEST_CASE("size reduction") {
    auto q = test::field("Q");
    GramForm g = parse_form(*q, "1, 5/2\n5/2, 10\n");
    LagrangeData l = lagrange_expand(g);
    SizeReduction s = size_reduce(l, field_identity(*q, 2));
    Rational u = s.data.inner(0, 1).coord(0);
    CHECK(abs_rational(u) <= Rational(1, 2));
    CHECK(s.data.outer == l.outer);
    auto f = test::field("Q-sqrt2");
    LagrangeData id = lagrange_expand(GramForm::identity(*f, 3));
    SizeReduction same = size_reduce(id, field_identity(*f, 3));
    CHECK(same.transform == field_identity(*f, 3));
}

TEST_CASE("unimodular completion") {
    auto f = test::field("Q-sqrt2");
    std::vector<FieldElement> y{el(*f, "3"), el(*f, "1 + sqrt2"), el(*f, "2")};
    FieldMatrix t = unimodular_completion(y);
    for (std::size_t i = 0; i < 3; ++i) CHECK(t(i, 0) == y[i]);
    CHECK(is_unit(field_determinant(t)));
    CHECK(is_integral(t));
}

TEST_CASE("HKZ reduction examples") {
    auto q = test::field("Q");
    GramForm g = parse_form(*q, "2, 1\n1, 2\n");
    ReductionResult r = hkz_reduce(g);
    check_equivalence(g, r);
    CHECK(r.lagrange.outer[0] == el(*q, "2"));
    CHECK(r.lagrange.outer[1] == el(*q, "3/2"));
    CHECK(abs_rational(r.lagrange.inner(0, 1).coord(0)) <= Rational(1, 2));

    ReductionResult id = hkz_reduce(GramForm::identity(*q, 4));
    CHECK(id.reduced == GramForm::identity(*q, 4));

    auto f = test::field("Q-sqrt2");
    GramForm d = parse_form(*f, "3 + 2*sqrt2, 0\n0, 1\n");
    ReductionResult rd = hkz_reduce(d);
    check_equivalence(d, rd);
    CHECK(f->norm(rd.lagrange.outer[0]) == 1);
    Certificate c = verify(rd.reduced, table("Q-sqrt2"));
    CHECK(c.hkz);
}

TEST_CASE("verify rejects unreduced forms") {
    auto q = test::field("Q");
    GramForm g = parse_form(*q, "1, 10\n10, 101\n");
    Certificate c = verify(g, table("Q"));
    // h = (1, 1) and min = 1: only the inner coefficient is out of range.
    CHECK(c.level == Level::Weakly);
    CHECK(c.weakly);
    CHECK_FALSE(c.hkz);
    CHECK(c.lagrange.inner(0, 1) == el(*q, "10"));
    CHECK_FALSE(c.failures.empty());
    Certificate id = verify(GramForm::identity(*q, 3), table("Q"));
    CHECK(id.level == Level::Balanced);
    for (const auto& m : id.margins) CHECK(m.holds);
    std::string text = format_certificate(id);
    CHECK(text.find("level balanced") != std::string::npos);
}

TEST_CASE("unipotent balancing") {
    auto q = test::field("Q");
    FieldMatrix x = field_identity(*q, 2);
    x(0, 1) = el(*q, "5/2");
    BalancedUnipotent b = balance_unipotent(x);
    FieldElement y = b.y(0, 1);
    CHECK((y == el(*q, "-2") || y == el(*q, "-3")));
    FieldMatrix xy = multiply(x, b.y);
    CHECK(abs_rational(xy(0, 1).coord(0)) == Rational(1, 2));

    BalancedUnipotent idb = balance_unipotent(field_identity(*q, 3));
    CHECK(idb.y == field_identity(*q, 3));
    for (const auto& z : idb.layers) CHECK(z == field_zero_matrix(*q, 3, 3));

    FieldMatrix x3 = field_identity(*q, 3);
    x3(0, 1) = el(*q, "1/3");
    x3(1, 2) = el(*q, "1/4");
    x3(0, 2) = el(*q, "1/5");
    BalancedUnipotent b3 = balance_unipotent(x3);
    FieldMatrix p = multiply(x3, b3.y);
    FieldMatrix prod = field_identity(*q, 3);
    for (const auto& z : b3.layers) prod = multiply(prod, nilpotent_exp(z));
    CHECK(prod == p);
    FieldMatrix pinv = field_inverse(p);
    const Rational bounds[] = {Rational(1), Rational(1, 2), Rational(5, 8)};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            CHECK(abs_rational(p(i, j).coord(0)) <= bounds[j - i]);
            CHECK(abs_rational(pinv(i, j).coord(0)) <= bounds[j - i]);
        }
}

TEST_CASE("random reductions reach their levels") {
    for (const char* name : {"Q", "Q-sqrt2", "Q-sqrt5"}) {
        auto f = test::field(name);
        const ConstantsTable& t = table(name);
        std::size_t top = f->d() == 1 ? 4 : 3;
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            std::size_t n = 1 + seed % top;
            GramForm g = random_pd_form(*f, n, seed);
            Rational m = minimum(g).minimum;

            ReductionResult h = hkz_reduce(g);
            check_equivalence(g, h);
            CHECK(f->norm(h.lagrange.outer[0]) == m);
            Certificate ch = verify(h.reduced, t);
            CHECK(ch.hkz);
            CHECK(ch.prop37);
            CHECK(ch.cross_check);
            CHECK(ch.minimum == m);

            ReductionResult b = balanced_hkz_reduce(g);
            check_equivalence(g, b);
            Certificate cb = verify(b.reduced, t);
            CHECK(cb.level == Level::Balanced);
            for (const auto& margin : cb.margins) CHECK_MESSAGE(margin.holds, margin.name);
        }
    }
}

TEST_CASE("outer coefficients match projected minima over Q") {
    auto q = test::field("Q");
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GramForm g = random_pd_form(*q, 2 + seed % 3, seed, {3, 2});
        ReductionResult r = hkz_reduce(g);
        for (std::size_t i = 0; i < r.lagrange.n(); ++i)
            CHECK(r.lagrange.outer[i].coord(0) == projected_box_minimum(r.reduced, i, 3));
    }
}

}
