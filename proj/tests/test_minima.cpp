#include "doctest.h"
#include "support.hpp"

#include "hermite/minima.hpp"

#include <optional>

using namespace hermite;
using hermite::test::el;

namespace {

GramForm parse_form(const Field& f, const std::string& text) { return GramForm(parse_field_matrix(f, text)); }

// Smallest N(Q(x)) over a coordinate box, independent of the trace bound.
Rational box_minimum(const GramForm& q, long radius) {
    const Field& f = q.field();
    const std::size_t dim = q.n() * f.d();
    std::vector<long> z(dim, -radius);
    std::optional<Rational> best;
    while (true) {
        bool nonzero = false;
        for (long v : z) nonzero = nonzero || v != 0;
        if (nonzero) {
            std::vector<FieldElement> x;
            for (std::size_t i = 0; i < q.n(); ++i) {
                std::vector<Rational> c;
                for (std::size_t k = 0; k < f.d(); ++k) c.emplace_back(z[i * f.d() + k]);
                x.push_back(f.element(c));
            }
            Rational v = f.norm(q.evaluate(x));
            if (!best || v < *best) best = v;
        }
        std::size_t i = 0;
        while (i < dim && z[i] == radius) z[i++] = -radius;
        if (i == dim) break;
        ++z[i];
    }
    return *best;
}

} // namespace

TEST_SUITE("minima") {

TEST_CASE("trace forms") {
    auto f = test::field("Q-sqrt2");
    TraceFormData t = trace_form(GramForm::identity(*f, 1));
    CHECK(t.gram(0, 0) == 2);
    CHECK(t.gram(1, 1) == 4);
    CHECK(t.gram(0, 1) == 0);
    TraceFormData t2 = trace_form(GramForm::identity(*f, 2));
    CHECK(t2.gram(2, 2) == 2);
    CHECK(t2.gram(3, 3) == 4);
    CHECK(t2.gram(0, 2) == 0);
    auto pts = enumerate_below(t, 4);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].value == 2);
    CHECK(pts[1].value == 4);
    CHECK(enumerate_below(t, Rational(1, 2)).empty());
}

TEST_CASE("small minima") {
    auto q = test::field("Q");
    ShortVectorReport r = minimum(parse_form(*q, "2, 1\n1, 2\n"));
    CHECK(r.minimum == 2);
    CHECK(minimum(GramForm::identity(*q, 3)).minimum == 1);
    auto f = test::field("Q-sqrt2");
    ShortVectorReport u = minimum(parse_form(*f, "3 + 2*sqrt2\n"));
    CHECK(u.minimum == 1);
    CHECK(abs_rational(f->norm(u.witness[0])) == 1);
}

TEST_CASE("minimum matches a coordinate box sweep") {
    for (const char* name : {"Q", "Q-sqrt2", "Q-sqrt5"}) {
        auto f = test::field(name);
        for (std::uint64_t seed = 0; seed < 12; ++seed) {
            std::size_t n = f->d() == 1 ? 1 + seed % 3 : 1 + seed % 2;
            GramForm q = random_pd_form(*f, n, seed, {1, 2});
            ShortVectorReport r = minimum(q);
            CHECK(f->norm(q.evaluate(r.witness)) == r.minimum);
            CHECK(r.minimum == box_minimum(q, f->d() == 1 ? 3 : 2));
            CHECK(hermite_check(q, r).ratio.lower() <= 1);
        }
    }
}

TEST_CASE("unimodular invariance and scaling") {
    auto f = test::field("Q-sqrt2");
    GramForm q = random_pd_form(*f, 2, 7, {1, 2});
    FieldMatrix t = field_identity(*f, 2);
    t(0, 1) = el(*f, "1 + sqrt2");
    t(1, 0) = el(*f, "sqrt2");
    t(1, 1) = el(*f, "3 + sqrt2");  // det = 3 + sqrt2 - sqrt2 - 2 = 1
    CHECK(minimum(transform(q, t)).minimum == minimum(q).minimum);
    FieldElement c = el(*f, "1 + sqrt2");
    FieldMatrix scaled = q.entries();
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) scaled(i, j) *= c * c;
    CHECK(minimum(GramForm(scaled)).minimum == f->norm(c) * f->norm(c) * minimum(q).minimum);
    ShortVectorReport r = minimum(q);
    std::vector<FieldElement> w = r.witness;
    for (auto& x : w) x *= el(*f, "1 + sqrt2");
    CHECK(f->norm(q.evaluate(w)) == r.minimum);
}

TEST_CASE("Hermite margins over Q") {
    auto q = test::field("Q");
    GramForm g = parse_form(*q, "2, 1\n1, 2\n");
    HermiteReport h = hermite_check(g, minimum(g));
    // 2 <= (4/pi) sqrt 3
    CHECK(h.ratio.upper() < 1);
    CHECK(h.ratio.lower() > Rational(9, 10));
}

}
