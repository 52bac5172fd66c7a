#include "doctest.h"
#include "support.hpp"

#include "hermite/errors.hpp"
#include "hermite/form.hpp"

using namespace hermite;
using hermite::test::el;

namespace {

GramForm parse_form(const Field& f, const std::string& text) { return GramForm(parse_field_matrix(f, text)); }

} // namespace

TEST_SUITE("form") {

TEST_CASE("Lagrange expansion over Q") {
    auto f = test::field("Q");
    GramForm q = parse_form(*f, "2, 1\n1, 2\n");
    LagrangeData l = lagrange_expand(q);
    CHECK(l.outer[0] == el(*f, "2"));
    CHECK(l.outer[1] == el(*f, "3/2"));
    CHECK(l.inner(0, 1) == el(*f, "1/2"));
    CHECK(assemble(l) == q);
    DeterminantData det = determinant_data(q);
    CHECK(det.det == el(*f, "3"));
    CHECK(det.norm == 3);
    GramForm dual = dual_form(q);
    CHECK(dual == parse_form(*f, "2/3, -1/3\n-1/3, 2/3\n"));
}

TEST_CASE("identity and diagonal forms") {
    auto f = test::field("Q-sqrt2");
    GramForm id = GramForm::identity(*f, 3);
    LagrangeData l = lagrange_expand(id);
    for (const auto& h : l.outer) CHECK(h == f->one());
    CHECK(is_positive_definite(id));
    GramForm diag = parse_form(*f, "3 + 2*sqrt2, 0\n0, 3 - 2*sqrt2\n");
    DeterminantData det = determinant_data(diag);
    CHECK(det.det == f->one());
    CHECK(det.norm == 1);
    CHECK(dual_form(diag) == parse_form(*f, "3 - 2*sqrt2, 0\n0, 3 + 2*sqrt2\n"));
}

TEST_CASE("positive definiteness") {
    auto q = test::field("Q");
    CHECK_FALSE(is_positive_definite(parse_form(*q, "1, 2\n2, 1\n")));
    auto f = test::field("Q-sqrt2");
    CHECK(is_positive_definite(parse_form(*f, "1, sqrt2\nsqrt2, 3\n")));
    CHECK_FALSE(is_positive_definite(parse_form(*f, "sqrt2, 0\n0, 1\n")));
}

TEST_CASE("singular minors") {
    auto q = test::field("Q");
    CHECK_THROWS_AS(lagrange_expand(parse_form(*q, "0, 1\n1, 0\n")), Error);
    CHECK_THROWS_AS(GramForm(parse_field_matrix(*q, "1, 2\n3, 4\n")), Error);
}

TEST_CASE("round trip and duality on random forms") {
    for (const char* name : {"Q", "Q-sqrt2", "Q-sqrt5"}) {
        auto f = test::field(name);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            GramForm q = random_pd_form(*f, 1 + seed % 4, seed);
            CHECK(q.is_integral());
            CHECK(is_positive_definite(q));
            LagrangeData l = lagrange_expand(q);
            CHECK(assemble(l) == q);
            FieldElement prod = f->one();
            Rational norms(1);
            for (const auto& h : l.outer) {
                prod *= h;
                norms *= f->norm(h);
            }
            DeterminantData det = determinant_data(q);
            CHECK(det.det == prod);
            CHECK(det.norm == norms);
            CHECK(multiply(q.entries(), dual_form(q).entries()) == field_identity(*f, q.n()));
            CHECK(parse_field_matrix(*f, format_field_matrix(q.entries())) == q.entries());
        }
    }
}

TEST_CASE("random forms are reproducible") {
    auto f = test::field("Q");
    CHECK(random_pd_form(*f, 2, 0, {2, 2}) == random_pd_form(*f, 2, 0, {2, 2}));
    CHECK_FALSE(random_pd_form(*f, 3, 1) == random_pd_form(*f, 3, 2));
}

TEST_CASE("positivity agrees with a vector sweep") {
    auto f = test::field("Q");
    // Small symmetric matrices: definite iff every nonzero vector in a box
    // is positive, which the sweep approximates from one side.
    for (long a = -2; a <= 3; ++a)
        for (long b = -2; b <= 2; ++b)
            for (long c = -2; c <= 3; ++c) {
                FieldMatrix m = field_zero_matrix(*f, 2, 2);
                m(0, 0) = f->from_rational(a);
                m(0, 1) = m(1, 0) = f->from_rational(b);
                m(1, 1) = f->from_rational(c);
                GramForm q(m);
                bool sweep = true;
                for (long x = -3; x <= 3; ++x)
                    for (long y = -3; y <= 3; ++y) {
                        if (x == 0 && y == 0) continue;
                        if (a * x * x + 2 * b * x * y + c * y * y <= 0) sweep = false;
                    }
                CHECK(is_positive_definite(q) == sweep);
            }
}

TEST_CASE("Humbert components") {
    auto f = test::field("Q-sqrt2");
    GramForm q = parse_form(*f, "1, sqrt2\nsqrt2, 3\n");
    HumbertMatrix hm = HumbertMatrix::embed(q.entries());
    CHECK(hm.d() == 2);
    CHECK(hm[0](0, 1).contains(Rational(14142135, 10000000)) == false);
    CHECK(hm[0](0, 1).certainly_positive());
    CHECK(hm[1](0, 1).certainly_negative());
}

}
