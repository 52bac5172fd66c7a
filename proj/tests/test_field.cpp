#include "doctest.h"
#include "support.hpp"

#include "hermite/errors.hpp"
#include "hermite/ring.hpp"

using namespace hermite;
using hermite::test::el;

TEST_SUITE("field") {

TEST_CASE("arithmetic in Q(sqrt2)") {
    auto f = test::field("Q-sqrt2");
    FieldElement u = el(*f, "1 + sqrt2");
    CHECK(f->norm(u) == -1);
    CHECK(f->trace(u) == 2);
    CHECK(u * u == el(*f, "3 + 2*sqrt2"));
    CHECK(u.inverse() == el(*f, "-1 + sqrt2"));
    CHECK(u.pow(-2) == el(*f, "3 - 2*sqrt2"));
    CHECK(format_element(el(*f, "3 - 2*sqrt2")) == "3 - 2*sqrt2");
    CHECK(format_element(f->zero()) == "0");
    CHECK(format_element(el(*f, "-sqrt2")) == "-sqrt2");
}

TEST_CASE("golden ratio field") {
    auto f = test::field("Q-sqrt5");
    FieldElement phi = el(*f, "phi");
    CHECK(phi * phi == phi + f->one());
    CHECK(f->norm(phi) == -1);
    CHECK(f->discriminant() == 5);
}

TEST_CASE("exact signs and total positivity") {
    auto f = test::field("Q-sqrt2");
    FieldElement a = el(*f, "3 - 2*sqrt2");
    CHECK(f->is_totally_positive(a));
    CHECK(f->sign(el(*f, "1 - sqrt2"), 0) == -1);
    CHECK(f->sign(el(*f, "1 - sqrt2"), 1) == 1);
    CHECK_FALSE(f->is_totally_positive(el(*f, "sqrt2")));
    // Close to zero in one embedding: 99^2 - 2 * 70^2 = 1.
    FieldElement tiny = el(*f, "99 - 70*sqrt2");
    CHECK(f->sign(tiny, 0) == 1);
    CHECK(f->is_totally_positive(tiny));
}

TEST_CASE("unit data") {
    auto s2 = test::field("Q-sqrt2");
    const UnitData& u = s2->unit_data();
    CHECK(u.available);
    // 3 + 2 sqrt2
    CHECK(u.lambda.lower() > Rational(5828, 1000));
    CHECK(u.lambda.upper() < Rational(5829, 1000));
    CHECK(s2->lambda_impl() >= u.lambda.upper());
    CHECK(u.y_reps.size() == 2);
    CHECK(u.d3.lower() > Rational(36, 10));
    CHECK(u.d3.upper() < Rational(361, 100));

    auto s5 = test::field("Q-sqrt5");
    CHECK(s5->unit_data().lambda.lower() > Rational(2618, 1000));
    CHECK(s5->unit_data().lambda.upper() < Rational(2619, 1000));
    CHECK(s5->unit_data().y_reps.size() == 1);

    auto q = test::field("Q");
    CHECK(q->lambda_impl() == 1);
}

TEST_CASE("beta box and rounding") {
    auto f = test::field("Q-sqrt2");
    CHECK(f->beta_squared() == 2);
    FieldElement x = el(*f, "7/3 + 5/4*sqrt2");
    FieldElement a = round_to_ring(x);
    CHECK(a.is_integral());
    CHECK(f->in_beta_box(x - a));
    FieldElement y = el(*f, "2 + sqrt2");
    CHECK(f->in_beta_box(y - round_to_ring(y)));

    auto q = test::field("Q");
    CHECK(round_to_ring(el(*q, "5/2")) == el(*q, "3"));
    CHECK(round_to_ring(el(*q, "-7/3")) == el(*q, "-2"));
}

TEST_CASE("balancing units") {
    for (const char* name : {"Q-sqrt2", "Q-sqrt5"}) {
        auto f = test::field(name);
        for (long k = -5; k <= 5; ++k)
            for (const char* base : {"1", "2", "3", "5", "7"}) {
                FieldElement h = el(*f, base) * f->units()[0].pow(2 * k + 1) * f->units()[0].pow(2 * k + 1);
                FieldElement eps = balance_unit(h);
                CHECK(is_unit(eps));
                CHECK(ratio_within(eps * eps * h, f->lambda_impl()) == Verdict::Holds);
            }
    }
}

TEST_CASE("gcd and Bezout") {
    auto f = test::field("Q-sqrt2");
    FieldElement a = el(*f, "7 + 3*sqrt2"), b = el(*f, "5 - sqrt2");
    BezoutData g = ring_gcd(a, b);
    CHECK(g.s * a + g.t * b == g.g);
    CHECK(exact_quotient(a, g.g).has_value());
    CHECK(exact_quotient(b, g.g).has_value());
    BezoutData h = ideal_generator(el(*f, "6"), el(*f, "4 + 2*sqrt2"));
    CHECK(h.s * el(*f, "6") + h.t * el(*f, "4 + 2*sqrt2") == h.g);
    CHECK(abs_rational(f->norm(h.g)) == 4);
}

TEST_CASE("invalid tables are rejected") {
    FieldSpec spec = read_field_spec_file(std::string(HERMITE_FIELD_DIR) + "/Q-sqrt2.field");
    FieldSpec bad = spec;
    bad.discriminant = 12;
    CHECK_THROWS_AS(Field::load(bad), Error);
    FieldSpec bad_emb = spec;
    bad_emb.embeddings(0, 1) = Rational(14142, 10000);
    CHECK_THROWS_AS(Field::load(bad_emb), Error);
    FieldSpec bad_unit = spec;
    bad_unit.units[0] = {Rational(1), Rational(2)};
    CHECK_THROWS_AS(Field::load(bad_unit), Error);
}

}
