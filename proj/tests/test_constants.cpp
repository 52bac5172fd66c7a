#include "doctest.h"
#include "support.hpp"

#include "hermite/constants.hpp"
#include "hermite/errors.hpp"

#include <map>

using namespace hermite;
using hermite::test::el;

namespace {

const ConstantsTable& table(const char* name) {
    static std::map<std::string, std::unique_ptr<ConstantsTable>> cache;
    auto it = cache.find(name);
    if (it != cache.end()) return *it->second;
    auto f = test::field(name);
    long p = default_prime(*f);
    EffectiveConstants eff = ConstantsTable::derive(*f, p, 1, 1, 16);
    auto t = std::make_unique<ConstantsTable>(*f, eff);
    return *cache.emplace(name, std::move(t)).first->second;
}

Interval pi_interval() { return Interval::pi(default_precision); }
Interval iv(const Rational& q) { return Interval(q, default_precision); }
bool close(const Interval& a, const Interval& b) {
    return abs_rational(a.upper() - b.lower()) < Rational(1, 1000000000) &&
           abs_rational(b.upper() - a.lower()) < Rational(1, 1000000000);
}

// c(m) straight from m c(m) = beta sum_{j=1}^m j c(m - j).
std::vector<Rational> c_recurrence(const Rational& beta, int top) {
    std::vector<Rational> c{Rational(1)};
    for (int m = 1; m <= top; ++m) {
        Rational s(0);
        for (int j = 1; j <= m; ++j) s += j * c[m - j];
        c.push_back(beta * s / m);
    }
    return c;
}

} // namespace

TEST_SUITE("constants") {

TEST_CASE("unit ball volumes and sigma") {
    auto q = test::field("Q");
    OmegaSigma s1 = omega_sigma(*q, 1);
    CHECK(s1.omega.contains(Rational(2)));
    CHECK(s1.sigma.contains(Rational(1)));
    OmegaSigma s2 = omega_sigma(*q, 2);
    Interval pi = pi_interval();
    CHECK(s2.omega.lower() <= pi.lower());
    CHECK(s2.omega.upper() >= pi.upper());
    CHECK(close(s2.sigma, iv(4) / pi));
    // Hermite's constant for n = 2 is 2/sqrt 3 < 4/pi
    CHECK(s2.sigma.lower() * s2.sigma.lower() * 3 > 4);
    for (const char* name : {"Q", "Q-sqrt2", "Q-sqrt5"}) {
        auto f = test::field(name);
        for (int n = 1; n <= 64; ++n) CHECK(omega_sigma(*f, n).bound_holds);
    }
}

TEST_CASE("harmonic sums and alpha") {
    CHECK(harmonic(1) == 1);
    CHECK(harmonic(2) == Rational(3, 2));
    CHECK(harmonic(4) == Rational(25, 12));
    auto q = test::field("Q");
    Interval a1 = alpha_exact(*q, 1);
    CHECK(close(a1, iv(16) / (pi_interval() * pi_interval())));
}

TEST_CASE("Maclaurin coefficients") {
    CHECK(maclaurin_c(0)(Rational(7)) == 1);
    Polynomial c1 = maclaurin_c(1);
    CHECK(c1(Rational(1, 2)) == Rational(1, 2));
    CHECK(c1(Rational(3)) == 3);
    CHECK(maclaurin_c(2)(Rational(1, 2)) == Rational(5, 8));
    for (Rational beta : {Rational(1, 2), Rational(2), Rational(5, 4)}) {
        auto c = c_recurrence(beta, 12);
        for (int m = 0; m <= 12; ++m) CHECK(maclaurin_c(m)(beta) == c[m]);
    }
}

TEST_CASE("residue systems and gamma") {
    auto q = test::field("Q");
    auto sys = residue_system(*q, 2, 1);
    REQUIRE(sys.size() == 2);
    CHECK(sys[0].f_pi == q->from_rational(1));
    CHECK(sys[1].f_pi == q->from_rational(4));
    CHECK(sys[0].w_pi == q->one());
    CHECK(gamma_constant(*q, 2, 1) == 4);
    CHECK(residue_system(*q, 3, 2).size() == 9);

    auto f = test::field("Q-sqrt2");
    PairData pd = pair_data(*f, el(*f, "3 + sqrt2"), 3, 1);
    CHECK(pd.f == std::vector<Integer>{1, 1});
    CHECK(pd.f_pi == f->from_rational(2));
    CHECK(pd.w_pi == el(*f, "7 + 4*sqrt2"));
    CHECK(residue_system(*f, 3, 1).size() == 9);
    CHECK(residue_system(*f, 3, 2).size() == 81);
    CHECK_THROWS_AS(require_unramified(*f, 2), Error);
    CHECK(residue_system(*test::field("Q-sqrt5"), 2, 1).size() == 4);

    Integer g = gamma_constant(*f, 3, 1);
    for (const auto& pair : residue_system(*f, 3, 1)) {
        CHECK(sup_embedding_upper(pair.f_pi) <= Rational(g));
        CHECK(sup_embedding_upper(pair.w_pi) <= Rational(g));
        CHECK(sup_embedding_upper(pair.pi) <= Rational(g));
    }
}

TEST_CASE("default primes") {
    CHECK(default_prime(*test::field("Q")) == 2);
    CHECK(default_prime(*test::field("Q-sqrt2")) == 3);
    CHECK(default_prime(*test::field("Q-sqrt5")) == 2);
}

TEST_CASE("derived tables validate") {
    for (const char* name : {"Q", "Q-sqrt2", "Q-sqrt5"}) {
        const ConstantsTable& t = table(name);
        CHECK_FALSE(t.validate().has_value());
        CHECK(t.lambda() >= 1);
        for (int m = 1; m < 16; ++m) {
            CHECK(t.alpha_bar(m).lower() >= 1);
            CHECK(t.alpha_bar(m + 1).lower() >= t.alpha_bar(m).lower());
            CHECK(t.alpha_bar(m).lower() >= t.alpha(m).upper());
            CHECK(t.c_bar(m).lower() >= 1);
            CHECK(t.c_bar(m + 1).lower() >= t.c_bar(m).lower());
            CHECK(t.c_bar(m).lower() >= t.c(m).upper());
        }
    }
}

TEST_CASE("thresholds and g bounds") {
    const ConstantsTable& t = table("Q");
    Interval prev_max = iv(0);
    for (int n = 2; n <= 10; ++n) {
        Thresholds th = t.thresholds(n);
        for (const Interval* v : {&th.step1, &th.step2, &th.step3a, &th.step3b, &th.step3c}) {
            CHECK(v->lower() > 0);
            CHECK(th.max.upper() >= v->upper());
        }
        CHECK(th.max.lower() >= prev_max.lower());
        prev_max = th.max;
        Interval bound = iv(t.effective().d5) * exp(iv(t.effective().xi) * sqrt(iv(n)));
        CHECK(bound.lower() >= th.max.upper());
    }
    CHECK(t.block_count(6) == 126);
    Integer prev(0);
    for (const char* name : {"Q", "Q-sqrt2"}) {
        const ConstantsTable& c = table(name);
        prev = 0;
        for (int n = 1; n <= 16; ++n) {
            Integer g = c.g_bound(n);
            CHECK(g >= prev);
            prev = g;
            Interval cap = iv(c.effective().d5 * n) *
                           exp(iv(c.effective().xi) * sqrt(iv(n)));
            CHECK(Rational(g) <= cap.upper());
        }
    }
}

TEST_CASE("constants files round trip") {
    const ConstantsTable& t = table("Q-sqrt2");
    std::string text = format_constants(t.effective());
    EffectiveConstants back = parse_constants(text);
    CHECK(format_constants(back) == text);
    CHECK(back.d5 == t.effective().d5);
    CHECK_THROWS_AS(parse_constants("field Q\nd1 x\n"), Error);
}

}
