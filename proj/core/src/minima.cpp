#include "hermite/minima.hpp"

#include "hermite/constants.hpp"

#include <algorithm>
#include <optional>

namespace hermite {

std::vector<FieldElement> TraceFormData::to_vector(const Field& field, const std::vector<Integer>& z) const {
    std::vector<FieldElement> x;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Rational> c(d);
        for (std::size_t k = 0; k < d; ++k) c[k] = Rational(z[i * d + k]);
        x.push_back(field.element(std::move(c)));
    }
    return x;
}

std::vector<Integer> TraceFormData::to_coordinates(const std::vector<FieldElement>& x) const {
    std::vector<Integer> z;
    for (const auto& xi : x) {
        require(xi.is_integral(), ErrorCode::InvalidInput, "vector is not integral");
        for (const auto& c : xi.coords()) z.push_back(c.get_num());
    }
    return z;
}

TraceFormData trace_form(const GramForm& q) {
    const Field& f = q.field();
    TraceFormData t;
    t.n = q.n();
    t.d = f.d();
    const std::size_t dim = t.n * t.d;
    t.gram = RationalMatrix(dim, dim, Rational(0));
    std::vector<FieldElement> products;
    for (std::size_t k = 0; k < t.d; ++k)
        for (std::size_t l = 0; l < t.d; ++l) products.push_back(f.basis_element(k) * f.basis_element(l));
    for (std::size_t i = 0; i < t.n; ++i)
        for (std::size_t j = 0; j < t.n; ++j)
            for (std::size_t k = 0; k < t.d; ++k)
                for (std::size_t l = 0; l < t.d; ++l)
                    t.gram(i * t.d + k, j * t.d + l) = f.trace(q(i, j) * products[k * t.d + l]);
    return t;
}

std::vector<LatticePoint> enumerate_below(const TraceFormData& t, const Rational& bound, const EnumOptions& opts) {
    return enumerate_short(t.gram, bound, opts);
}

namespace {

struct Candidate {
    Rational norm;
    Rational trace;
    std::vector<Integer> z;
};

// Smaller norm, then smaller trace, then the lexicographically larger vector.
bool better(const Candidate& a, const Candidate& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    if (a.trace != b.trace) return a.trace < b.trace;
    return a.z > b.z;
}

std::optional<Candidate> scan(const GramForm& q, const TraceFormData& t, const std::vector<LatticePoint>& pts) {
    const Field& f = q.field();
    std::optional<Candidate> best;
    for (const auto& p : pts) {
        FieldElement v = q.evaluate(t.to_vector(f, p.x));
        Candidate c{f.norm(v), p.value, p.x};
        if (!best || better(c, *best)) best = std::move(c);
    }
    return best;
}

} // namespace

ShortVectorReport minimum(const GramForm& q, const EnumOptions& opts) {
    const Field& f = q.field();
    require(f.supports_reduction(), ErrorCode::UnsupportedField, "minimum needs class number one");
    TraceFormData t = trace_form(q);
    Rational t0 = t.gram(0, 0);
    for (std::size_t i = 1; i < t.gram.rows(); ++i) t0 = std::min(t0, t.gram(i, i));
    auto first = enumerate_below(t, t0, opts);
    auto best = scan(q, t, first);
    require(best.has_value(), ErrorCode::InvariantBreach, "trace form has no vector below its smallest diagonal");

    // Every minimal vector has a unit multiple with lambda-balanced value,
    // whose trace is at most d lambda^((d-1)/d) N^(1/d).
    Rational bound = t0;
    std::size_t candidates = first.size();
    if (f.d() > 1) {
        const int d = f.degree();
        Interval radius = Interval(Rational(d), default_precision) *
                          pow(Interval(f.lambda_impl(), default_precision), Rational(d - 1, d)) *
                          pow(Interval(best->norm, default_precision), Rational(1, d));
        Rational second = radius.upper();
        if (second > t0) {
            bound = second;
            auto pts = enumerate_below(t, bound, opts);
            candidates = pts.size();
            best = scan(q, t, pts);
        }
    }
    ShortVectorReport r;
    r.minimum = best->norm;
    r.witness = t.to_vector(f, best->z);
    r.search_bound = bound;
    r.candidates = candidates;
    return r;
}

HermiteReport hermite_check(const GramForm& q, const ShortVectorReport& report) {
    const Field& f = q.field();
    const mpfr_prec_t prec = default_precision;
    DeterminantData det = determinant_data(q);
    HermiteReport h{report.minimum, det.norm, omega_sigma(f, static_cast<int>(q.n()), prec).sigma, Interval(prec)};
    Interval dq = pow(Interval(abs_rational(det.norm), prec), Rational(1, static_cast<long>(q.n())));
    h.ratio = Interval(report.minimum, prec) / (h.sigma * dq);
    require(!Interval(Rational(1), prec).certainly_lt(h.ratio), ErrorCode::ViolationDetected,
            "Hermite inequality violated");
    return h;
}

} // namespace hermite
