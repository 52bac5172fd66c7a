#include "hermite/field.hpp"

#include "hermite/errors.hpp"

#include <algorithm>
#include <numeric>

namespace hermite {

// ---- FieldElement ----

FieldElement::FieldElement(const Field& field, std::vector<Rational> coords) : field_(&field), coords_(std::move(coords)) {
    require(coords_.size() == field.d(), ErrorCode::InvariantBreach, "element has the wrong number of coordinates");
}

bool FieldElement::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational& q) { return q == 0; });
}

bool FieldElement::is_integral() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational& q) { return q.get_den() == 1; });
}

FieldElement FieldElement::operator-() const {
    FieldElement r = *this;
    for (auto& q : r.coords_) q = -q;
    return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
    coords_ = field_->multiply(coords_, o.coords_);
    return *this;
}

FieldElement& FieldElement::operator*=(const Rational& q) {
    for (auto& c : coords_) c *= q;
    return *this;
}

FieldElement FieldElement::inverse() const {
    require(!is_zero(), ErrorCode::Singular, "inverse of zero");
    RationalMatrix m = field_->regular_representation(*this);
    return FieldElement(*field_, solve(m, field_->one_coords()));
}

FieldElement FieldElement::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    FieldElement result = field_->one();
    FieldElement base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e > 0) base *= base;
    }
    return result;
}

// ---- Field ----

FieldElement Field::zero() const { return FieldElement(*this, std::vector<Rational>(d(), Rational(0))); }
FieldElement Field::one() const { return FieldElement(*this, one_); }

FieldElement Field::from_rational(const Rational& q) const {
    FieldElement r = one();
    r *= q;
    return r;
}

FieldElement Field::basis_element(std::size_t j) const {
    std::vector<Rational> c(d(), Rational(0));
    c[j] = 1;
    return FieldElement(*this, std::move(c));
}

FieldElement Field::element(std::vector<Rational> coords) const { return FieldElement(*this, std::move(coords)); }

std::vector<Rational> Field::multiply(const std::vector<Rational>& a, const std::vector<Rational>& b) const {
    const std::size_t n = d();
    std::vector<Rational> r(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (b[j] == 0) continue;
            Rational ab = a[i] * b[j];
            for (std::size_t k = 0; k < n; ++k) {
                const Rational& m = mult(i, j, k);
                if (m != 0) r[k] += ab * m;
            }
        }
    }
    return r;
}

RationalMatrix Field::regular_representation(const FieldElement& a) const {
    const std::size_t n = d();
    RationalMatrix m(n, n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        // column j = coordinates of a * b_j
        for (std::size_t i = 0; i < n; ++i) {
            if (a.coord(i) == 0) continue;
            for (std::size_t k = 0; k < n; ++k) m(k, j) += a.coord(i) * mult(i, j, k);
        }
    }
    return m;
}

Rational Field::norm(const FieldElement& a) const { return determinant(regular_representation(a)); }

Rational Field::trace(const FieldElement& a) const {
    Rational t = 0;
    for (std::size_t i = 0; i < d(); ++i) t += a.coord(i) * traces_[i];
    return t;
}

Polynomial Field::charpoly(const FieldElement& a) const { return characteristic_polynomial(regular_representation(a)); }

RationalEnclosure Field::enclosure(const FieldElement& a, std::size_t nu) const {
    RationalEnclosure e{Rational(0), Rational(0)};
    for (std::size_t j = 0; j < d(); ++j) {
        const Rational& c = a.coord(j);
        if (c == 0) continue;
        e.center += c * spec_.embeddings(nu, j);
        if (!exact_basis_[j]) e.radius += abs_rational(c);
    }
    e.radius *= radius_unit_;
    return e;
}

Interval Field::embed_at(const FieldElement& a, std::size_t nu, mpfr_prec_t prec) const {
    RationalEnclosure e = enclosure(a, nu);
    return Interval::hull(e.lower(), e.upper(), prec);
}

EmbeddingBox Field::embed(const FieldElement& a, mpfr_prec_t prec) const {
    EmbeddingBox box;
    box.precision = prec;
    for (std::size_t nu = 0; nu < d(); ++nu) box.values.push_back(embed_at(a, nu, prec));
    return box;
}

int Field::sign(const FieldElement& a, std::size_t nu) const {
    if (a.is_zero()) return 0;
    RationalEnclosure e = enclosure(a, nu);
    if (abs_rational(e.center) > e.radius) return sgn(e.center);
    // The enclosure straddles zero; count roots of the squarefree charpoly.
    SturmSequence sturm(squarefree_part(charpoly(a)));
    Rational lo = e.lower() - e.radius;
    Rational hi = e.upper() + e.radius;
    require(sturm.count_roots(lo, hi) == 1, ErrorCode::PrecisionExhausted,
            "conjugates too close to isolate at the stored embedding precision");
    return sturm.count_roots(lo, Rational(0)) == 1 ? -1 : 1;
}

bool Field::is_totally_positive(const FieldElement& a) const {
    for (std::size_t nu = 0; nu < d(); ++nu)
        if (sign(a, nu) <= 0) return false;
    return true;
}

bool Field::is_totally_nonnegative(const FieldElement& a) const {
    for (std::size_t nu = 0; nu < d(); ++nu)
        if (sign(a, nu) < 0) return false;
    return true;
}

Rational Field::beta_squared() const { return ratio(abs_discriminant(), 4); }

Interval Field::beta(mpfr_prec_t prec) const { return sqrt(Interval(beta_squared(), prec)); }

bool Field::in_beta_box(const FieldElement& a) const {
    return is_totally_nonnegative(from_rational(beta_squared()) - a * a);
}

std::vector<Integer> Field::tp_coordinates(const FieldElement& a) const {
    std::vector<Integer> out(d());
    for (std::size_t i = 0; i < d(); ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < d(); ++j) s += tp_inverse_(i, j) * a.coord(j);
        require(s.get_den() == 1, ErrorCode::InvariantBreach, "element is not integral");
        out[i] = s.get_num();
    }
    return out;
}

// ---- validation ----

namespace {

// Solves a consistent overdetermined system rows * x = rhs; returns false if
// inconsistent or underdetermined.
bool solve_consistent(RationalMatrix rows, std::vector<Rational> rhs, std::vector<Rational>& x) {
    const std::size_t m = rows.rows(), n = rows.cols();
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && rows(p, c) == 0) ++p;
        if (p == m) continue;
        for (std::size_t j = 0; j < n; ++j) std::swap(rows(r, j), rows(p, j));
        std::swap(rhs[r], rhs[p]);
        Rational piv = rows(r, c);
        for (std::size_t j = 0; j < n; ++j) rows(r, j) /= piv;
        rhs[r] /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || rows(i, c) == 0) continue;
            Rational f = rows(i, c);
            for (std::size_t j = 0; j < n; ++j) rows(i, j) -= f * rows(r, j);
            rhs[i] -= f * rhs[r];
        }
        pivots.push_back(c);
        ++r;
    }
    if (pivots.size() != n) return false;
    for (std::size_t i = r; i < m; ++i)
        if (rhs[i] != 0) return false;
    x.assign(n, Rational(0));
    for (std::size_t i = 0; i < r; ++i) x[pivots[i]] = rhs[i];
    return true;
}

Interval interval_det(const std::vector<std::vector<Interval>>& m) {
    const std::size_t n = m.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Interval total(Rational(0), m[0][0].precision());
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        Interval term(Rational(1), m[0][0].precision());
        for (std::size_t i = 0; i < n; ++i) term *= m[i][perm[i]];
        total = inversions % 2 ? total - term : total + term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

} // namespace

void Field::validate_table() {
    const std::size_t n = d();
    for (const auto& q : spec_.mult)
        require(q.get_den() == 1, ErrorCode::InvalidTable, "multiplication table is not integral");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                require(mult(i, j, k) == mult(j, i, k), ErrorCode::InvalidTable, "multiplication is not commutative");
    auto unit_vec = [n](std::size_t j) {
        std::vector<Rational> v(n, Rational(0));
        v[j] = 1;
        return v;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                auto lhs = multiply(multiply(unit_vec(i), unit_vec(j)), unit_vec(k));
                auto rhs = multiply(unit_vec(i), multiply(unit_vec(j), unit_vec(k)));
                require(lhs == rhs, ErrorCode::InvalidTable, "multiplication is not associative");
            }
    // Identity element e with e * b_j = b_j for all j.
    RationalMatrix rows(n * n, n, Rational(0));
    std::vector<Rational> rhs(n * n, Rational(0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) rows(j * n + k, i) = mult(i, j, k);
            rhs[j * n + k] = (j == k) ? 1 : 0;
        }
    require(solve_consistent(rows, rhs, one_), ErrorCode::InvalidTable, "ring has no identity element");
    for (const auto& q : one_) require(q.get_den() == 1, ErrorCode::InvalidTable, "identity is not integral");

    traces_.assign(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) traces_[j] += mult(j, k, k);
    trace_gram_ = RationalMatrix(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) trace_gram_(i, j) = trace(FieldElement(*this, multiply(unit_vec(i), unit_vec(j))));
    require(determinant(trace_gram_) == Rational(spec_.discriminant), ErrorCode::InvalidTable,
            "discriminant does not match the trace form of the table");
}

void Field::validate_totally_real() const {
    const std::size_t n = d();
    for (long attempt = 0; attempt < 16; ++attempt) {
        std::vector<Rational> c(n, Rational(0));
        for (std::size_t j = 0; j < n; ++j)
            c[j] = attempt == 0 ? Rational(j + 1 == n ? 1 : 0) : Rational(attempt * static_cast<long>(j + 1) + static_cast<long>(j * j));
        FieldElement theta(*this, c);
        Polynomial sf = squarefree_part(charpoly(theta));
        if (sf.degree() != static_cast<int>(n)) continue;
        SturmSequence s(sf);
        require(s.count_real_roots() == static_cast<int>(n), ErrorCode::NotTotallyReal,
                "a primitive element has non-real conjugates");
        return;
    }
    fail(ErrorCode::InvalidTable, "no primitive element found");
}

void Field::validate_embeddings() const {
    const std::size_t n = d();
    const mpfr_prec_t prec = std::max<mpfr_prec_t>(128, static_cast<mpfr_prec_t>(spec_.embedding_digits * 4 + 64));
    std::vector<std::vector<Interval>> e(n);
    for (std::size_t nu = 0; nu < n; ++nu)
        for (std::size_t j = 0; j < n; ++j) e[nu].push_back(embed_at(basis_element(j), nu, prec));
    for (std::size_t nu = 0; nu < n; ++nu)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Interval lhs = e[nu][i] * e[nu][j];
                Interval rhs(Rational(0), prec);
                for (std::size_t k = 0; k < n; ++k)
                    if (mult(i, j, k) != 0) rhs += Interval(mult(i, j, k), prec) * e[nu][k];
                require(lhs.overlaps(rhs), ErrorCode::EmbeddingMismatch, "embedding is not a ring homomorphism");
            }
    for (std::size_t j = 0; j < n; ++j) {
        Interval s(Rational(0), prec);
        for (std::size_t nu = 0; nu < n; ++nu) s += e[nu][j];
        require(s.contains(traces_[j]), ErrorCode::EmbeddingMismatch, "embedded values do not sum to the trace");
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            bool same = true;
            for (std::size_t j = 0; j < n; ++j) same = same && e[a][j].overlaps(e[b][j]);
            require(!same, ErrorCode::EmbeddingMismatch, "two embeddings coincide");
        }
    Interval det = interval_det(e);
    Interval det2 = det * det;
    require(det2.contains(Rational(abs_discriminant())), ErrorCode::EmbeddingMismatch,
            "embedding determinant does not match sqrt|d_K|");
}

void Field::validate_units_and_tp() {
    const std::size_t n = d();
    require(spec_.units.size() + 1 == n, ErrorCode::InvalidTable, "expected degree - 1 fundamental units");
    for (const auto& u : spec_.units) {
        FieldElement e(*this, u);
        require(e.is_integral(), ErrorCode::InvalidTable, "unit is not integral");
        Rational nm = norm(e);
        require(nm == 1 || nm == -1, ErrorCode::InvalidTable, "unit does not have norm +-1");
        units_.push_back(e);
    }
    require(spec_.tp_basis.size() == n, ErrorCode::InvalidTable, "totally positive basis needs degree elements");
    RationalMatrix t(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        FieldElement w(*this, spec_.tp_basis[i]);
        require(w.is_integral(), ErrorCode::InvalidTable, "totally positive basis element is not integral");
        require(is_totally_positive(w), ErrorCode::InvalidTable, "basis element is not totally positive");
        for (std::size_t j = 0; j < n; ++j) t(j, i) = w.coord(j);
        tp_.push_back(w);
    }
    Rational det = determinant(t);
    require(det == 1 || det == -1, ErrorCode::InvalidTable, "totally positive basis is not unimodular");
    tp_inverse_ = inverse(t);
    require(spec_.class_number >= 1, ErrorCode::InvalidTable, "class number must be positive");
}

std::shared_ptr<const Field> Field::load(const FieldSpec& spec) {
    require(spec.degree >= 1, ErrorCode::InvalidInput, "degree must be positive");
    const std::size_t n = static_cast<std::size_t>(spec.degree);
    require(spec.basis_names.size() == n, ErrorCode::InvalidInput, "basis has the wrong length");
    require(spec.mult.size() == n * n * n, ErrorCode::InvalidInput, "multiplication table is incomplete");
    require(spec.discriminant != 0, ErrorCode::InvalidInput, "discriminant must be nonzero");
    require(spec.embeddings.rows() == n && spec.embeddings.cols() == n, ErrorCode::InvalidInput,
            "embedding matrix is incomplete");
    require(spec.embedding_digits >= 10, ErrorCode::InvalidInput, "embedding precision below 10 digits");

    std::shared_ptr<Field> f(new Field());
    f->spec_ = spec;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, spec.embedding_digits);
    f->radius_unit_ = Rational(1, scale);
    f->radius_unit_.canonicalize();
    f->validate_table();
    // A basis element that is a rational multiple of 1 embeds exactly.
    f->exact_basis_.assign(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        bool rational = f->one_[j] != 0;
        for (std::size_t k = 0; k < n && rational; ++k)
            if (k != j && f->one_[k] != 0) rational = false;
        if (!rational) continue;
        Rational value = 1 / f->one_[j];
        bool exact = true;
        for (std::size_t nu = 0; nu < n; ++nu)
            if (spec.embeddings(nu, j) != value) exact = false;
        f->exact_basis_[j] = exact;
    }
    f->validate_totally_real();
    f->validate_embeddings();
    f->validate_units_and_tp();
    if (f->supports_reduction()) compute_unit_data(*f);
    return f;
}

} // namespace hermite
