#include "hermite/calibration.hpp"

#include "hermite/errors.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace hermite {

namespace {

constexpr long modulus = 4;

struct ModRing {
    std::size_t d;
    std::size_t size;  // 4^d
    std::vector<long> mult;  // d^3 table reduced mod 4

    explicit ModRing(const Field& f) : d(f.d()), size(1) {
        for (std::size_t i = 0; i < d; ++i) size *= modulus;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = 0; k < d; ++k) {
                    const Rational& m = f.mult(i, j, k);
                    require(m.get_den() == 1, ErrorCode::InvalidTable, "integral basis products must be integral");
                    Integer r = m.get_num() % modulus;
                    if (r < 0) r += modulus;
                    mult.push_back(r.get_si());
                }
    }
    std::vector<long> digits(std::size_t key) const {
        std::vector<long> x(d);
        for (std::size_t i = 0; i < d; ++i, key /= modulus) x[i] = static_cast<long>(key % modulus);
        return x;
    }
    std::size_t key(const std::vector<long>& x) const {
        std::size_t k = 0;
        for (std::size_t i = d; i-- > 0;) k = k * modulus + static_cast<std::size_t>(((x[i] % modulus) + modulus) % modulus);
        return k;
    }
    std::size_t mul(std::size_t a, std::size_t b) const {
        auto x = digits(a), y = digits(b);
        std::vector<long> z(d, 0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = 0; k < d; ++k) z[k] += x[i] * y[j] * mult[(i * d + j) * d + k];
        return key(z);
    }
    std::size_t add(std::size_t a, std::size_t b) const {
        auto x = digits(a), y = digits(b);
        for (std::size_t i = 0; i < d; ++i) x[i] += y[i];
        return key(x);
    }
};

// Reachable sums of up to five terms from a generating set.
std::vector<bool> five_fold(std::size_t states, const std::vector<std::size_t>& gens,
                            const std::function<std::size_t(std::size_t, std::size_t)>& add) {
    std::vector<bool> reach(states, false);
    reach[0] = true;
    for (int round = 0; round < 5; ++round) {
        std::vector<bool> next = reach;
        for (std::size_t s = 0; s < states; ++s)
            if (reach[s])
                for (std::size_t g : gens) next[add(s, g)] = true;
        reach = std::move(next);
    }
    return reach;
}

// Symmetric 2 x 2 matrix: diagonal from nonnegative tp-basis combinations
// with coefficients in [0, 6], off-diagonal coordinates in [-3, 3].
FieldMatrix binary_draw(const Field& field, std::mt19937_64& rng) {
    FieldMatrix b(2, 2, field.zero());
    for (std::size_t i = 0; i < 2; ++i)
        for (const auto& t : field.tp_basis()) b(i, i) += field.from_rational(Rational(static_cast<long>(rng() % 7))) * t;
    std::vector<Rational> x(field.d());
    for (auto& c : x) c = Rational(static_cast<long>(rng() % 7) - 3);
    b(0, 1) = field.element(x);
    b(1, 0) = b(0, 1);
    return b;
}

} // namespace

LocalFilter::LocalFilter(const Field& field) : field_(&field) {
    ModRing ring(field);
    const std::size_t n = ring.size;
    std::vector<std::size_t> squares;
    for (std::size_t c = 0; c < n; ++c) squares.push_back(ring.mul(c, c));
    std::sort(squares.begin(), squares.end());
    squares.erase(std::unique(squares.begin(), squares.end()), squares.end());
    elements_ = five_fold(n, squares, [&](std::size_t a, std::size_t b) { return ring.add(a, b); });
    // Binary states (x, xy, y) packed base n; skipped when the table would be large.
    if (n * n * n * n * n <= 50'000'000) {
        std::vector<std::size_t> gens;
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t w = 0; w < n; ++w)
                gens.push_back(ring.mul(c, c) + n * ring.mul(c, w) + n * n * ring.mul(w, w));
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        binaries_ = five_fold(n * n * n, gens, [&](std::size_t a, std::size_t b) {
            return ring.add(a % n, b % n) + n * ring.add(a / n % n, b / n % n) + n * n * ring.add(a / (n * n), b / (n * n));
        });
    }
}

std::size_t LocalFilter::key(const FieldElement& a) const {
    require(a.is_integral(), ErrorCode::InvalidInput, "local filter needs integral elements");
    std::size_t k = 0;
    for (std::size_t i = field_->d(); i-- > 0;) {
        Integer r = a.coord(i).get_num() % modulus;
        if (r < 0) r += modulus;
        k = k * modulus + r.get_ui();
    }
    return k;
}

bool LocalFilter::element_admissible(const FieldElement& a) const { return elements_[key(a)]; }

bool LocalFilter::binary_admissible(const FieldMatrix& b) const {
    if (!element_admissible(b(0, 0)) || !element_admissible(b(1, 1))) return false;
    if (binaries_.empty()) return true;
    const std::size_t n = elements_.size();
    return binaries_[key(b(0, 0)) + n * key(b(0, 1)) + n * n * key(b(1, 1))];
}

std::vector<FieldElement> totally_positive_with_trace(const Field& field, long t) {
    std::vector<FieldElement> out;
    if (t <= 0) return out;
    const std::size_t d = field.d();
    std::vector<Rational> center = field.one_coords();
    for (auto& c : center) c *= ratio(t, static_cast<long>(d));
    // Positive embeddings summing to t lie within distance t of t/d.
    for (const auto& pt : enumerate_near(field.trace_gram(), center, Rational(t) * t)) {
        FieldElement a = field.element(std::vector<Rational>(pt.x.begin(), pt.x.end()));
        if (field.trace(a) == t && field.is_totally_positive(a)) out.push_back(a);
    }
    return out;
}

REffReport calibrate_r_eff(const Field& field, long sweep_hi, const RepresentOptions& opts) {
    REffReport rep;
    rep.sweep_hi = sweep_hi;
    LocalFilter filter(field);
    long worst = 0;
    for (long t = 1; t <= sweep_hi; ++t)
        for (const auto& a : totally_positive_with_trace(field, t)) {
            if (!filter.element_admissible(a)) {
                ++rep.skipped;
                continue;
            }
            ++rep.tested;
            bool ok = false;
            try {
                ok = represent_element(a, 5, opts).has_value();
            } catch (const Error& e) {
                if (e.code() != ErrorCode::BudgetExceeded) throw;
            }
            if (!ok) {
                rep.failures.push_back(a);
                worst = std::max(worst, t);
            }
        }
    rep.r_eff = worst + 1;
    return rep;
}

EllReport calibrate_ell(const Field& field, long p, int max_ell, long corpus, std::uint64_t seed,
                        const RepresentOptions& opts) {
    require_unramified(field, p);
    require(max_ell >= 1 && corpus >= 0, ErrorCode::InvalidInput, "bad calibration range");
    EllReport rep;
    rep.corpus = corpus;
    LocalFilter filter(field);
    for (int ell = 1; ell <= max_ell; ++ell) {
        const FieldElement scale = field.from_rational(Rational(prime_power(p, ell)));
        std::mt19937_64 rng(seed);
        long tested = 0, failed = 0, drawn = 0;
        while (tested < corpus && drawn < 200 * corpus) {
            ++drawn;
            FieldMatrix b = binary_draw(field, rng);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) b(i, j) *= scale;
            if (!is_positive_definite(GramForm(b)) || !filter.binary_admissible(b)) continue;
            ++tested;
            bool ok = false;
            try {
                ok = represent_binary(b, 5, opts).has_value();
            } catch (const Error& e) {
                if (e.code() != ErrorCode::BudgetExceeded) throw;
            }
            if (!ok) ++failed;
        }
        std::ostringstream line;
        line << "l " << ell << " tested " << tested << " failed " << failed;
        rep.log.push_back(line.str());
        rep.ell = ell;
        if (failed == 0 && tested == corpus) return rep;
    }
    fail(ErrorCode::WitnessNotFound, "no l up to " + std::to_string(max_ell) + " passes the binary corpus");
}

EffectiveConstants calibrate(const Field& field, const CalibrationParams& params, std::string* report) {
    const long p = default_prime(field);
    REffReport r = calibrate_r_eff(field, params.r_sweep_hi, params.represent);
    EllReport l = calibrate_ell(field, p, params.max_ell, params.ell_corpus, params.seed, params.represent);
    EffectiveConstants eff = ConstantsTable::derive(field, p, l.ell, r.r_eff, params.nmax);
    eff.r_sweep_hi = params.r_sweep_hi;
    eff.ell_corpus = params.ell_corpus;
    if (report) {
        std::ostringstream out;
        out << "r sweep 1.." << r.sweep_hi << " tested " << r.tested << " inadmissible " << r.skipped << " failures "
            << r.failures.size() << '\n';
        for (const auto& a : r.failures) out << "  no five squares: " << format_element(a) << '\n';
        for (const auto& line : l.log) out << line << '\n';
        *report = out.str();
    }
    return eff;
}

} // namespace hermite
