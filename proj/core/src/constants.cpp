#include "hermite/constants.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hermite {

namespace {

Interval num(const Rational& q, mpfr_prec_t prec) { return Interval(q, prec); }
Interval num(long v, mpfr_prec_t prec) { return Interval(Rational(v), prec); }

Integer binomial(long n, long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

Integer factorial(long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

Integer floor_upper(const Interval& x) { return floor_rational(x.upper()); }

} // namespace

OmegaSigma omega_sigma(const Field& field, int n, mpfr_prec_t prec) {
    require(n >= 1, ErrorCode::InvalidInput, "rank must be positive");
    const long d = field.degree();
    OmegaSigma out{unit_ball_volume(n, prec), Interval(prec), Interval(prec), false};
    Interval disc = num(Rational(field.abs_discriminant()), prec);
    out.sigma = pow(num(4, prec), d) * pow(out.omega, ratio(-2 * d, n)) * disc;
    Interval base = exp(num(ratio(1 - n, n), prec)) * pow(num(n, prec), ratio(n + 1, n));
    out.sigma_bound = pow(base, d) * disc;
    out.bound_holds = out.sigma.certainly_le(out.sigma_bound);
    return out;
}

Rational harmonic(int m) {
    Rational s(0);
    for (int k = 1; k <= m; ++k) s += Rational(1, k);
    return s;
}

Interval alpha_exact(const Field& field, int m, mpfr_prec_t prec) {
    require(m >= 1, ErrorCode::InvalidInput, "alpha needs m >= 1");
    Interval r = omega_sigma(field, m + 1, prec).sigma;
    for (int k = 2; k <= m + 1; ++k) r *= pow(omega_sigma(field, k, prec).sigma, Rational(1, k - 1));
    return r;
}

Polynomial maclaurin_c(int m) {
    require(m >= 0, ErrorCode::InvalidInput, "series index must be nonnegative");
    if (m == 0) return Polynomial({Rational(1)});
    std::vector<Rational> coeffs(static_cast<std::size_t>(m) + 1, Rational(0));
    for (int k = 1; k <= m; ++k) {
        Rational c(binomial(m - 1, k - 1), factorial(k));
        c.canonicalize();
        coeffs[static_cast<std::size_t>(k)] = c;
    }
    return Polynomial(coeffs);
}

Interval evaluate_at(const Polynomial& p, const Interval& x) {
    Interval r = num(0, x.precision());
    const auto& c = p.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) r = r * x + num(c[k], x.precision());
    return r;
}

// ---- residue system ----

Integer prime_power(long p, int ell) {
    require(p >= 2 && ell >= 1, ErrorCode::InvalidInput, "prime power needs p >= 2 and l >= 1");
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(ell));
    return r;
}

long default_prime(const Field& field) {
    for (long p = 2;; ++p) {
        bool prime = true;
        for (long q = 2; q * q <= p; ++q)
            if (p % q == 0) prime = false;
        if (prime && field.discriminant() % p != 0) return p;
    }
}

void require_unramified(const Field& field, long p) {
    require(p >= 2, ErrorCode::InvalidInput, "p must be a prime");
    for (long q = 2; q * q <= p; ++q) require(p % q != 0, ErrorCode::InvalidInput, "p must be a prime");
    require(field.discriminant() % p != 0, ErrorCode::RamifiedPrime,
            "prime " + std::to_string(p) + " ramifies in " + field.name());
}

namespace {

PairData make_pair(const Field& field, std::vector<Integer> f) {
    PairData out;
    out.pi = field.zero();
    out.f_pi = field.zero();
    out.w_pi = field.zero();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const FieldElement& w = field.tp_basis()[i];
        out.pi += w * Rational(f[i]);
        out.f_pi += field.from_rational(Rational(f[i] * f[i]));
        out.w_pi += w * w;
    }
    out.f = std::move(f);
    return out;
}

Integer positive_mod(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

} // namespace

PairData residue_representative(const Field& field, const FieldElement& s, long p, int ell) {
    require(s.is_integral(), ErrorCode::InvalidInput, "residues are defined for integral elements");
    const Integer big = prime_power(p, ell);
    std::vector<Integer> g = field.tp_coordinates(s);
    std::vector<Integer> f;
    for (const auto& gi : g) f.push_back(positive_mod(gi - 1, big) + 1);
    return make_pair(field, std::move(f));
}

PairData pair_data(const Field& field, const FieldElement& pi, long p, int ell) {
    require(pi.is_integral(), ErrorCode::NotInP, "element is not integral");
    const Integer big = prime_power(p, ell);
    std::vector<Integer> f = field.tp_coordinates(pi);
    for (const auto& fi : f) require(fi >= 1 && fi <= big, ErrorCode::NotInP, "coordinate outside [1, p^l]");
    return make_pair(field, std::move(f));
}

std::vector<PairData> residue_system(const Field& field, long p, int ell) {
    require_unramified(field, p);
    const Integer big = prime_power(p, ell);
    Integer total = 1;
    for (std::size_t i = 0; i < field.d(); ++i) total *= big;
    require(total <= 1'000'000, ErrorCode::InvalidInput, "residue system too large to list");
    const long m = big.get_si();
    std::vector<PairData> out;
    std::set<std::vector<Integer>> classes;
    std::vector<Integer> f(field.d(), Integer(1));
    while (true) {
        PairData pd = make_pair(field, f);
        std::vector<Integer> key;
        for (const auto& c : pd.pi.coords()) key.push_back(positive_mod(c.get_num(), big));
        classes.insert(key);
        out.push_back(std::move(pd));
        std::size_t i = 0;
        while (i < f.size() && f[i] == m) f[i++] = 1;
        if (i == f.size()) break;
        ++f[i];
    }
    require(Integer(static_cast<long>(classes.size())) == total, ErrorCode::NotResidueSystem,
            "residue system does not cover O / p^l O");
    return out;
}

Rational sup_embedding_upper(const FieldElement& a) {
    const Field& f = a.field();
    Rational best = f.enclosure(a, 0).upper();
    for (std::size_t nu = 1; nu < f.d(); ++nu) best = std::max(best, f.enclosure(a, nu).upper());
    return best;
}

namespace {

// Ceiling of the largest embedding, certified against the enclosure width.
Integer ceil_sup_embedding(const FieldElement& a) {
    const Field& f = a.field();
    Integer best;
    for (std::size_t nu = 0; nu < f.d(); ++nu) {
        RationalEnclosure e = f.enclosure(a, nu);
        Integer lo = ceil_rational(e.lower()), hi = ceil_rational(e.upper());
        require(lo == hi, ErrorCode::PrecisionExhausted, "embedding too close to an integer to take its ceiling");
        if (nu == 0 || hi > best) best = hi;
    }
    return best;
}

} // namespace

Integer gamma_constant(const Field& field, long p, int ell) {
    require_unramified(field, p);
    // Every basis element is totally positive, so each of f_pi, w_pi and pi
    // is largest at f_i = p^l in every embedding.
    const Integer big = prime_power(p, ell);
    PairData top = make_pair(field, std::vector<Integer>(field.d(), big));
    Integer g = ceil_sup_embedding(top.f_pi);
    g = std::max(g, ceil_sup_embedding(top.w_pi));
    g = std::max(g, ceil_sup_embedding(top.pi));
    return g;
}

// ---- table ----

ConstantsTable::ConstantsTable(const Field& field, EffectiveConstants eff, mpfr_prec_t prec)
    : field_(&field), eff_(std::move(eff)), prec_(prec) {
    require(field.supports_reduction(), ErrorCode::UnsupportedField, "constants need class number one");
    require(eff_.prime >= 2 && eff_.ell >= 1, ErrorCode::InvalidInput, "constants need p and l");
    gamma_ = gamma_constant(field, eff_.prime, eff_.ell);
}

Interval ConstantsTable::beta() const { return field_->beta(prec_); }

namespace {

// |d_K|^(1 + Sigma(m)) e^((d/2) (ln m)^2).
Interval alpha_shape(const Field& field, int m, mpfr_prec_t prec) {
    Interval disc = num(Rational(field.abs_discriminant()), prec);
    Interval lnm = log(num(m, prec));
    return pow(disc, 1 + harmonic(m)) * exp(num(ratio(field.degree(), 2), prec) * lnm * lnm);
}

Interval c_shape(const Interval& beta, int m) {
    return exp(num(2, beta.precision()) * sqrt(beta * num(m, beta.precision())));
}

Interval thresholds_max(const Thresholds& t) {
    return max(max(max(t.step1, t.step2), max(t.step3a, t.step3b)), t.step3c);
}

} // namespace

Interval ConstantsTable::alpha_bar(int m) const {
    require(m >= 1, ErrorCode::InvalidInput, "alpha bar needs m >= 1");
    return num(eff_.d1, prec_) * alpha_shape(*field_, m, prec_);
}

Interval ConstantsTable::d2() const {
    // Smallest D2 with alpha_bar(m) <= D2 e^sqrt(m) over the tabulated range.
    Interval best = alpha_bar(1) / exp(num(1, prec_));
    for (int m = 2; m <= eff_.nmax; ++m) best = max(best, alpha_bar(m) / exp(sqrt(num(m, prec_))));
    return best;
}

Interval ConstantsTable::c(int m) const { return evaluate_at(maclaurin_c(m), beta()); }

Interval ConstantsTable::c_bar(int m) const {
    require(m >= 0, ErrorCode::InvalidInput, "c bar needs m >= 0");
    return num(eff_.d4, prec_) * c_shape(beta(), m);
}

Interval ConstantsTable::c_j(int j) const {
    require(j >= 1, ErrorCode::InvalidInput, "C_j needs j >= 1");
    if (j == 1) return num(1, prec_);
    Interval lam = num(lambda(), prec_);
    Interval b = beta();
    return num(1, prec_) + b * b * lam * lam * pow(alpha_bar(j - 1), Rational(1, field_->degree())) * num(j - 1, prec_);
}

Interval ConstantsTable::delta(int n) const {
    Interval r = num(1, prec_);
    for (int j = 1; j <= n; ++j) r *= c_j(j);
    return r;
}

Thresholds ConstantsTable::thresholds(int n) const {
    require(n >= 2, ErrorCode::InvalidInput, "thresholds need n >= 2");
    const long d = field_->degree();
    const Interval nn = num(n, prec_);
    const Interval lam = num(lambda(), prec_);
    const Interval b = beta();
    const Interval ab = alpha_bar(n);
    const Interval ab_root = pow(ab, Rational(1, d));
    const Interval cb = c_bar(n);
    const Interval cb2 = cb * cb;
    const Interval lam_pow = pow(lam, d - 1);
    const Interval n3 = pow(nn, 3L);
    const Interval g = num(Rational(gamma_), prec_);
    const Interval r = num(ratio(eff_.r_eff, d), prec_);
    Thresholds t{Interval(prec_), Interval(prec_), Interval(prec_), Interval(prec_), Interval(prec_), Interval(prec_)};
    t.step1 = ab * lam_pow * pow(num(2, prec_) * b * lam * lam * n3 * ab_root * cb2, d);
    t.step2 = pow((nn * b * b + g) / (nn * nn * b), 2 * d) * lam_pow;
    t.step3a = lam_pow * ab * pow(num(4, prec_) * b * n3 * lam * lam * ab_root * cb2, d);
    t.step3b = lam_pow * pow(num(144, prec_) * pow(nn, 10L) * b * b * pow(lam, 8L) * pow(ab, ratio(4, d)) *
                                  pow(cb, 6L),
                              d);
    t.step3c = lam_pow * pow(num(2, prec_) * n3 * pow(lam, 4L) * pow(ab, ratio(2, d)) * cb2 *
                                 (num(4 * (n - 1), prec_) * g + r + b),
                             d);
    t.max = thresholds_max(t);
    return t;
}

Integer ConstantsTable::block_count(int n) const {
    return Integer(6 * n) + Integer(n) * (n - 1) / 2 * (field_->degree() + 5);
}

mpfr_prec_t ConstantsTable::integer_precision(int n) const {
    // Enough bits to resolve D5 e^(xi sqrt n) n to well below 1.
    Rational top = eff_.d5 * n * n;
    std::size_t bits = mpz_sizeinbase(top.get_num_mpz_t(), 2);
    double growth = eff_.xi.get_d() * std::sqrt(static_cast<double>(n)) / std::log(2.0);
    return prec_ + static_cast<mpfr_prec_t>(bits) + static_cast<mpfr_prec_t>(growth) + 64;
}

Integer ConstantsTable::g_bound(int n) const {
    require(n >= 1, ErrorCode::InvalidInput, "g bound needs n >= 1");
    mpfr_prec_t prec = integer_precision(n);
    Interval d5 = num(eff_.d5, prec), xi = num(eff_.xi, prec);
    Integer g = floor_upper(d5 * exp(xi));
    for (int k = 2; k <= n; ++k) {
        Integer step = floor_upper(d5 * exp(xi * sqrt(num(k, prec)))) + g;
        g = std::max(block_count(k), step);
    }
    return g;
}

Interval ConstantsTable::big_d() const {
    // D5 n e^(xi sqrt n) <= D5 (4 / e^2) e^((xi + 1) sqrt n) since n <= (4/e^2) e^sqrt(n).
    return num(eff_.d5, prec_) * num(4, prec_) * exp(num(-2, prec_));
}

std::optional<std::string> ConstantsTable::validate() const {
    for (int n = 1; n <= eff_.nmax + 1; ++n) {
        OmegaSigma os = omega_sigma(n);
        if (!os.bound_holds) return "sigma bound fails at n = " + std::to_string(n);
    }
    Interval one = num(1, prec_);
    for (int m = 1; m <= eff_.nmax; ++m) {
        Interval ab = alpha_bar(m);
        if (!max(one, alpha(m)).certainly_le(ab)) return "alpha bar below max(1, alpha) at m = " + std::to_string(m);
        if (m > 1 && !alpha_bar(m - 1).certainly_le(ab)) return "alpha bar decreases at m = " + std::to_string(m);
    }
    for (int m = 0; m <= eff_.nmax; ++m) {
        if (!c(m).certainly_le(c_bar(m))) return "c exceeds c bar at m = " + std::to_string(m);
        if (!one.certainly_le(c_bar(m))) return "c bar below 1 at m = " + std::to_string(m);
    }
    Interval d5 = num(eff_.d5, prec_), xi = num(eff_.xi, prec_);
    if (!(eff_.xi > 0)) return "xi must be positive";
    for (int n = 2; n <= eff_.nmax; ++n) {
        Interval rhs = d5 * exp(xi * sqrt(num(n, prec_)));
        if (!thresholds(n).max.certainly_le(rhs)) return "M(n) exceeds D5 e^(xi sqrt n) at n = " + std::to_string(n);
    }
    for (int n = 1; n <= eff_.nmax; ++n) {
        mpfr_prec_t prec = integer_precision(n);
        Interval nn = num(n, prec);
        Interval bound = num(eff_.d5, prec) * nn * exp(num(eff_.xi, prec) * sqrt(nn));
        if (!num(Rational(g_bound(n)), prec).certainly_le(bound))
            return "g bound exceeds D5 n e^(xi sqrt n) at n = " + std::to_string(n);
    }
    return std::nullopt;
}

EffectiveConstants ConstantsTable::derive(const Field& field, long prime, int ell, long r_eff, int nmax,
                                          mpfr_prec_t prec) {
    require(nmax >= 2, ErrorCode::InvalidInput, "nmax must be at least 2");
    EffectiveConstants eff;
    eff.field_name = field.name();
    eff.nmax = nmax;
    eff.prime = prime;
    eff.ell = ell;
    eff.r_eff = r_eff;

    Interval one = num(1, prec);
    Rational d1(0);
    for (int m = 1; m <= nmax; ++m) {
        Interval need = max(one, alpha_exact(field, m, prec)) / alpha_shape(field, m, prec);
        d1 = std::max(d1, need.upper());
    }
    eff.d1 = round_up_decimal(d1, 6);

    Interval beta = field.beta(prec);
    Rational d4(1);
    for (int m = 1; m <= nmax; ++m) {
        Interval need = evaluate_at(maclaurin_c(m), beta) / c_shape(beta, m);
        d4 = std::max(d4, need.upper());
    }
    eff.d4 = round_up_decimal(d4, 6);

    // (D5, xi): xi on a quarter grid, D5 the smallest admissible value for
    // that xi, keeping the pair that minimizes D5 e^(xi sqrt nmax).
    eff.d5 = 1;
    eff.xi = 1;
    ConstantsTable partial(field, eff, prec);
    std::vector<Interval> m_values;
    for (int n = 2; n <= nmax; ++n) m_values.push_back(partial.thresholds(n).max);
    std::optional<Interval> best_score;
    for (int k = 1; k <= 400; ++k) {
        Rational xi(k, 4);
        xi.canonicalize();
        Interval xi_i = num(xi, prec);
        Interval d5 = m_values[0] / exp(xi_i * sqrt(num(2, prec)));
        for (int n = 3; n <= nmax; ++n)
            d5 = max(d5, m_values[static_cast<std::size_t>(n - 2)] / exp(xi_i * sqrt(num(n, prec))));
        Rational d5_up = ceil_rational(d5.upper());
        if (d5_up < 1) d5_up = 1;
        Interval score = num(d5_up, prec) * exp(xi_i * sqrt(num(nmax, prec)));
        if (!best_score || score.upper() < best_score->upper()) {
            best_score = score;
            eff.d5 = d5_up;
            eff.xi = xi;
        }
    }
    return eff;
}

// ---- constants file ----

EffectiveConstants parse_constants(const std::string& text) {
    EffectiveConstants eff;
    std::istringstream in(text);
    std::string line;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key, value;
        if (!(ls >> key)) continue;
        require(static_cast<bool>(ls >> value), ErrorCode::InvalidInput, "constants key '" + key + "' has no value");
        seen.insert(key);
        if (key == "field")
            eff.field_name = value;
        else if (key == "nmax")
            eff.nmax = std::stoi(value);
        else if (key == "prime")
            eff.prime = std::stol(value);
        else if (key == "ell")
            eff.ell = std::stoi(value);
        else if (key == "r_eff")
            eff.r_eff = std::stol(value);
        else if (key == "r_sweep_hi")
            eff.r_sweep_hi = std::stol(value);
        else if (key == "ell_corpus")
            eff.ell_corpus = std::stol(value);
        else if (key == "d1")
            eff.d1 = parse_rational(value);
        else if (key == "d4")
            eff.d4 = parse_rational(value);
        else if (key == "d5")
            eff.d5 = parse_rational(value);
        else if (key == "xi")
            eff.xi = parse_rational(value);
        else
            fail(ErrorCode::InvalidInput, "unknown constants key '" + key + "'");
    }
    for (const char* k : {"field", "nmax", "prime", "ell", "r_eff", "d1", "d4", "d5", "xi"})
        require(seen.count(k) > 0, ErrorCode::InvalidInput, std::string("constants file lacks '") + k + "'");
    return eff;
}

std::string format_constants(const EffectiveConstants& eff) {
    std::ostringstream out;
    out << "field " << eff.field_name << '\n'
        << "nmax " << eff.nmax << '\n'
        << "prime " << eff.prime << '\n'
        << "ell " << eff.ell << '\n'
        << "r_eff " << eff.r_eff << '\n'
        << "r_sweep_hi " << eff.r_sweep_hi << '\n'
        << "ell_corpus " << eff.ell_corpus << '\n'
        << "d1 " << format_rational(eff.d1) << '\n'
        << "d4 " << format_rational(eff.d4) << '\n'
        << "d5 " << format_rational(eff.d5) << '\n'
        << "xi " << format_rational(eff.xi) << '\n';
    return out.str();
}

EffectiveConstants read_constants_file(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::InvalidInput, "cannot open constants file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_constants(buf.str());
}

} // namespace hermite
