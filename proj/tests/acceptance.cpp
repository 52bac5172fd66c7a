// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "cli.hpp"

#include "hermite/calibration.hpp"
#include "hermite/constants.hpp"
#include "hermite/errors.hpp"
#include "hermite/form.hpp"
#include "hermite/minima.hpp"
#include "hermite/reduction.hpp"
#include "hermite/sos.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

using namespace hermite;
namespace fs = std::filesystem;

namespace {

// Pinned limits.
constexpr double corpus_q_seconds = 300.0;    // criterion 1 runtime
constexpr double backbone_seconds = 60.0;     // criterion 7 per run
constexpr long q_entry_bound = 3;             // criterion 1 entries in [-3, 3]
constexpr std::size_t q_forms_per_rank = 70;  // ranks 2..4, plus all of rank 1
constexpr std::size_t q_min_forms = 200;
constexpr std::size_t quad_forms = 100;       // criteria 2 and 3 per field
constexpr int series_top = 32;                // criterion 3 c(m) range
constexpr long square_top = 500;              // criterion 6 range
constexpr int backbone_per_rank = 6;          // criterion 7, ranks 2 and 3
constexpr int threshold_nmax = 64;            // criterion 8
constexpr mpfr_prec_t wide_precision = 1024;  // criterion 8 comparisons

const std::string field_dir = HERMITE_FIELD_DIR;

std::shared_ptr<const Field> field(const std::string& name) {
    static std::map<std::string, std::shared_ptr<const Field>> cache;
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    return cache.emplace(name, load_field_file(field_dir + "/" + name + ".field")).first->second;
}

const ConstantsTable& constants(const std::string& name) {
    static std::map<std::string, std::unique_ptr<ConstantsTable>> cache;
    auto it = cache.find(name);
    if (it != cache.end()) return *it->second;
    auto eff = read_constants_file(field_dir + "/" + name + ".constants");
    return *cache.emplace(name, std::make_unique<ConstantsTable>(*field(name), eff)).first->second;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;
    void check(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

bool all_margins(const Certificate& c) {
    for (const auto& m : c.margins)
        if (!m.holds) return false;
    return true;
}

// Everything but the graded boxes, which only balanced forms must meet.
bool hkz_margins(const Certificate& c) {
    for (const auto& m : c.margins)
        if (m.name.rfind("graded", 0) != 0 && !m.holds) return false;
    return true;
}

bool prop37_margins(const Certificate& c, std::size_t& violations) {
    bool ok = true;
    for (const auto& m : c.margins)
        if (m.name.rfind("diag(", 0) == 0 || m.name == "det")
            if (!m.holds) {
                ++violations;
                ok = false;
            }
    return ok;
}

// Minimum over Z^n by exhausting |x_i| <= sqrt(m (Q^-1)_ii) with m the least
// diagonal entry, which contains every vector of value at most m.
Rational brute_minimum(const RationalMatrix& q) {
    const std::size_t n = q.rows();
    RationalMatrix inv = inverse(q);
    Rational m = q(0, 0);
    for (std::size_t i = 1; i < n; ++i) m = std::min(m, Rational(q(i, i)));
    std::vector<long> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rational b = m * inv(i, i);
        Integer s = isqrt(b.get_num() / b.get_den());
        while ((s + 1) * (s + 1) <= b) ++s;
        r[i] = s.get_si();
    }
    Rational best = m;
    std::vector<long> x(n);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            bool zero = true;
            for (long v : x) zero = zero && v == 0;
            if (zero) return;
            Rational v(0);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) v += q(a, b) * x[a] * x[b];
            best = std::min(best, v);
            return;
        }
        for (long v = -r[i]; v <= r[i]; ++v) {
            x[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return best;
}

RationalMatrix as_rational(const GramForm& q) {
    RationalMatrix m(q.n(), q.n());
    for (std::size_t i = 0; i < q.n(); ++i)
        for (std::size_t j = 0; j < q.n(); ++j) m(i, j) = q(i, j).coord(0);
    return m;
}

std::vector<GramForm> q_corpus() {
    auto f = field("Q");
    std::vector<GramForm> out;
    for (long a = 1; a <= q_entry_bound; ++a) out.push_back(GramForm(FieldMatrix(1, 1, f->from_rational(Rational(a)))));
    std::mt19937_64 rng(2024);
    for (std::size_t n = 2; n <= 4; ++n) {
        std::size_t kept = 0;
        while (kept < q_forms_per_rank) {
            FieldMatrix m(n, n, f->zero());
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j) {
                    long v = static_cast<long>(rng() % (2 * q_entry_bound + 1)) - q_entry_bound;
                    m(i, j) = m(j, i) = f->from_rational(Rational(v));
                }
            GramForm g(m);
            if (!is_positive_definite(g)) continue;
            out.push_back(g);
            ++kept;
        }
    }
    return out;
}

std::vector<GramForm> quad_corpus(const std::string& name) {
    std::vector<GramForm> out;
    for (std::size_t i = 0; i < quad_forms; ++i)
        out.push_back(random_pd_form(*field(name), 2 + i % 2, 1000 + i));
    return out;
}

// Shared reduction results for criteria 1, 2, 4 and 5.
struct Corpora {
    std::vector<GramForm> q = q_corpus();
    std::map<std::string, std::vector<GramForm>> quad{{"Q-sqrt2", quad_corpus("Q-sqrt2")},
                                                      {"Q-sqrt5", quad_corpus("Q-sqrt5")}};
    std::size_t prop37_checked = 0;
    std::size_t prop37_violations = 0;
};

Outcome criterion1(Corpora& c) {
    Outcome o;
    const ConstantsTable& table = constants("Q");
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < c.q.size(); ++k) {
        const GramForm& q = c.q[k];
        const std::string tag = "form " + std::to_string(k);
        ReductionResult r = hkz_reduce(q);
        o.check(transform(q, r.transform) == r.reduced, tag + ": Q[T] differs from Q'");
        const auto& h = r.lagrange.outer;
        o.check(h[0].coord(0) == brute_minimum(as_rational(q)), tag + ": h1 differs from the exhaustive minimum");
        for (std::size_t i = 0; i < h.size(); ++i)
            for (std::size_t j = i + 1; j < h.size(); ++j) {
                Integer three = 1, four = 1;
                for (std::size_t e = 0; e < j - i; ++e) {
                    three *= 3;
                    four *= 4;
                }
                o.check(three * h[i].coord(0) <= four * h[j].coord(0), tag + ": h_i <= (4/3)^(j-i) h_j fails");
            }
        // Hermite constant bound gamma_n <= (4/3)^((n-1)/2).
        const std::size_t n = q.n();
        Rational det = determinant_data(q).norm, lhs = 1, rhs = 1;
        for (std::size_t e = 0; e < 2 * n; ++e) lhs *= h[0].coord(0);
        for (std::size_t e = 0; e < n * (n - 1); ++e) rhs *= ratio(4, 3);
        o.check(lhs <= rhs * det * det, tag + ": classical Hermite bound fails");
        Certificate cert = verify(r.reduced, table);
        o.check(cert.hkz && hkz_margins(cert), tag + ": certificate below hkz");
        ++c.prop37_checked;
        prop37_margins(cert, c.prop37_violations);
    }
    double secs = seconds_since(t0);
    o.check(c.q.size() >= q_min_forms, "corpus too small");
    o.check(secs < corpus_q_seconds, "runtime over the limit");
    std::cerr << "criterion 1 runtime " << std::fixed << std::setprecision(1) << secs << " s\n";
    if (o.pass) o.detail = std::to_string(c.q.size()) + " forms, under " + std::to_string(static_cast<int>(corpus_q_seconds)) + " s";
    return o;
}

Outcome criterion2(Corpora& c) {
    Outcome o;
    std::size_t runs = 0;
    for (auto& [name, forms] : c.quad) {
        const ConstantsTable& table = constants(name);
        for (std::size_t k = 0; k < forms.size(); ++k) {
            const std::string tag = name + " form " + std::to_string(k);
            ReductionResult r = hkz_reduce(forms[k]);
            Rational nd = field(name)->norm(field_determinant(r.transform));
            o.check(nd == 1 || nd == -1, tag + ": N(det T) is not a unit norm");
            o.check(transform(forms[k], r.transform) == r.reduced, tag + ": Q[T] differs from Q'");
            Certificate cert = verify(r.reduced, table);
            o.check(cert.hkz && hkz_margins(cert), tag + ": certificate below hkz");
            ++c.prop37_checked;
            prop37_margins(cert, c.prop37_violations);
            ++runs;
        }
    }
    if (o.pass) o.detail = std::to_string(runs) + " reductions at level hkz";
    return o;
}

// c(m) from m c(m) = x sum_{j=1}^m j c(m - j) as polynomials in x.
std::vector<Polynomial> series_oracle(int top) {
    std::vector<Polynomial> c{Polynomial({Rational(1)})};
    const Polynomial x({Rational(0), Rational(1)});
    for (int m = 1; m <= top; ++m) {
        Polynomial s({Rational(0)});
        for (int j = 1; j <= m; ++j) s = s - Polynomial({Rational(-j)}) * c[m - j];
        c.push_back(Polynomial({ratio(1, m)}) * x * s);
    }
    return c;
}

Outcome criterion3(const Corpora& c) {
    Outcome o;
    std::size_t runs = 0;
    for (const auto& [name, forms] : c.quad) {
        const ConstantsTable& table = constants(name);
        for (std::size_t k = 0; k < forms.size(); ++k) {
            const std::string tag = name + " form " + std::to_string(k);
            ReductionResult r = balanced_hkz_reduce(forms[k]);
            o.check(transform(forms[k], r.transform) == r.reduced, tag + ": Q[T] differs from Q'");
            Certificate cert = verify(r.reduced, table);
            o.check(cert.balanced && all_margins(cert), tag + ": certificate below balanced");
            ++runs;
        }
    }
    auto oracle = series_oracle(series_top);
    for (int m = 0; m <= series_top; ++m) o.check(maclaurin_c(m) == oracle[m], "c(" + std::to_string(m) + ") differs");
    for (const char* name : {"Q", "Q-sqrt2", "Q-sqrt5"}) {
        const ConstantsTable& t = constants(name);
        Interval b = t.beta();
        o.check(t.c(0).contains(Rational(1)) && t.c(0).upper() == 1, std::string(name) + ": c(0) != 1");
        o.check(t.c(1).overlaps(b) && (t.c(1) - b).contains_zero(), std::string(name) + ": c(1) != beta");
        Interval two = b + b * b / Interval(2L, t.precision());
        o.check((t.c(2) - two).contains_zero(), std::string(name) + ": c(2) != beta + beta^2/2");
    }
    if (o.pass) o.detail = std::to_string(runs) + " balanced certificates, c(m) exact for m <= 32";
    return o;
}

Outcome criterion4(const Corpora& c) {
    Outcome o;
    std::size_t forms = 0;
    auto run = [&](const GramForm& q, const std::string& tag) {
        try {
            HermiteReport h = hermite_check(q, minimum(q));
            o.check(h.ratio.lower() <= 1, tag + ": min exceeds sigma_n d^(1/n)");
        } catch (const Error& e) {
            o.check(false, tag + ": " + e.what());
        }
        ++forms;
    };
    for (std::size_t k = 0; k < c.q.size(); ++k) run(c.q[k], "Q form " + std::to_string(k));
    for (const auto& [name, list] : c.quad)
        for (std::size_t k = 0; k < list.size(); ++k) run(list[k], name + " form " + std::to_string(k));
    if (o.pass) o.detail = std::to_string(forms) + " forms, zero violations";
    return o;
}

Outcome criterion5(const Corpora& c) {
    Outcome o;
    o.check(c.prop37_checked > 0, "no reduced outputs were checked");
    o.check(c.prop37_violations == 0, std::to_string(c.prop37_violations) + " violations");
    if (o.pass) o.detail = std::to_string(c.prop37_checked) + " HKZ outputs, zero violations";
    return o;
}

Outcome criterion6() {
    Outcome o;
    auto f = field("Q");
    long excluded = 0;
    for (long n = 0; n <= square_top; ++n) {
        FieldElement a = f->from_rational(Rational(n));
        auto four = represent_element(a, 4);
        bool four_ok = four.has_value();
        if (four_ok) {
            FieldElement s = f->zero();
            for (const auto& x : *four) s += x * x;
            four_ok = s == a;
        }
        o.check(four_ok, "k=4 fails at " + std::to_string(n));
        long m = n;
        while (m > 0 && m % 4 == 0) m /= 4;
        const bool legendre = n > 0 && m % 8 == 7;
        excluded += legendre;
        o.check(represent_element(a, 3).has_value() != legendre, "k=3 disagrees with 4^a(8b+7) at " + std::to_string(n));
    }
    if (o.pass) o.detail = "0.." + std::to_string(square_top) + ", " + std::to_string(excluded) + " NotFound for k=3";
    return o;
}

Outcome criterion7() {
    Outcome o;
    auto f = field("Q");
    const ConstantsTable& table = constants("Q");
    std::mt19937_64 rng(7);
    int runs = 0;
    double worst = 0;
    for (std::size_t n : {2u, 3u}) {
        Rational scaled = table.thresholds(static_cast<int>(n)).max.upper() * 3 / 2;
        Integer c = scaled.get_num() / scaled.get_den();
        for (int rep = 0; rep < backbone_per_rank; ++rep) {
            FieldMatrix e(n, n, f->zero());
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j) {
                    Rational v(static_cast<long>(rng() % 2001) - 1000);
                    if (i == j) v += Rational(c);
                    e(i, j) = e(j, i) = f->from_rational(v);
                }
            FieldMatrix t = field_identity(*f, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    t(i, j) = f->from_rational(Rational(static_cast<long>(rng() % 5) - 2));
            GramForm q = transform(GramForm(e), t);
            const std::string tag = "n=" + std::to_string(n) + " run " + std::to_string(rep);
            auto t0 = std::chrono::steady_clock::now();
            try {
                SosWitness w = backbone(q, table);
                double secs = seconds_since(t0);
                worst = std::max(worst, secs);
                o.check(secs < backbone_seconds, tag + ": over the time limit");
                o.check(multiply(transpose(w.forms), w.forms) == q.entries(), tag + ": identity fails");
                o.check(verify_sos(q, w), tag + ": verify_sos false");
                o.check(w.forms.rows() <= 6 * n + n * (n - 1) / 2 * (f->d() + 5), tag + ": too many forms");
            } catch (const Error& e) {
                o.check(false, tag + ": " + e.what());
            }
            ++runs;
        }
    }
    std::cerr << "criterion 7 slowest run " << std::fixed << std::setprecision(3) << worst << " s\n";
    if (o.pass) o.detail = std::to_string(runs) + " forms, each under " + std::to_string(static_cast<int>(backbone_seconds)) + " s";
    return o;
}

Outcome criterion8() {
    Outcome o;
    for (const char* name : {"Q", "Q-sqrt2", "Q-sqrt5"}) {
        const ConstantsTable& t = constants(name);
        const auto& eff = t.effective();
        o.check(eff.nmax >= threshold_nmax, std::string(name) + ": constants file covers fewer ranks");
        const Interval d5(eff.d5, wide_precision), xi(eff.xi, wide_precision);
        for (int n = 1; n <= threshold_nmax; ++n) {
            const std::string tag = std::string(name) + " n=" + std::to_string(n);
            Interval growth = d5 * exp(xi * sqrt(Interval(static_cast<long>(n), wide_precision)));
            if (n >= 2) {
                Interval m = t.thresholds(n).max;
                o.check(m.is_finite() && m.certainly_positive(), tag + ": threshold not finite and positive");
                o.check(Interval(m.upper(), wide_precision).certainly_le(growth), tag + ": M(n) > D5 e^(xi sqrt n)");
            }
            Interval g(Rational(t.g_bound(n)), wide_precision);
            o.check(g.certainly_le(Interval(static_cast<long>(n), wide_precision) * growth),
                    tag + ": g_bound > D5 n e^(xi sqrt n)");
        }
    }
    if (o.pass) o.detail = "3 fields, n <= " + std::to_string(threshold_nmax);
    return o;
}

// Every CLI report on fixed inputs, run twice.
std::string cli_reports(const fs::path& work) {
    fs::create_directories(work);
    {
        std::ofstream(work / "q2.txt") << "2, 1\n1, 2\n";
        std::ofstream(work / "r2.txt") << "3, 1 + sqrt2\n1 + sqrt2, 5\n";
        std::ofstream(work / "b.txt") << "6, 4\n4, 10\n";
    }
    const std::string q = field_dir + "/Q.field", r2 = field_dir + "/Q-sqrt2.field", r5 = field_dir + "/Q-sqrt5.field";
    const std::vector<std::vector<std::string>> commands{
        {"reduce", "--mode", "hkz", q, (work / "q2.txt").string()},
        {"reduce", "--mode", "balanced", r2, (work / "r2.txt").string()},
        {"verify", r2, (work / "r2.txt").string()},
        {"minvec", r2, (work / "r2.txt").string()},
        {"constants", "--field", r5, "--nmax", "8"},
        {"sos", "--field", q, "--target", "4", "--element", "479"},
        {"sos", "--field", q, "--target", "5", (work / "b.txt").string()},
        {"corpus", "--field", r2, "--n", "3", "--count", "3", "--seed", "5", "--out", (work / "corpus").string()},
    };
    std::ostringstream all;
    for (const auto& cmd : commands) {
        std::ostringstream out, err;
        int status = cli::run(cmd, out, err);
        all << "$";
        for (const auto& a : cmd) all << ' ' << fs::path(a).filename().string();
        all << "\nstatus " << status << '\n' << out.str() << err.str();
    }
    for (int i = 0; i < 3; ++i) {
        std::ostringstream name;
        name << "form_" << std::setw(4) << std::setfill('0') << i << ".txt";
        std::ifstream in(work / "corpus" / name.str(), std::ios::binary);
        all << in.rdbuf();
    }
    return all.str();
}

Outcome criterion9(const fs::path& work) {
    Outcome o;
    std::string first = cli_reports(work / "first");
    std::string second = cli_reports(work / "second");
    o.check(first == second, "reports differ between runs");
    o.check(first.find("status 0") != std::string::npos, "no command succeeded");
    if (o.pass) o.detail = std::to_string(first.size()) + " report bytes identical across two runs";
    return o;
}

} // namespace

int main(int argc, char** argv) {
    fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "hermite_acceptance";
    fs::remove_all(work);
    struct Entry {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    Corpora corpora;
    const std::vector<Entry> entries{
        {1, "Q degeneration oracle", [&] { return criterion1(corpora); }},
        {2, "real quadratic HKZ suite", [&] { return criterion2(corpora); }},
        {3, "balanced suite and c(m) series", [&] { return criterion3(corpora); }},
        {4, "Hermite inequality", [&] { return criterion4(corpora); }},
        {5, "diagonal and determinant bounds", [&] { return criterion5(corpora); }},
        {6, "four square oracle", [] { return criterion6(); }},
        {7, "backbone end to end", [] { return criterion7(); }},
        {8, "threshold sanity", [] { return criterion8(); }},
        {9, "determinism", [&] { return criterion9(work); }},
    };
    bool all = true;
    for (const auto& e : entries) {
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o.pass = false;
            o.detail = std::string("exception: ") + ex.what();
        }
        all = all && o.pass;
        std::cout << "AC" << e.id << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << e.title << ": " << o.detail << std::endl;
    }
    return all ? 0 : 1;
}
