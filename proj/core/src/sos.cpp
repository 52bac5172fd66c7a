#include "hermite/sos.hpp"

#include "hermite/errors.hpp"
#include "hermite/minima.hpp"
#include "hermite/ring.hpp"

#include <sstream>

namespace hermite {

namespace {

Interval iv(const Rational& q, mpfr_prec_t prec) { return Interval(q, prec); }

FieldMatrix gram_of(const FieldMatrix& rows, const Field& f, std::size_t n) {
    if (rows.rows() == 0) return field_zero_matrix(f, n, n);
    return multiply(transpose(rows), rows);
}

// Rows of an r x 2 witness placed into columns i and j of an r x n matrix.
FieldMatrix spread(const FieldMatrix& w, std::size_t n, std::size_t i, std::size_t j) {
    const Field& f = w(0, 0).field();
    FieldMatrix out = field_zero_matrix(f, w.rows(), n);
    for (std::size_t r = 0; r < w.rows(); ++r) {
        out(r, i) = w(r, 0);
        out(r, j) = w(r, 1);
    }
    return out;
}

FieldMatrix stack(const std::vector<FieldMatrix>& parts, const Field& f, std::size_t n) {
    std::size_t total = 0;
    for (const auto& p : parts) total += p.rows();
    FieldMatrix out = field_zero_matrix(f, total, n);
    std::size_t r = 0;
    for (const auto& p : parts)
        for (std::size_t i = 0; i < p.rows(); ++i, ++r)
            for (std::size_t j = 0; j < n; ++j) out(r, j) = p(i, j);
    return out;
}

// Strict certified inequality x < y, PrecisionExhausted when undecided.
bool strictly_less(const Interval& x, const Interval& y, const std::string& what) {
    if (x.certainly_lt(y)) return true;
    require(y.certainly_le(x), ErrorCode::PrecisionExhausted, "undecided comparison in " + what);
    return false;
}

} // namespace

bool pd_criteria(const std::vector<std::vector<Interval>>& a, const HumbertMatrix& s,
                 const std::optional<HumbertMatrix>& split) {
    require(a.size() == s.d(), ErrorCode::InvalidInput, "diagonal and symmetric parts differ in degree");
    for (std::size_t nu = 0; nu < s.d(); ++nu) {
        const Matrix<Interval>& sn = s[nu];
        const std::size_t n = sn.rows();
        require(a[nu].size() == n && sn.cols() == n, ErrorCode::InvalidInput, "shape mismatch in definiteness test");
        const Interval nn(Rational(static_cast<long>(n)), a[nu][0].precision());
        bool scaled = true;
        for (std::size_t i = 0; i < n && scaled; ++i) {
            if (!a[nu][i].certainly_positive()) scaled = false;
            for (std::size_t j = 0; j < n && scaled; ++j)
                scaled = (abs(sn(i, j)) * nn).certainly_lt(sqrt(a[nu][i] * a[nu][j]));
        }
        bool by_split = false;
        if (split) {
            const Matrix<Interval>& t = (*split)[nu];
            by_split = true;
            for (std::size_t i = 0; i < n && by_split; ++i) {
                Interval sum = t(i, 0);
                for (std::size_t j = 1; j < n; ++j) sum += t(i, j);
                by_split = sum.certainly_le(a[nu][i]);
                for (std::size_t j = 0; j < n && by_split; ++j)
                    by_split = t(i, j).certainly_positive() && (sn(i, j) * sn(i, j)).certainly_lt(t(i, j) * t(j, i));
            }
        }
        if (!scaled && !by_split) return false;
    }
    return true;
}

BlockDecomposition decompose_a_plus_s(const FieldMatrix& a, const FieldMatrix& s, const FieldMatrix& t,
                                      const DecomposeParams& params) {
    const std::size_t n = a.rows();
    require(n >= 2 && a.cols() == n && s.rows() == n && s.cols() == n && t.rows() == n && t.cols() == n,
            ErrorCode::InvalidInput, "decomposition needs n x n inputs with n >= 2");
    const Field& f = a(0, 0).field();
    const auto hyp = [](bool ok, const std::string& what) { require(ok, ErrorCode::HypothesisViolated, what); };
    hyp(is_integral(a) && is_integral(s) && is_integral(t), "A, S and the split must be integral");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            hyp(i == j || a(i, j).is_zero(), "A must be diagonal");
            hyp(s(i, j) == s(j, i), "S must be symmetric");
        }

    const Integer big = prime_power(params.p, params.ell);
    const FieldElement pl = f.from_rational(Rational(big));
    const FieldElement gamma = f.from_rational(Rational(params.gamma));
    const FieldElement nm1 = f.from_rational(Rational(static_cast<long>(n - 1)));

    BlockDecomposition out;
    out.pi = field_zero_matrix(f, n, n);
    out.pair_n = field_zero_matrix(f, n, n);
    out.t_prime = field_zero_matrix(f, n, n);
    out.delta = field_zero_matrix(f, n, n);
    out.q = field_zero_matrix(f, n, n);

    for (std::size_t i = 0; i < n; ++i) {
        FieldElement sum = f.zero();
        for (std::size_t j = 0; j < n; ++j) {
            hyp(f.is_totally_positive(t(i, j)), "t_" + std::to_string(i + 1) + std::to_string(j + 1) + " must be totally positive");
            sum += t(i, j);
        }
        hyp(sum == a(i, i), "row " + std::to_string(i + 1) + " of the split must sum to a_i");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            FieldElement pi = residue_representative(f, s(i, j), params.p, params.ell).pi;
            out.pi(i, j) = out.pi(j, i) = pi;
            auto q = exact_quotient(s(i, j) - pi, pl);
            require(q && q->is_integral(), ErrorCode::InvariantBreach, "residue does not match modulo p^l");
            out.q(i, j) = out.q(j, i) = *q;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            FieldElement e = s(i, j) - out.pi(i, j);
            hyp(f.is_totally_positive(t(i, j) * t(j, i) - e * e),
                "t_ij t_ji must exceed (s_ij - pi_ij)^2 at (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
        }
    // min_nu (t_ii + s_ii) > 2(n-1) gamma + r/d
    const FieldElement floor_bound = f.from_rational(Rational(2)) * nm1 * gamma +
                                     f.from_rational(ratio(params.r_eff, static_cast<long>(f.d())));
    for (std::size_t i = 0; i < n; ++i)
        hyp(f.is_totally_positive(t(i, i) + s(i, i) - floor_bound),
            "t_ii + s_ii must exceed 2(n-1) gamma + r/d at i = " + std::to_string(i + 1));

    // Pairs for i < j: n_ij = f_pi and n_ji = w_pi.
    std::vector<std::vector<PairMatrix>> pairs(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            PairMatrix pm = pair_matrix(out.pi(i, j), params.p, params.ell);
            out.pair_n(i, j) = pm.f_pi;
            out.pair_n(j, i) = pm.w_pi;
            pairs[i].push_back(std::move(pm));
        }
    // t_ij + gamma = n_ij + (p^l t'_ij - delta_ij) with delta_ij in the residue system.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            FieldElement r = t(i, j) + gamma - out.pair_n(i, j);
            FieldElement delta = residue_representative(f, -r, params.p, params.ell).pi;
            auto tp = exact_quotient(r + delta, pl);
            require(tp && tp->is_integral(), ErrorCode::InvariantBreach, "t' is not integral");
            require(f.is_totally_positive(*tp), ErrorCode::InvariantBreach, "t' is not totally positive");
            out.delta(i, j) = delta;
            out.t_prime(i, j) = *tp;
        }
    for (std::size_t i = 0; i < n; ++i) {
        FieldElement sub = nm1 * gamma;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) sub += out.delta(i, j);
        FieldElement b = t(i, i) + s(i, i) - sub;
        require(f.is_totally_positive(b), ErrorCode::InvariantBreach, "b_i is not totally positive");
        require(f.trace(b) > params.r_eff, ErrorCode::InvariantBreach, "Tr(b_i) does not exceed r");
        out.b.push_back(b);
    }

    // Blocks with witnesses.
    for (std::size_t i = 0; i < n; ++i) {
        auto c = represent_element(out.b[i], 5, params.represent);
        require(c.has_value(), ErrorCode::WitnessNotFound,
                "no five square representation of b_" + std::to_string(i + 1) + " = " + format_element(out.b[i]));
        Block blk{"diagonal", i, i, field_zero_matrix(f, n, n), field_zero_matrix(f, 5, n)};
        blk.gram(i, i) = out.b[i];
        for (std::size_t r = 0; r < 5; ++r) blk.witness(r, i) = (*c)[r];
        out.blocks.push_back(std::move(blk));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const PairMatrix& pm = pairs[i][j - i - 1];
            Block blk{"pair", i, j, field_zero_matrix(f, n, n), spread(pm.m, n, i, j)};
            blk.gram(i, i) = pm.f_pi;
            blk.gram(j, j) = pm.w_pi;
            blk.gram(i, j) = blk.gram(j, i) = out.pi(i, j);
            out.blocks.push_back(std::move(blk));
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            FieldMatrix b2 = field_zero_matrix(f, 2, 2);
            b2(0, 0) = pl * out.t_prime(i, j);
            b2(1, 1) = pl * out.t_prime(j, i);
            b2(0, 1) = b2(1, 0) = pl * out.q(i, j);
            require(f.is_totally_positive(b2(0, 0) * b2(1, 1) - b2(0, 1) * b2(0, 1)), ErrorCode::InvariantBreach,
                    "scaled block is not positive definite");
            auto w = represent_binary(b2, 5, params.represent);
            require(w.has_value(), ErrorCode::WitnessNotFound,
                    "no five square representation of the scaled block at (" + std::to_string(i + 1) + ", " +
                        std::to_string(j + 1) + ")");
            Block blk{"scaled", i, j, field_zero_matrix(f, n, n), spread(*w, n, i, j)};
            blk.gram(i, i) = b2(0, 0);
            blk.gram(j, j) = b2(1, 1);
            blk.gram(i, j) = blk.gram(j, i) = b2(0, 1);
            out.blocks.push_back(std::move(blk));
        }

    FieldMatrix total = field_zero_matrix(f, n, n);
    for (const auto& blk : out.blocks) {
        require(gram_of(blk.witness, f, n) == blk.gram, ErrorCode::InvariantBreach, "block witness mismatch");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) total(i, j) += blk.gram(i, j);
    }
    FieldMatrix target = a;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) target(i, j) += s(i, j);
    require(total == target, ErrorCode::InvariantBreach, "blocks do not sum to A + S");
    return out;
}

SosWitness backbone(const GramForm& q, const ConstantsTable& constants, const BackboneOptions& opts) {
    const Field& f = q.field();
    require(&f == &constants.field(), ErrorCode::InvalidInput, "form and constants use different fields");
    const std::size_t n = q.n();
    const std::size_t d = f.d();
    require(n >= 2, ErrorCode::InvalidInput, "the backbone needs at least two variables");
    require(q.is_integral() && is_positive_definite(q), ErrorCode::InvalidInput,
            "the backbone needs an integral positive definite form");
    const mpfr_prec_t prec = constants.precision();
    const int ni = static_cast<int>(n);

    SosWitness out;
    Rational m = minimum(q, opts.enumeration).minimum;
    Thresholds th = constants.thresholds(ni);
    require(th.max.certainly_lt(iv(m, prec)), ErrorCode::ThresholdNotMet,
            "min(Q) = " + m.get_str() + " does not exceed the threshold " + th.max.format(12));

    ReductionResult red = balanced_hkz_reduce(q, opts.enumeration);
    const GramForm& qr = red.reduced;
    const auto& h = red.lagrange.outer;
    const FieldMatrix& u = red.lagrange.unipotent;
    const FieldMatrix y = field_inverse(u);
    out.transform = red.transform;

    const Interval nn = iv(Rational(static_cast<long>(n)), prec);
    const Interval lam = iv(constants.lambda(), prec);
    const Interval beta = constants.beta();
    const Interval ab_root = pow(constants.alpha_bar(ni), ratio(1, static_cast<long>(d)));
    const Interval cb = constants.c_bar(ni);
    const Interval scale = nn * nn * nn * lam * lam * ab_root * cb * cb;
    const Interval two_beta = beta + beta;

    // Step 1: a_k in O with eta_k - 2 beta < a_k < eta_k in every embedding.
    std::vector<FieldElement> ak;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Interval> target, eta;
        for (std::size_t nu = 0; nu < d; ++nu) {
            eta.push_back(f.embed_at(h[k], nu, prec) / scale);
            target.push_back(eta.back() - beta);
        }
        FieldElement a = round_to_ring(f, target);
        for (std::size_t nu = 0; nu < d; ++nu) {
            Interval av = f.embed_at(a, nu, prec);
            require(strictly_less(eta[nu] - two_beta, av, "step 1") && strictly_less(av, eta[nu], "step 1"),
                    ErrorCode::HypothesisViolated, "a_k misses its window in step 1");
        }
        require(f.is_totally_positive(a), ErrorCode::HypothesisViolated, "a_k is not totally positive");
        ak.push_back(a);
    }
    out.a = field_zero_matrix(f, n, n);
    const FieldElement nf = f.from_rational(Rational(static_cast<long>(n)));
    for (std::size_t k = 0; k < n; ++k) out.a(k, k) = nf * ak[k];

    // I - A[U^-1 sqrt(H)^-1] through the small-entry criterion.
    std::vector<Matrix<Interval>> g_comp;
    std::vector<std::vector<Interval>> ones;
    Interval g_margin = iv(0, prec);
    for (std::size_t nu = 0; nu < d; ++nu) {
        Matrix<Interval> g(n, n, Interval(prec));
        std::vector<Interval> sh;
        for (std::size_t i = 0; i < n; ++i) sh.push_back(sqrt(f.embed_at(h[i], nu, prec)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Interval acc = iv(0, prec);
                for (std::size_t k = 0; k <= std::min(i, j); ++k)
                    acc += f.embed_at(out.a(k, k) * y(k, i) * y(k, j), nu, prec);
                g(i, j) = -(acc / (sh[i] * sh[j]));
                g_margin = max(g_margin, abs(g(i, j)) * nn);
            }
        g_comp.push_back(std::move(g));
        ones.emplace_back(n, iv(1, prec));
    }
    bool step1 = pd_criteria(ones, HumbertMatrix(g_comp));
    out.margins.push_back(Margin{"step1", g_margin, step1});
    require(step1, ErrorCode::HypothesisViolated, "Q - A is not certified positive definite");
    {
        FieldMatrix diff = qr.entries();
        for (std::size_t k = 0; k < n; ++k) diff(k, k) -= out.a(k, k);
        require(is_positive_definite(GramForm(diff)), ErrorCode::InvariantBreach, "Q - A is not positive definite");
    }

    // Step 2: N^t N = I - A[U^-1 sqrt(H)^-1], W = N sqrt(H) U, P = round(W).
    std::vector<Matrix<Interval>> w_comp;
    for (std::size_t nu = 0; nu < d; ++nu) {
        Matrix<Interval> mtx(n, n, Interval(prec));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) mtx(i, j) = (i == j ? iv(1, prec) : iv(0, prec)) + g_comp[nu](i, j);
        Matrix<Interval> nmat(n, n, iv(0, prec));  // upper triangular
        for (std::size_t j = 0; j < n; ++j) {
            Interval diag = mtx(j, j);
            for (std::size_t k = 0; k < j; ++k) diag -= nmat(k, j) * nmat(k, j);
            require(diag.certainly_positive(), ErrorCode::PrecisionExhausted, "Cholesky pivot is not certified positive");
            nmat(j, j) = sqrt(diag);
            for (std::size_t i = j + 1; i < n; ++i) {
                Interval v = mtx(j, i);
                for (std::size_t k = 0; k < j; ++k) v -= nmat(k, j) * nmat(k, i);
                nmat(j, i) = v / nmat(j, j);
            }
        }
        Matrix<Interval> w(n, n, iv(0, prec));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                Interval acc = iv(0, prec);
                for (std::size_t k = i; k <= j; ++k)
                    acc += nmat(i, k) * sqrt(f.embed_at(h[k], nu, prec)) * f.embed_at(u(k, j), nu, prec);
                w(i, j) = acc;
            }
        w_comp.push_back(std::move(w));
    }
    out.p = field_zero_matrix(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            std::vector<Interval> target;
            for (std::size_t nu = 0; nu < d; ++nu) target.push_back(w_comp[nu](i, j));
            out.p(i, j) = round_to_ring(f, target);
        }
    out.s = qr.entries();
    {
        FieldMatrix ptp = multiply(transpose(out.p), out.p);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out.s(i, j) -= out.a(i, j) + ptp(i, j);
    }
    require(is_integral(out.s), ErrorCode::InvariantBreach, "S is not integral");
    // |s_ij|_nu <= 2 n^2 beta c_bar(j) lambda sqrt(alpha_bar(n)^(1/d) h_j) + n beta^2 for i <= j.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Interval worst = iv(0, prec);
            bool ok = true;
            for (std::size_t nu = 0; nu < d; ++nu) {
                Interval bound = iv(2, prec) * nn * nn * beta * constants.c_bar(static_cast<int>(j + 1)) * lam *
                                     sqrt(ab_root * f.embed_at(h[j], nu, prec)) +
                                 nn * beta * beta;
                Interval v = abs(f.embed_at(out.s(i, j), nu, prec)) / bound;
                worst = max(worst, v);
                ok = ok && v.certainly_le(iv(1, prec));
            }
            out.margins.push_back(Margin{"s(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", worst, ok});
            require(ok, ErrorCode::InvariantBreach, "entry of S exceeds its analytic bound");
        }

    // Step 3: t_ij = a_i, then the block decomposition of A + S.
    FieldMatrix t = field_zero_matrix(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t(i, j) = ak[i];
    const EffectiveConstants& eff = constants.effective();
    {
        // The threshold chain promises min_nu (t_ii + s_ii) > 4(n-1) gamma + r/d.
        FieldElement bound = f.from_rational(Rational(4 * static_cast<long>(n - 1)) * Rational(constants.gamma()) +
                                             ratio(eff.r_eff, static_cast<long>(d)));
        bool ok = true;
        Interval worst = iv(0, prec);
        for (std::size_t i = 0; i < n; ++i) {
            FieldElement x = t(i, i) + out.s(i, i);
            ok = ok && f.is_totally_positive(x - bound);
            for (std::size_t nu = 0; nu < d; ++nu)
                worst = max(worst, f.embed_at(bound, nu, prec) / f.embed_at(x, nu, prec));
        }
        out.margins.push_back(Margin{"step3c", worst, ok});
        require(ok, ErrorCode::HypothesisViolated, "t_ii + s_ii does not clear 4(n-1) gamma + r/d");
    }
    DecomposeParams dp{eff.prime, eff.ell, constants.gamma(), eff.r_eff, opts.represent};
    BlockDecomposition dec = decompose_a_plus_s(out.a, out.s, t, dp);

    std::vector<FieldMatrix> parts{out.p};
    for (std::size_t i = 0; i < n; ++i) out.provenance.push_back("P row " + std::to_string(i + 1));
    for (const auto& blk : dec.blocks) {
        parts.push_back(blk.witness);
        std::string tag = blk.kind == "diagonal" ? "diagonal " + std::to_string(blk.i + 1)
                                                 : blk.kind + " " + std::to_string(blk.i + 1) + "," + std::to_string(blk.j + 1);
        for (std::size_t r = 0; r < blk.witness.rows(); ++r) out.provenance.push_back(tag);
    }
    FieldMatrix reduced_forms = stack(parts, f, n);
    require(gram_of(reduced_forms, f, n) == qr.entries(), ErrorCode::InvariantBreach,
            "witness does not reproduce the reduced form");
    // Q = T^-t Q' T^-1, so the forms for Q are the reduced forms times T^-1.
    out.forms = multiply(reduced_forms, field_inverse(red.transform));
    require(is_integral(out.forms), ErrorCode::InvariantBreach, "transformed forms are not integral");
    require(verify_sos(q, out.forms), ErrorCode::InvariantBreach, "witness does not reproduce the form");
    const std::size_t cap = 6 * n + n * (n - 1) / 2 * (d + 5);
    require(out.forms.rows() <= cap, ErrorCode::InvariantBreach, "witness uses more forms than the bound");
    return out;
}

bool verify_sos(const GramForm& q, const FieldMatrix& forms) {
    if (forms.cols() != q.n()) return false;
    return gram_of(forms, q.field(), q.n()) == q.entries();
}

bool verify_sos(const GramForm& q, const SosWitness& w) { return verify_sos(q, w.forms); }

std::string format_witness(const SosWitness& w) {
    std::ostringstream out;
    out << "forms " << w.forms.rows() << '\n';
    for (std::size_t i = 0; i < w.forms.rows(); ++i) {
        for (std::size_t j = 0; j < w.forms.cols(); ++j) out << (j ? ", " : "") << format_element(w.forms(i, j));
        if (i < w.provenance.size()) out << "  # " << w.provenance[i];
        out << '\n';
    }
    for (const auto& m : w.margins)
        out << "margin " << m.name << ' ' << m.value.format() << ' ' << (m.holds ? "ok" : "FAIL") << '\n';
    return out.str();
}

} // namespace hermite
