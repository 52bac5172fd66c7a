#include "hermite/lattice_enum.hpp"

#include "hermite/errors.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace hermite {

namespace {

class Enumerator {
public:
    Enumerator(const LdlData& ldl, std::vector<Rational> center, Rational bound, bool symmetric,
               std::atomic<std::size_t>& nodes, std::size_t budget)
        : ldl_(ldl), center_(std::move(center)), bound_(std::move(bound)), symmetric_(symmetric), nodes_(nodes),
          budget_(budget), m_(ldl.diag.size()), x_(m_), partial_(m_ + 1) {}

    // Runs the subtree where the top coordinate is restricted by accept_top.
    template <class Accept>
    void run(Accept accept_top, std::vector<LatticePoint>& out) {
        out_ = &out;
        partial_[m_] = 0;
        level(m_ - 1, true, accept_top);
    }

private:
    const LdlData& ldl_;
    std::vector<Rational> center_;
    Rational bound_;
    bool symmetric_;
    std::atomic<std::size_t>& nodes_;
    std::size_t budget_;
    std::size_t m_;
    std::vector<Integer> x_;
    std::vector<Rational> partial_;
    std::vector<LatticePoint>* out_ = nullptr;

    Rational level_center(std::size_t i) const {
        Rational c = center_[i];
        for (std::size_t j = i + 1; j < m_; ++j) c -= ldl_.upper(i, j) * (Rational(x_[j]) - center_[j]);
        return c;
    }

    bool visit(std::size_t i, const Integer& xi, const Rational& c, bool zero_above) {
        Rational t = Rational(xi) - c;
        Rational v = partial_[i + 1] + ldl_.diag[i] * t * t;
        if (v > bound_) return false;
        if (nodes_.fetch_add(1, std::memory_order_relaxed) >= budget_)
            fail(ErrorCode::BudgetExceeded, "enumeration exceeded its node budget");
        x_[i] = xi;
        partial_[i] = v;
        bool zero_now = zero_above && xi == 0;
        if (i == 0) {
            if (!(symmetric_ && zero_now)) out_->push_back(LatticePoint{x_, v});
        } else {
            level(i - 1, zero_now, [](const Integer&) { return true; });
        }
        return true;
    }

    template <class Accept>
    void level(std::size_t i, bool zero_above, Accept accept) {
        Rational c = level_center(i);
        bool nonneg_only = symmetric_ && zero_above;
        Integer start = round_rational(c);
        if (nonneg_only && start < 0) start = 0;
        // upward sweep
        for (Integer xi = start;; ++xi) {
            if (!accept(xi)) {
                Rational t = Rational(xi) - c;
                if (partial_[i + 1] + ldl_.diag[i] * t * t > bound_) break;
                continue;
            }
            if (!visit(i, xi, c, zero_above)) break;
        }
        // downward sweep
        for (Integer xi = start - 1;; --xi) {
            if (nonneg_only && xi < 0) break;
            if (!accept(xi)) {
                Rational t = Rational(xi) - c;
                if (partial_[i + 1] + ldl_.diag[i] * t * t > bound_) break;
                continue;
            }
            if (!visit(i, xi, c, zero_above)) break;
        }
    }
};

bool point_less(const LatticePoint& a, const LatticePoint& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.x < b.x;
}

std::vector<LatticePoint> run_enumeration(const RationalMatrix& gram, std::vector<Rational> center, const Rational& bound,
                                          bool symmetric, const EnumOptions& opts) {
    const std::size_t m = gram.rows();
    require(m == gram.cols() && m > 0, ErrorCode::InvariantBreach, "enumeration needs a square nonempty Gram matrix");
    std::vector<LatticePoint> out;
    if (bound < 0) return out;
    LdlData ldl;
    require(ldl_decompose(gram, ldl), ErrorCode::Singular, "enumeration Gram matrix is singular");
    for (const auto& dv : ldl.diag)
        require(dv > 0, ErrorCode::InvariantBreach, "enumeration Gram matrix is not positive definite");
    std::atomic<std::size_t> nodes{0};
    unsigned threads = std::max(1u, opts.threads);
    if (threads == 1) {
        Enumerator e(ldl, center, bound, symmetric, nodes, opts.budget);
        e.run([](const Integer&) { return true; }, out);
    } else {
        // Split the top coordinate by residue class; results are merged and sorted.
        std::vector<std::vector<LatticePoint>> parts(threads);
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t]() {
                try {
                    Enumerator e(ldl, center, bound, symmetric, nodes, opts.budget);
                    e.run(
                        [t, threads](const Integer& xi) {
                            Integer r;
                            mpz_fdiv_r_ui(r.get_mpz_t(), xi.get_mpz_t(), threads);
                            return r == t;
                        },
                        parts[t]);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
        for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    }
    std::sort(out.begin(), out.end(), point_less);
    return out;
}

} // namespace

std::vector<LatticePoint> enumerate_short(const RationalMatrix& gram, const Rational& bound, const EnumOptions& opts) {
    return run_enumeration(gram, std::vector<Rational>(gram.rows(), Rational(0)), bound, true, opts);
}

std::vector<LatticePoint> enumerate_near(const RationalMatrix& gram, const std::vector<Rational>& center,
                                         const Rational& bound, const EnumOptions& opts) {
    return run_enumeration(gram, center, bound, false, opts);
}

Rational evaluate_form(const RationalMatrix& gram, const std::vector<Integer>& x) {
    Rational v = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        Rational row = 0;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j] != 0) row += gram(i, j) * x[j];
        v += row * x[i];
    }
    return v;
}

} // namespace hermite
