#include "hermite/matrix.hpp"

#include <utility>

namespace hermite {

RationalMatrix rational_identity(std::size_t n) {
    RationalMatrix m(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Rational determinant(RationalMatrix a) {
    require(a.rows() == a.cols(), ErrorCode::InvariantBreach, "determinant of a non-square matrix");
    const std::size_t n = a.rows();
    Rational det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a(piv, k) == 0) ++piv;
        if (piv == n) return Rational(0);
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rational f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

RationalMatrix inverse(const RationalMatrix& a) {
    require(a.rows() == a.cols(), ErrorCode::InvariantBreach, "inverse of a non-square matrix");
    const std::size_t n = a.rows();
    RationalMatrix m = a;
    RationalMatrix inv = rational_identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && m(piv, k) == 0) ++piv;
        require(piv < n, ErrorCode::Singular, "matrix is singular");
        if (piv != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(k, j), m(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        Rational p = m(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            m(k, j) /= p;
            inv(k, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || m(i, k) == 0) continue;
            Rational f = m(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) -= f * m(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

std::vector<Rational> solve(const RationalMatrix& a, const std::vector<Rational>& b) {
    RationalMatrix inv = inverse(a);
    std::vector<Rational> x(a.rows(), Rational(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) x[i] += inv(i, j) * b[j];
    return x;
}

bool ldl_decompose(const RationalMatrix& a, LdlData& out) {
    const std::size_t n = a.rows();
    out.upper = rational_identity(n);
    out.diag.assign(n, Rational(0));
    RationalMatrix w = a;
    for (std::size_t k = 0; k < n; ++k) {
        if (w(k, k) == 0) return false;
        out.diag[k] = w(k, k);
        for (std::size_t j = k + 1; j < n; ++j) out.upper(k, j) = w(k, j) / w(k, k);
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) w(i, j) -= out.upper(k, i) * w(k, j);
    }
    return true;
}

HermiteForm column_hnf(const IntegerMatrix& gens) {
    const std::size_t m = gens.rows();
    const std::size_t k = gens.cols();
    IntegerMatrix a = gens;
    IntegerMatrix u(k, k, Integer(0));
    for (std::size_t i = 0; i < k; ++i) u(i, i) = 1;

    auto col_op = [&](std::size_t c1, std::size_t c2, const Integer& p, const Integer& q, const Integer& r,
                      const Integer& s) {
        // (c1, c2) <- (p c1 + q c2, r c1 + s c2)
        for (std::size_t i = 0; i < m; ++i) {
            Integer x = a(i, c1), y = a(i, c2);
            a(i, c1) = p * x + q * y;
            a(i, c2) = r * x + s * y;
        }
        for (std::size_t i = 0; i < k; ++i) {
            Integer x = u(i, c1), y = u(i, c2);
            u(i, c1) = p * x + q * y;
            u(i, c2) = r * x + s * y;
        }
    };

    // Triangularize from the last row upward so the pivot of row i lands in column i.
    require(k >= m, ErrorCode::InvariantBreach, "hnf needs at least as many generators as rows");
    std::size_t offset = k - m;
    for (std::size_t row = m; row-- > 0;) {
        std::size_t pc = offset + row;
        for (std::size_t c = 0; c < pc; ++c) {
            if (a(row, c) == 0) continue;
            Integer x = a(row, pc), y = a(row, c);
            Integer g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
            Integer xg = x / g, yg = y / g;
            // new pc = s*pc + t*c, new c = -yg*pc + xg*c (determinant 1)
            col_op(pc, c, s, t, Integer(-yg), xg);
        }
        require(a(row, pc) != 0, ErrorCode::Singular, "generators do not span a full-rank lattice");
        if (a(row, pc) < 0) col_op(pc, pc, Integer(-1), Integer(0), Integer(0), Integer(-1));
        // reduce entries to the right of the pivot in this row
        for (std::size_t c = pc + 1; c < k; ++c) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), a(row, c).get_mpz_t(), a(row, pc).get_mpz_t());
            if (q != 0) col_op(c, pc, Integer(1), Integer(-q), Integer(0), Integer(1));
        }
    }
    HermiteForm h;
    h.basis = IntegerMatrix(m, m, Integer(0));
    h.transform = IntegerMatrix(k, m, Integer(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) h.basis(i, j) = a(i, offset + j);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m; ++j) h.transform(i, j) = u(i, offset + j);
    return h;
}

} // namespace hermite
