#include "hermite/form.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace hermite {

FieldMatrix field_zero_matrix(const Field& field, std::size_t rows, std::size_t cols) {
    return FieldMatrix(rows, cols, field.zero());
}

FieldMatrix field_identity(const Field& field, std::size_t n) {
    FieldMatrix m = field_zero_matrix(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
}

FieldMatrix to_field_matrix(const Field& field, const RationalMatrix& m) {
    FieldMatrix out = field_zero_matrix(field, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = field.from_rational(m(i, j));
    return out;
}

FieldElement field_determinant(FieldMatrix a) {
    require(a.rows() == a.cols() && a.rows() > 0, ErrorCode::InvariantBreach, "determinant of a non-square matrix");
    const std::size_t n = a.rows();
    FieldElement det = a(0, 0).field().one();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k).is_zero()) ++p;
        if (p == n) return a(0, 0).field().zero();
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            det = -det;
        }
        det *= a(k, k);
        FieldElement inv = a(k, k).inverse();
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k).is_zero()) continue;
            FieldElement f = a(i, k) * inv;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

FieldMatrix field_inverse(const FieldMatrix& src) {
    require(src.rows() == src.cols() && src.rows() > 0, ErrorCode::InvariantBreach, "inverse of a non-square matrix");
    const Field& field = src(0, 0).field();
    const std::size_t n = src.rows();
    FieldMatrix a = src;
    FieldMatrix inv = field_identity(field, n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k).is_zero()) ++p;
        require(p < n, ErrorCode::Singular, "matrix is singular");
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(k, j), a(p, j));
                std::swap(inv(k, j), inv(p, j));
            }
        FieldElement pinv = a(k, k).inverse();
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) *= pinv;
            inv(k, j) *= pinv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k).is_zero()) continue;
            FieldElement f = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

bool is_integral(const FieldMatrix& m) {
    for (const auto& e : m.data())
        if (!e.is_integral()) return false;
    return true;
}

GramForm::GramForm(FieldMatrix entries) : entries_(std::move(entries)) {
    require(entries_.rows() == entries_.cols() && entries_.rows() > 0, ErrorCode::InvalidInput,
            "Gram matrix must be square and nonempty");
    for (std::size_t i = 0; i < n(); ++i)
        for (std::size_t j = i + 1; j < n(); ++j)
            require(entries_(i, j) == entries_(j, i), ErrorCode::InvalidInput, "Gram matrix is not symmetric");
    integral_ = hermite::is_integral(entries_);
}

GramForm GramForm::identity(const Field& field, std::size_t n) { return GramForm(field_identity(field, n)); }

FieldElement GramForm::evaluate(const std::vector<FieldElement>& x) const {
    FieldElement acc = field().zero();
    for (std::size_t i = 0; i < n(); ++i) {
        if (x[i].is_zero()) continue;
        FieldElement row = field().zero();
        for (std::size_t j = 0; j < n(); ++j)
            if (!x[j].is_zero()) row += entries_(i, j) * x[j];
        acc += x[i] * row;
    }
    return acc;
}

GramForm transform(const GramForm& q, const FieldMatrix& t) {
    return GramForm(multiply(multiply(transpose(t), q.entries()), t));
}

LagrangeData lagrange_expand(const GramForm& q) {
    const Field& field = q.field();
    const std::size_t n = q.n();
    LagrangeData out;
    out.unipotent = field_identity(field, n);
    for (std::size_t i = 0; i < n; ++i) {
        FieldElement h = q(i, i);
        for (std::size_t k = 0; k < i; ++k) h -= out.outer[k] * out.unipotent(k, i) * out.unipotent(k, i);
        require(!h.is_zero(), ErrorCode::SingularMinor, "leading principal minor " + std::to_string(i + 1) + " vanishes");
        FieldElement hinv = h.inverse();
        for (std::size_t j = i + 1; j < n; ++j) {
            FieldElement s = q(i, j);
            for (std::size_t k = 0; k < i; ++k) s -= out.outer[k] * out.unipotent(k, i) * out.unipotent(k, j);
            out.unipotent(i, j) = s * hinv;
        }
        out.outer.push_back(h);
    }
    return out;
}

GramForm assemble(const LagrangeData& data) {
    const std::size_t n = data.n();
    const Field& field = data.outer.front().field();
    FieldMatrix g = field_zero_matrix(field, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            FieldElement s = field.zero();
            for (std::size_t k = 0; k <= i; ++k) s += data.outer[k] * data.unipotent(k, i) * data.unipotent(k, j);
            g(i, j) = s;
            g(j, i) = s;
        }
    return GramForm(std::move(g));
}

DeterminantData determinant_data(const GramForm& q) {
    FieldElement det = field_determinant(q.entries());
    return DeterminantData{det, q.field().norm(det)};
}

GramForm dual_form(const GramForm& q) {
    FieldMatrix inv = field_inverse(q.entries());
    // Symmetrize exactly; the inverse of a symmetric matrix is symmetric.
    for (std::size_t i = 0; i < q.n(); ++i)
        for (std::size_t j = i + 1; j < q.n(); ++j) inv(j, i) = inv(i, j);
    return GramForm(std::move(inv));
}

bool is_positive_definite(const GramForm& q) {
    const Field& field = q.field();
    for (std::size_t k = 1; k <= q.n(); ++k) {
        FieldMatrix minor = field_zero_matrix(field, k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) minor(i, j) = q(i, j);
        FieldElement det = field_determinant(minor);
        if (det.is_zero() || !field.is_totally_positive(det)) return false;
    }
    return true;
}

GramForm random_pd_form(const Field& field, std::size_t n, std::uint64_t seed, const RandomFormParams& params) {
    require(n >= 1, ErrorCode::InvalidInput, "form rank must be positive");
    require(params.entry_bound >= 0 && params.shift_bound >= 1, ErrorCode::InvalidInput, "bad random form bounds");
    std::mt19937_64 rng(seed);
    // mt19937_64 output is fully specified, so reduce it by hand for portability.
    auto draw = [&rng](long lo, long hi) {
        auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long>(rng() % span);
    };
    const std::size_t d = field.d();
    FieldMatrix m = field_zero_matrix(field, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Rational> c(d);
            for (auto& x : c) x = draw(-params.entry_bound, params.entry_bound);
            m(i, j) = field.element(c);
        }
    FieldMatrix g = multiply(transpose(m), m);
    for (std::size_t i = 0; i < n; ++i) {
        FieldElement shift = field.zero();
        for (const auto& t : field.tp_basis()) shift += t * Rational(draw(1, params.shift_bound));
        g(i, i) += shift;
    }
    return GramForm(std::move(g));
}

HumbertMatrix HumbertMatrix::embed(const FieldMatrix& m, mpfr_prec_t prec) {
    const Field& field = m(0, 0).field();
    std::vector<Matrix<Interval>> comps;
    for (std::size_t nu = 0; nu < field.d(); ++nu) {
        Matrix<Interval> c(m.rows(), m.cols(), Interval(prec));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = field.embed_at(m(i, j), nu, prec);
        comps.push_back(std::move(c));
    }
    return HumbertMatrix(std::move(comps));
}

FieldMatrix parse_field_matrix(const Field& field, const std::string& text) {
    std::vector<std::vector<FieldElement>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<FieldElement> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(parse_element(field, cell));
        require(rows.empty() || row.size() == rows.front().size(), ErrorCode::InvalidInput, "ragged matrix rows");
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), ErrorCode::InvalidInput, "empty matrix");
    FieldMatrix m = field_zero_matrix(field, rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

std::string format_field_matrix(const FieldMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ", ";
            out += format_element(m(i, j));
        }
        out += '\n';
    }
    return out;
}

FieldMatrix read_field_matrix_file(const Field& field, const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::InvalidInput, "cannot open matrix file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_field_matrix(field, buf.str());
}

GramForm read_form_file(const Field& field, const std::string& path) {
    return GramForm(read_field_matrix_file(field, path));
}

} // namespace hermite
