#include "hermite/field.hpp"

#include "hermite/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace hermite {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<Rational> parse_rationals(const std::string& s) {
    std::vector<Rational> out;
    for (const auto& tok : split_ws(s)) out.push_back(parse_rational(tok));
    return out;
}

long parse_index(const std::string& s) {
    require(!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }),
            ErrorCode::InvalidInput, "bad index '" + s + "'");
    return std::stol(s);
}

} // namespace

FieldSpec parse_field_spec(const std::string& text) {
    FieldSpec spec;
    std::istringstream in(text);
    std::string line;
    std::map<std::size_t, std::vector<Rational>> embedding_rows;
    std::vector<std::tuple<std::size_t, std::size_t, std::vector<Rational>>> mult_rows;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::string where = " (line " + std::to_string(lineno) + ")";
        std::string head = line, rest;
        std::string key;
        if (auto colon = line.find(':'); colon != std::string::npos) {
            head = trim(line.substr(0, colon));
            rest = trim(line.substr(colon + 1));
        }
        std::vector<std::string> hv = split_ws(head);
        require(!hv.empty(), ErrorCode::InvalidInput, "missing key" + where);
        key = hv[0];
        auto args = [&]() { return std::vector<std::string>(hv.begin() + 1, hv.end()); };
        if (key == "name") {
            require(hv.size() == 2, ErrorCode::InvalidInput, "name takes one token" + where);
            spec.name = hv[1];
        } else if (key == "degree") {
            require(hv.size() == 2, ErrorCode::InvalidInput, "degree takes one value" + where);
            spec.degree = static_cast<int>(parse_index(hv[1]));
        } else if (key == "basis") {
            spec.basis_names = args();
        } else if (key == "discriminant") {
            require(hv.size() == 2, ErrorCode::InvalidInput, "discriminant takes one value" + where);
            Rational q = parse_rational(hv[1]);
            require(q.get_den() == 1, ErrorCode::InvalidInput, "discriminant must be an integer" + where);
            spec.discriminant = q.get_num();
        } else if (key == "mult") {
            require(hv.size() == 3, ErrorCode::InvalidInput, "mult needs two indices" + where);
            mult_rows.emplace_back(parse_index(hv[1]), parse_index(hv[2]), parse_rationals(rest));
        } else if (key == "embedding_digits") {
            require(hv.size() == 2, ErrorCode::InvalidInput, "embedding_digits takes one value" + where);
            spec.embedding_digits = static_cast<unsigned>(parse_index(hv[1]));
        } else if (key == "embedding") {
            require(hv.size() == 2, ErrorCode::InvalidInput, "embedding needs an index" + where);
            embedding_rows[parse_index(hv[1])] = parse_rationals(rest);
        } else if (key == "unit") {
            spec.units.push_back(parse_rationals(rest));
        } else if (key == "class_number") {
            require(hv.size() == 2, ErrorCode::InvalidInput, "class_number takes one value" + where);
            spec.class_number = static_cast<int>(parse_index(hv[1]));
        } else if (key == "tp") {
            spec.tp_basis.push_back(parse_rationals(rest));
        } else {
            fail(ErrorCode::InvalidInput, "unknown key '" + key + "'" + where);
        }
    }
    require(spec.degree >= 1, ErrorCode::InvalidInput, "field file lacks a degree");
    const std::size_t n = static_cast<std::size_t>(spec.degree);
    spec.mult.assign(n * n * n, Rational(0));
    std::vector<bool> seen(n * n, false);
    for (const auto& [i, j, coords] : mult_rows) {
        require(i < n && j < n && coords.size() == n, ErrorCode::InvalidInput, "malformed mult row");
        seen[i * n + j] = true;
        for (std::size_t k = 0; k < n; ++k) spec.mult[(i * n + j) * n + k] = coords[k];
    }
    for (bool s : seen) require(s, ErrorCode::InvalidInput, "multiplication table is incomplete");
    spec.embeddings = RationalMatrix(n, n, Rational(0));
    require(embedding_rows.size() == n, ErrorCode::InvalidInput, "expected one embedding row per place");
    for (const auto& [nu, vals] : embedding_rows) {
        require(nu < n && vals.size() == n, ErrorCode::InvalidInput, "malformed embedding row");
        for (std::size_t j = 0; j < n; ++j) spec.embeddings(nu, j) = vals[j];
    }
    for (const auto& u : spec.units) require(u.size() == n, ErrorCode::InvalidInput, "malformed unit");
    for (const auto& w : spec.tp_basis) require(w.size() == n, ErrorCode::InvalidInput, "malformed tp row");
    return spec;
}

FieldSpec read_field_spec_file(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::InvalidInput, "cannot open field file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_field_spec(buf.str());
}

std::shared_ptr<const Field> load_field_file(const std::string& path) { return Field::load(read_field_spec_file(path)); }

// ---- element literals ----

FieldElement parse_element(const Field& field, const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    require(!s.empty(), ErrorCode::InvalidInput, "empty element literal");
    const auto& names = field.spec().basis_names;
    FieldElement result = field.zero();
    std::size_t pos = 0;
    while (pos < s.size()) {
        int sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        }
        std::size_t end = pos;
        while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
        std::string term = s.substr(pos, end - pos);
        require(!term.empty(), ErrorCode::InvalidInput, "malformed element literal '" + text + "'");
        Rational coeff = 1;
        std::string name;
        if (auto star = term.find('*'); star != std::string::npos) {
            coeff = parse_rational(term.substr(0, star));
            name = term.substr(star + 1);
        } else if (std::isdigit(static_cast<unsigned char>(term[0])) || term[0] == '.') {
            coeff = parse_rational(term);
        } else {
            name = term;
        }
        if (sign < 0) coeff = -coeff;
        if (name.empty()) {
            result += field.from_rational(coeff);
        } else {
            auto it = std::find(names.begin(), names.end(), name);
            require(it != names.end(), ErrorCode::InvalidInput, "unknown basis name '" + name + "'");
            FieldElement b = field.basis_element(static_cast<std::size_t>(it - names.begin()));
            result += b * coeff;
        }
        pos = end;
    }
    return result;
}

std::string format_element(const FieldElement& a) {
    const Field& field = a.field();
    const auto& names = field.spec().basis_names;
    std::string out;
    for (std::size_t j = 0; j < field.d(); ++j) {
        const Rational& c = a.coord(j);
        if (c == 0) continue;
        bool neg = c < 0;
        Rational m = neg ? Rational(-c) : c;
        std::string body;
        if (names[j] == "1") {
            body = format_rational(m);
        } else if (m == 1) {
            body = names[j];
        } else {
            body = format_rational(m) + "*" + names[j];
        }
        if (out.empty()) {
            out = (neg ? "-" : "") + body;
        } else {
            out += (neg ? " - " : " + ") + body;
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace hermite
