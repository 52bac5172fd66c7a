#pragma once

#include "hermite/matrix.hpp"
#include "hermite/numeric.hpp"
#include "hermite/polynomial.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hermite {

class Field;

// Raw field description as read from a field file.
struct FieldSpec {
    std::string name;
    int degree = 0;
    std::vector<std::string> basis_names;
    // mult[(i * d + j) * d + k]: coordinate k of b_i * b_j.
    std::vector<Rational> mult;
    Integer discriminant;
    unsigned embedding_digits = 0;
    // embeddings(nu, j): decimal center of b_j under embedding nu.
    RationalMatrix embeddings;
    std::vector<std::vector<Rational>> units;
    int class_number = 1;
    std::vector<std::vector<Rational>> tp_basis;
};

// Element of K in coordinates over the integral basis. Holds a non-owning
// pointer to its field; the field must outlive the element.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(const Field& field, std::vector<Rational> coords);

    const Field& field() const { return *field_; }
    bool has_field() const { return field_ != nullptr; }
    const std::vector<Rational>& coords() const { return coords_; }
    const Rational& coord(std::size_t i) const { return coords_[i]; }

    bool is_zero() const;
    bool is_integral() const;

    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const FieldElement& o);
    FieldElement& operator*=(const Rational& q);

    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    friend FieldElement operator*(FieldElement a, const Rational& q) { return a *= q; }
    friend FieldElement operator*(const Rational& q, FieldElement a) { return a *= q; }
    friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.coords_ == b.coords_; }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    FieldElement inverse() const;
    FieldElement pow(long e) const;

private:
    const Field* field_ = nullptr;
    std::vector<Rational> coords_;
};

// Exact rational enclosure center +- radius of one embedded value.
struct RationalEnclosure {
    Rational center;
    Rational radius;
    Rational lower() const { return center - radius; }
    Rational upper() const { return center + radius; }
};

struct EmbeddingBox {
    std::vector<Interval> values;
    mpfr_prec_t precision = default_precision;
};

// Data for unit balancing and the constants derived from units.
struct UnitData {
    bool available = false;
    // logs(i, nu) = log |u_i^(nu)|
    std::vector<std::vector<Interval>> logs;
    Interval d3;
    Interval lambda_babai;
    Interval lambda;       // enclosure of the effective lambda
    Rational lambda_impl;  // rational upper bound actually used
    Interval constant_c;   // the C factor of lambda
    std::vector<std::vector<long>> eps_exponents;  // exponents of the chosen eps_mu
    std::vector<std::vector<Rational>> y_reps;     // associate class representatives
    Interval y_spread;     // max over classes of the squared embedding spread
};

class Field {
public:
    static std::shared_ptr<const Field> load(const FieldSpec& spec);

    const FieldSpec& spec() const { return spec_; }
    const std::string& name() const { return spec_.name; }
    int degree() const { return spec_.degree; }
    std::size_t d() const { return static_cast<std::size_t>(spec_.degree); }
    const Integer& discriminant() const { return spec_.discriminant; }
    Integer abs_discriminant() const { return abs(spec_.discriminant); }
    int class_number() const { return spec_.class_number; }
    bool supports_reduction() const { return spec_.class_number == 1; }

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement from_rational(const Rational& q) const;
    FieldElement basis_element(std::size_t j) const;
    FieldElement element(std::vector<Rational> coords) const;
    const std::vector<Rational>& one_coords() const { return one_; }

    std::vector<Rational> multiply(const std::vector<Rational>& a, const std::vector<Rational>& b) const;
    const Rational& mult(std::size_t i, std::size_t j, std::size_t k) const {
        return spec_.mult[(i * d() + j) * d() + k];
    }

    RationalMatrix regular_representation(const FieldElement& a) const;
    Rational norm(const FieldElement& a) const;
    Rational trace(const FieldElement& a) const;
    Polynomial charpoly(const FieldElement& a) const;
    const std::vector<Rational>& basis_traces() const { return traces_; }
    // Tr(b_i b_j), the Gram matrix of x -> Tr(x^2) in basis coordinates.
    const RationalMatrix& trace_gram() const { return trace_gram_; }

    RationalEnclosure enclosure(const FieldElement& a, std::size_t nu) const;
    EmbeddingBox embed(const FieldElement& a, mpfr_prec_t prec = default_precision) const;
    Interval embed_at(const FieldElement& a, std::size_t nu, mpfr_prec_t prec = default_precision) const;
    // Exact sign of a^(nu).
    int sign(const FieldElement& a, std::size_t nu) const;
    bool is_totally_positive(const FieldElement& a) const;
    bool is_totally_nonnegative(const FieldElement& a) const;

    // Covering bound beta_impl = sqrt|d_K| / 2 and its exact square.
    Rational beta_squared() const;
    Interval beta(mpfr_prec_t prec = default_precision) const;
    // Exact test |a|_nu <= beta for every nu.
    bool in_beta_box(const FieldElement& a) const;

    const std::vector<FieldElement>& units() const { return units_; }
    const std::vector<FieldElement>& tp_basis() const { return tp_; }
    // Integer coordinates of an integral element over the totally positive basis.
    std::vector<Integer> tp_coordinates(const FieldElement& a) const;

    const UnitData& unit_data() const { return unit_data_; }
    const Rational& lambda_impl() const { return unit_data_.lambda_impl; }

    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;

private:
    Field() = default;
    void validate_table();
    void validate_totally_real() const;
    void validate_embeddings() const;
    void validate_units_and_tp();

    FieldSpec spec_;
    std::vector<Rational> one_;
    std::vector<Rational> traces_;
    RationalMatrix trace_gram_;
    Rational radius_unit_;
    std::vector<bool> exact_basis_;
    std::vector<FieldElement> units_;
    std::vector<FieldElement> tp_;
    RationalMatrix tp_inverse_;
    UnitData unit_data_;

    friend void compute_unit_data(Field& field);
};

void compute_unit_data(Field& field);

// Parsing and printing.
FieldSpec parse_field_spec(const std::string& text);
FieldSpec read_field_spec_file(const std::string& path);
std::shared_ptr<const Field> load_field_file(const std::string& path);
FieldElement parse_element(const Field& field, const std::string& text);
std::string format_element(const FieldElement& a);

} // namespace hermite
