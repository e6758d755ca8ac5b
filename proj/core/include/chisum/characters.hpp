#pragma once

// Dirichlet characters with exact values.
//
// A character mod q = prod p^gamma is stored as one exponent vector per prime power,
// taken against the canonical basis from unit_group_basis(). Its value at a unit n is
// e(sum_j e_j * log_j(n) / ord_j), carried as an exact RationalAngle.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chisum/arith.hpp"

namespace chisum {

/// An exact point of R/Z, i.e. the root of unity e(num/den). Always reduced, 0 <= num < den.
class RationalAngle {
public:
    RationalAngle() = default;
    explicit RationalAngle(const Rational& r);
    RationalAngle(const BigInt& num, const BigInt& den);

    const BigInt& numerator() const { return value_.get_num(); }
    const BigInt& denominator() const { return value_.get_den(); }
    const Rational& value() const { return value_; }

    double to_double() const;
    /// e(angle) = exp(2 pi i angle).
    std::complex<double> unit() const;
    std::string str() const;

    RationalAngle operator+(const RationalAngle& o) const { return RationalAngle(value_ + o.value_); }
    RationalAngle operator-(const RationalAngle& o) const { return RationalAngle(value_ - o.value_); }
    RationalAngle operator-() const { return RationalAngle(-value_); }
    RationalAngle scaled(const BigInt& k) const { return RationalAngle(value_ * Rational(k)); }

    friend bool operator==(const RationalAngle& a, const RationalAngle& b) { return a.value_ == b.value_; }

private:
    Rational value_{0};
};

/// e(t) for t a double, reducing t modulo 1 before the trigonometric call.
std::complex<double> unit_phase(double t);

/// A character value: nullopt is the value 0 (argument shares a factor with q).
using CharValue = std::optional<RationalAngle>;

struct CharacterComponent {
    UnitGroupBasis basis;
    std::vector<BigInt> exponents;
};

class DirichletCharacter {
public:
    DirichletCharacter();  // the character mod 1
    /// exponents[i] pairs with q.factors()[i]; each entry is reduced mod the generator order.
    DirichletCharacter(FactoredModulus q, const std::vector<std::vector<BigInt>>& exponents);

    static DirichletCharacter principal(const FactoredModulus& q);

    const FactoredModulus& modulus() const { return q_; }
    const std::vector<CharacterComponent>& components() const { return components_; }
    /// Least k with chi^k principal.
    const BigInt& order() const { return order_; }

    bool is_principal() const { return order_ == 1; }
    bool is_real() const { return order_ <= 2; }

    CharValue operator()(const BigInt& n) const;
    CharValue operator()(i64 n) const { return (*this)(from_i64(n)); }

    DirichletCharacter conjugate() const;
    DirichletCharacter operator*(const DirichletCharacter& other) const;

    /// Flattened exponent list, in component order; the character's identity.
    std::vector<BigInt> label() const;
    std::string label_string() const;

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b);

private:
    void compute_order();

    FactoredModulus q_;
    std::vector<CharacterComponent> components_;
    BigInt order_{1};
};

CharValue evaluate(const DirichletCharacter& chi, const BigInt& n);

/// Least q* | q through which chi factors.
BigInt conductor(const DirichletCharacter& chi);
bool is_primitive(const DirichletCharacter& chi);

/// All characters mod q (or only the primitive ones) in lexicographic order of their labels,
/// the first generator being the most significant digit. Index 0 is the principal character.
std::vector<DirichletCharacter> enumerate_characters(const FactoredModulus& q, bool primitive_only);

/// chi(k + r m) = e(offset) * star(m + shift) for every integer m, where q = r s with
/// gcd(r, s) = 1 and star is a character mod s. offset is nullopt when gcd(k, r) > 1, in
/// which case chi(k + r m) = 0 for all m.
struct CrtRestriction {
    DirichletCharacter star;
    std::optional<RationalAngle> offset;
    BigInt shift;
    BigInt r;
    BigInt s;
};

CrtRestriction crt_restrict(const DirichletCharacter& chi, const BigInt& k, const BigInt& r);

nlohmann::json to_json(const DirichletCharacter& chi);
DirichletCharacter character_from_json(const nlohmann::json& j);

/// Discrete-log tables for every prime-power component of a modulus; shared by the
/// characters of that modulus when building CharacterTables.
class ModulusTables {
public:
    static constexpr u64 kLimit = u64{1} << 24;

    explicit ModulusTables(const FactoredModulus& q);

    const FactoredModulus& modulus() const { return q_; }
    u64 q() const { return q64_; }
    const std::vector<UnitLogTable>& components() const { return tables_; }

private:
    FactoredModulus q_;
    u64 q64_ = 1;
    std::vector<UnitLogTable> tables_;
};

/// Dense table of chi(n) for n mod q, each value stored as a numerator j of e(j / order).
class CharacterTable {
public:
    explicit CharacterTable(const DirichletCharacter& chi);
    CharacterTable(const DirichletCharacter& chi, const ModulusTables& tables);

    u64 modulus() const { return q_; }
    u64 order() const { return order_; }

    /// Numerator of the angle of chi(n) over order(), or -1 when chi(n) = 0.
    i64 numerator(i64 n) const { return table_[reduce(n)]; }
    i64 numerator_reduced(u64 r) const { return table_[r]; }

    std::complex<double> value(i64 n) const { return value_reduced(reduce(n)); }
    std::complex<double> value_reduced(u64 r) const {
        i64 j = table_[r];
        return j < 0 ? std::complex<double>(0.0, 0.0) : roots_[static_cast<std::size_t>(j)];
    }
    std::complex<double> root(u64 j) const { return roots_[j]; }

    CharValue angle(i64 n) const;

    u64 reduce(i64 n) const {
        i64 r = n % static_cast<i64>(q_);
        return static_cast<u64>(r < 0 ? r + static_cast<i64>(q_) : r);
    }

private:
    void build(const DirichletCharacter& chi, const ModulusTables& tables);

    u64 q_ = 1;
    u64 order_ = 1;
    std::vector<std::int32_t> table_;
    std::vector<std::complex<double>> roots_;
};

}  // namespace chisum
