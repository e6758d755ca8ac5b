#include "chisum/characters.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace chisum {

RationalAngle::RationalAngle(const Rational& r) {
    Rational v = r;
    v.canonicalize();
    BigInt n = v.get_num();
    BigInt d = v.get_den();
    BigInt red = mod(n, d);
    value_ = Rational(red, d);
    value_.canonicalize();
}

RationalAngle::RationalAngle(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("RationalAngle: zero denominator");
    *this = RationalAngle(Rational(num, den));
}

double RationalAngle::to_double() const { return value_.get_d(); }

std::complex<double> unit_phase(double t) {
    double f = t - std::floor(t);
    if (f > 0.5) f -= 1.0;
    // exact values at the quarter points keep small orders clean
    if (f == 0.0) return {1.0, 0.0};
    if (f == 0.5 || f == -0.5) return {-1.0, 0.0};
    if (f == 0.25) return {0.0, 1.0};
    if (f == -0.25) return {0.0, -1.0};
    double a = 2.0 * std::numbers::pi * f;
    return {std::cos(a), std::sin(a)};
}

std::complex<double> RationalAngle::unit() const {
    // reduce num/den exactly before converting so large denominators keep their precision
    if (value_ == 0) return {1.0, 0.0};
    Rational twice = value_ * 2;
    if (twice == 1) return {-1.0, 0.0};
    Rational four = value_ * 4;
    if (four == 1) return {0.0, 1.0};
    if (four == 3) return {0.0, -1.0};
    return unit_phase(value_.get_d());
}

std::string RationalAngle::str() const {
    return to_string(numerator()) + "/" + to_string(denominator());
}

// ---------------------------------------------------------------------------

DirichletCharacter::DirichletCharacter() = default;

DirichletCharacter::DirichletCharacter(FactoredModulus q, const std::vector<std::vector<BigInt>>& exponents)
    : q_(std::move(q)) {
    const auto& fs = q_.factors();
    if (exponents.size() != fs.size())
        throw std::invalid_argument("character: expected " + std::to_string(fs.size()) + " exponent groups");
    components_.reserve(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
        CharacterComponent c;
        c.basis = unit_group_basis(fs[i].p, fs[i].exponent);
        if (exponents[i].size() != c.basis.generators.size())
            throw std::invalid_argument("character: component " + std::to_string(i) + " expects " +
                                        std::to_string(c.basis.generators.size()) + " exponents");
        for (std::size_t j = 0; j < exponents[i].size(); ++j)
            c.exponents.push_back(mod(exponents[i][j], c.basis.orders[j]));
        components_.push_back(std::move(c));
    }
    compute_order();
}

DirichletCharacter DirichletCharacter::principal(const FactoredModulus& q) {
    std::vector<std::vector<BigInt>> e;
    for (const auto& f : q.factors()) e.emplace_back(unit_group_basis(f.p, f.exponent).generators.size(), BigInt(0));
    return DirichletCharacter(q, e);
}

void DirichletCharacter::compute_order() {
    order_ = 1;
    for (const auto& c : components_)
        for (std::size_t j = 0; j < c.exponents.size(); ++j) {
            BigInt g = gcd(c.exponents[j], c.basis.orders[j]);
            order_ = lcm(order_, BigInt(c.basis.orders[j] / g));
        }
}

CharValue DirichletCharacter::operator()(const BigInt& n) const { return evaluate(*this, n); }

DirichletCharacter DirichletCharacter::conjugate() const {
    DirichletCharacter out = *this;
    for (auto& c : out.components_)
        for (std::size_t j = 0; j < c.exponents.size(); ++j) c.exponents[j] = mod(-c.exponents[j], c.basis.orders[j]);
    out.compute_order();
    return out;
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& other) const {
    if (!(q_ == other.q_)) throw std::invalid_argument("character product: moduli differ");
    DirichletCharacter out = *this;
    for (std::size_t i = 0; i < out.components_.size(); ++i) {
        auto& c = out.components_[i];
        for (std::size_t j = 0; j < c.exponents.size(); ++j)
            c.exponents[j] = mod(c.exponents[j] + other.components_[i].exponents[j], c.basis.orders[j]);
    }
    out.compute_order();
    return out;
}

std::vector<BigInt> DirichletCharacter::label() const {
    std::vector<BigInt> out;
    for (const auto& c : components_) out.insert(out.end(), c.exponents.begin(), c.exponents.end());
    return out;
}

std::string DirichletCharacter::label_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& e : label()) {
        if (!first) os << ',';
        os << to_string(e);
        first = false;
    }
    return os.str();
}

bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.q_ == b.q_ && a.label() == b.label();
}

CharValue evaluate(const DirichletCharacter& chi, const BigInt& n) {
    const BigInt& q = chi.modulus().value();
    BigInt r = mod(n, q);
    if (gcd(r, q) != 1) return std::nullopt;
    Rational total(0);
    for (const auto& c : chi.components()) {
        if (c.exponents.empty()) continue;
        std::vector<BigInt> logs = discrete_log(mod(r, c.basis.modulus), c.basis);
        for (std::size_t j = 0; j < logs.size(); ++j) {
            if (c.exponents[j] == 0) continue;
            total += Rational(BigInt(mod(BigInt(c.exponents[j] * logs[j]), c.basis.orders[j])), c.basis.orders[j]);
        }
    }
    return RationalAngle(total);
}

namespace {

// Exponent of p in the conductor of one prime-power component.
int component_conductor_exponent(const CharacterComponent& c) {
    const int gamma = c.basis.gamma;
    if (c.basis.p != 2) {
        if (c.exponents.empty() || c.exponents[0] == 0) return 0;
        return std::max(1, gamma - valuation(c.exponents[0], c.basis.p));
    }
    if (gamma == 1) return 0;
    if (gamma == 2) return c.exponents[0] == 0 ? 0 : 2;
    const BigInt& a = c.exponents[0];  // on -1
    const BigInt& b = c.exponents[1];  // on 5
    if (b == 0) return a == 0 ? 0 : 2;
    return gamma - valuation(b, 2);
}

}  // namespace

BigInt conductor(const DirichletCharacter& chi) {
    BigInt f(1);
    for (const auto& c : chi.components()) {
        int e = component_conductor_exponent(c);
        if (e > 0) f *= pow(from_u64(c.basis.p), static_cast<unsigned long>(e));
    }
    return f;
}

bool is_primitive(const DirichletCharacter& chi) { return conductor(chi) == chi.modulus().value(); }

std::vector<DirichletCharacter> enumerate_characters(const FactoredModulus& q, bool primitive_only) {
    if (q.totient() > BigInt(10'000'000))
        throw std::invalid_argument("enumerate_characters: phi(q) exceeds 10^7");
    std::vector<UnitGroupBasis> bases;
    std::vector<u64> radix;
    for (const auto& f : q.factors()) {
        bases.push_back(unit_group_basis(f.p, f.exponent));
        for (const auto& o : bases.back().orders) radix.push_back(to_u64(o));
    }
    std::vector<u64> digits(radix.size(), 0);
    std::vector<DirichletCharacter> out;
    while (true) {
        std::vector<std::vector<BigInt>> e;
        std::size_t pos = 0;
        for (const auto& b : bases) {
            std::vector<BigInt> row;
            for (std::size_t j = 0; j < b.generators.size(); ++j) row.push_back(from_u64(digits[pos++]));
            e.push_back(std::move(row));
        }
        DirichletCharacter chi(q, e);
        if (!primitive_only || is_primitive(chi)) out.push_back(std::move(chi));
        std::size_t k = digits.size();
        while (k > 0) {
            --k;
            if (++digits[k] < radix[k]) break;
            digits[k] = 0;
            if (k == 0) return out;
        }
        if (digits.empty()) return out;
    }
}

CrtRestriction crt_restrict(const DirichletCharacter& chi, const BigInt& k, const BigInt& r) {
    const BigInt& q = chi.modulus().value();
    if (r <= 0 || q % r != 0) throw std::invalid_argument("crt_restrict: r must divide q");
    BigInt s = q / r;
    if (gcd(r, s) != 1) throw std::invalid_argument("crt_restrict: gcd(r, q/r) must be 1");

    std::vector<PrimePower> rf, sf;
    std::vector<std::vector<BigInt>> re, se;
    const auto& fs = chi.modulus().factors();
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (r % from_u64(fs[i].p) == 0) {
            rf.push_back(fs[i]);
            re.push_back(chi.components()[i].exponents);
        } else {
            sf.push_back(fs[i]);
            se.push_back(chi.components()[i].exponents);
        }
    }
    DirichletCharacter chi_r(FactoredModulus(rf), re);
    DirichletCharacter chi_s(FactoredModulus(sf), se);

    CrtRestriction out;
    out.star = chi_s;
    out.r = r;
    out.s = s;
    out.shift = s == 1 ? BigInt(0) : mod(BigInt(invmod(r, s) * k), s);
    CharValue a = evaluate(chi_r, k);
    if (a) {
        CharValue b = evaluate(chi_s, r);
        out.offset = *a + *b;  // chi_s(r) is a unit since gcd(r, s) = 1
    }
    return out;
}

nlohmann::json to_json(const DirichletCharacter& chi) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : chi.components()) {
        nlohmann::json ex = nlohmann::json::array();
        for (const auto& e : c.exponents) ex.push_back(to_string(e));
        comps.push_back({{"p", std::to_string(c.basis.p)}, {"gamma", std::to_string(c.basis.gamma)}, {"exponents", ex}});
    }
    return {{"q", to_string(chi.modulus().value())}, {"order", to_string(chi.order())}, {"components", comps}};
}

namespace {

BigInt json_integer(const nlohmann::json& v) {
    if (v.is_string()) return parse_bigint(v.get<std::string>());
    if (v.is_number_integer()) return from_i64(v.get<i64>());
    if (v.is_number_unsigned()) return from_u64(v.get<u64>());
    throw std::invalid_argument("expected an integer");
}

}  // namespace

DirichletCharacter character_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("q")) throw std::invalid_argument("character JSON: missing q");
    FactoredModulus q(json_integer(j.at("q")));
    std::vector<std::vector<BigInt>> e(q.factors().size());
    if (j.contains("components")) {
        for (const auto& c : j.at("components")) {
            u64 p = to_u64(json_integer(c.at("p")));
            std::size_t idx = q.factors().size();
            for (std::size_t i = 0; i < q.factors().size(); ++i)
                if (q.factors()[i].p == p) idx = i;
            if (idx == q.factors().size()) throw std::invalid_argument("character JSON: prime does not divide q");
            if (c.contains("gamma") && json_integer(c.at("gamma")) != q.factors()[idx].exponent)
                throw std::invalid_argument("character JSON: gamma mismatch");
            for (const auto& x : c.at("exponents")) e[idx].push_back(json_integer(x));
        }
    }
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i].empty())
            e[i].assign(unit_group_basis(q.factors()[i].p, q.factors()[i].exponent).generators.size(), BigInt(0));
    return DirichletCharacter(q, e);
}

// ---------------------------------------------------------------------------

ModulusTables::ModulusTables(const FactoredModulus& q) : q_(q) {
    if (!q.fits_u64() || q.value() > BigInt(static_cast<unsigned long>(kLimit)))
        throw std::invalid_argument("character table: modulus exceeds 2^24");
    q64_ = q.to_u64();
    for (const auto& f : q.factors()) tables_.emplace_back(unit_group_basis(f.p, f.exponent));
}

CharacterTable::CharacterTable(const DirichletCharacter& chi) { build(chi, ModulusTables(chi.modulus())); }

CharacterTable::CharacterTable(const DirichletCharacter& chi, const ModulusTables& tables) {
    if (!(chi.modulus() == tables.modulus())) throw std::invalid_argument("character table: modulus mismatch");
    build(chi, tables);
}

void CharacterTable::build(const DirichletCharacter& chi, const ModulusTables& tables) {
    q_ = tables.q();
    order_ = to_u64(chi.order());
    const auto& comps = chi.components();

    // per component: numerator over order_ for each residue mod p^gamma, -1 for non-units
    std::vector<std::vector<std::int64_t>> local(comps.size());
    std::vector<u64> mods(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const UnitLogTable& t = tables.components()[i];
        u64 m = t.modulus();
        mods[i] = m;
        local[i].assign(m, -1);
        std::vector<u64> ex, ord, scale;
        for (std::size_t j = 0; j < comps[i].exponents.size(); ++j) {
            u64 o = t.orders()[j];
            u64 e = to_u64(comps[i].exponents[j]);
            ex.push_back(e);
            ord.push_back(o);
            u64 g = std::gcd(e, o);
            // (e l mod o) is a multiple of g and (o / g) | order_
            scale.push_back(order_ / (o / g));
        }
        for (u64 r = 0; r < m; ++r) {
            if (!t.is_unit(r)) continue;
            u128 acc = 0;
            for (std::size_t j = 0; j < ex.size(); ++j) {
                if (ex[j] == 0) continue;
                u64 o = ord[j];
                u64 g = std::gcd(ex[j], o);
                u64 v = static_cast<u64>((static_cast<u128>(ex[j]) * t.exponent(r, j)) % o);
                acc += static_cast<u128>(v / g) * scale[j];
            }
            local[i][r] = static_cast<std::int64_t>(acc % order_);
        }
    }

    table_.assign(q_, -1);
    std::vector<u64> res(comps.size(), 0);
    for (u64 n = 0; n < q_; ++n) {
        std::int64_t sum = 0;
        bool zero = false;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            std::int64_t v = local[i][res[i]];
            if (v < 0) {
                zero = true;
                break;
            }
            sum += v;
            if (sum >= static_cast<std::int64_t>(order_)) sum -= static_cast<std::int64_t>(order_);
        }
        table_[n] = zero ? -1 : static_cast<std::int32_t>(sum);
        for (std::size_t i = 0; i < comps.size(); ++i)
            if (++res[i] == mods[i]) res[i] = 0;
    }

    roots_.resize(order_);
    for (u64 j = 0; j < order_; ++j)
        roots_[j] = unit_phase(static_cast<double>(j) / static_cast<double>(order_));
}

CharValue CharacterTable::angle(i64 n) const {
    i64 j = numerator(n);
    if (j < 0) return std::nullopt;
    return RationalAngle(from_i64(j), from_u64(order_));
}

}  // namespace chisum
