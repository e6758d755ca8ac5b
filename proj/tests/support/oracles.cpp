#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

CharacterOracle::CharacterOracle(const chisum::DirichletCharacter& chi) : q_(chi.modulus().to_u64()) {
    for (const auto& comp : chi.components()) {
        const auto& basis = comp.basis;
        const u64 m = chisum::to_u64(basis.modulus);
        Component c{m, std::vector<std::optional<Rational>>(m)};
        // iterate over all exponent tuples of the generators
        std::vector<u64> orders, gens;
        for (const auto& o : basis.orders) orders.push_back(chisum::to_u64(o));
        for (const auto& g : basis.generators) gens.push_back(chisum::to_u64(chisum::mod(g, basis.modulus)));
        u64 total = 1;
        for (u64 o : orders) total *= o;
        for (u64 flat = 0; flat < total; ++flat) {
            u64 rest = flat, x = 1 % m;
            Rational ang(0);
            for (std::size_t j = gens.size(); j-- > 0;) {
                const u64 e = rest % orders[j];
                rest /= orders[j];
                x = chisum::mulmod(x, chisum::powmod(gens[j], e, m), m);
                ang += Rational(comp.exponents[j] * chisum::from_u64(e)) / Rational(chisum::from_u64(orders[j]));
            }
            ang = chisum::frac(ang);
            if (c.angles[x]) throw std::logic_error("oracle: generators do not give a direct product");
            c.angles[x] = ang;
        }
        components_.push_back(std::move(c));
    }
}

std::optional<Rational> CharacterOracle::angle(i64 n) const {
    Rational total(0);
    for (const auto& c : components_) {
        i64 r = n % static_cast<i64>(c.modulus);
        if (r < 0) r += static_cast<i64>(c.modulus);
        const auto& a = c.angles[static_cast<std::size_t>(r)];
        if (!a) return std::nullopt;
        total += *a;
    }
    return chisum::frac(total);
}

std::complex<double> CharacterOracle::value(i64 n) const {
    auto a = angle(n);
    if (!a) return {0.0, 0.0};
    return std::polar(1.0, 2.0 * std::numbers::pi * a->get_d());
}

namespace {

void vinogradov_rec(int pos, int k, int d, u64 P, std::vector<i64>& diff, u64& count) {
    const int last = 2 * k - 1;
    if (pos == last) {
        // the last entry is a z: need z^r = diff_r for every r
        if (diff[0] < 1 || static_cast<u64>(diff[0]) > P) return;
        const i64 z = diff[0];
        i64 zr = z;
        for (int r = 1; r < d; ++r) {
            zr *= z;
            if (diff[r] != zr) return;
        }
        ++count;
        return;
    }
    const int sign = pos < k ? 1 : -1;
    for (u64 v = 1; v <= P; ++v) {
        i64 vr = 1;
        for (int r = 0; r < d; ++r) {
            vr *= static_cast<i64>(v);
            diff[r] += sign * vr;
        }
        vinogradov_rec(pos + 1, k, d, P, diff, count);
        vr = 1;
        for (int r = 0; r < d; ++r) {
            vr *= static_cast<i64>(v);
            diff[r] -= sign * vr;
        }
    }
}

}  // namespace

BigInt vinogradov_naive(int k, int d, u64 P) {
    std::vector<i64> diff(static_cast<std::size_t>(d), 0);
    u64 count = 0;
    vinogradov_rec(0, k, d, P, diff, count);
    return chisum::from_u64(count);
}

bool postnikov_identity_holds(const CharacterOracle& chi, const chisum::FactoredModulus& q, const BigInt& m, int d) {
    const BigInt step = q.core() * q.tau();
    const u64 points = chisum::to_u64(q.value() / step);
    for (u64 x = 0; x < points; ++x) {
        const BigInt y = step * chisum::from_u64(x);
        Rational acc(0);
        BigInt pw(1);
        for (int r = 1; r <= d; ++r) {
            pw *= y;
            Rational term(pw, BigInt(r));
            term.canonicalize();
            if (r % 2 == 0) acc -= term;
            else acc += term;
        }
        Rational rhs = acc * Rational(m) / Rational(q.value());
        rhs.canonicalize();
        auto lhs = chi.angle(chisum::to_i64(y + 1));
        if (!lhs || *lhs != chisum::frac(rhs)) return false;
    }
    return true;
}

bool is_prime_naive(u64 n) {
    if (n < 2) return false;
    for (u64 f = 2; f * f <= n; ++f)
        if (n % f == 0) return false;
    return true;
}

std::map<u64, u64> psi_trial_division(u64 x, u64 q, u64 a) {
    std::map<u64, u64> out;
    for (u64 n = 2; n <= x; ++n) {
        if (n % q != a % q) continue;
        u64 m = n, p = 0;
        for (u64 f = 2; f * f <= m; ++f) {
            if (m % f == 0) {
                p = f;
                break;
            }
        }
        if (p == 0) p = m;
        while (m % p == 0) m /= p;
        if (m == 1) ++out[p];
    }
    return out;
}

std::complex<double> dirichlet_partial_sum(const CharacterOracle& chi, double s, u64 N) {
    std::complex<double> acc = 0.0;
    for (u64 n = N; n >= 1; --n) acc += chi.value(static_cast<i64>(n)) * std::pow(static_cast<double>(n), -s);
    return acc;
}

}  // namespace oracle
