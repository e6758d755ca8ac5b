#include "chisum/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace chisum {

namespace {

constexpr u64 kTrialLimit = 100'000'000;

// Gaps of the mod-30 wheel starting from 7.
constexpr int kWheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};

void push_factor(std::vector<PrimePower>& out, u64 p, int e) {
    if (e > 0) out.push_back({p, e});
}

int strip(BigInt& n, u64 p) {
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
    }
    return e;
}

}  // namespace

BigInt PrimePower::value() const { return pow(from_u64(p), static_cast<unsigned long>(exponent)); }

std::vector<PrimePower> factor(const BigInt& n_in) {
    if (sgn(n_in) <= 0) throw std::domain_error("factor: n must be >= 1");
    std::vector<PrimePower> out;
    BigInt n = n_in;
    for (u64 p : {2U, 3U, 5U}) push_factor(out, p, strip(n, p));
    u64 d = 7;
    int w = 0;
    while (n > 1 && d <= kTrialLimit) {
        if (BigInt(from_u64(d)) * d > n) break;
        push_factor(out, d, strip(n, d));
        d += static_cast<u64>(kWheel[w]);
        w = (w + 1) & 7;
    }
    if (n > 1) {
        bool prime = BigInt(from_u64(d)) * d > n || mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
        if (!prime || !fits_u64(n))
            throw std::runtime_error("factor: cofactor " + n.get_str() + " is beyond trial-division reach");
        out.push_back({to_u64(n), 1});
    }
    return out;
}

std::vector<PrimePower> factor(u64 n) { return factor(from_u64(n)); }

bool is_prime(u64 n) {
    if (n < 2) return false;
    BigInt v = from_u64(n);
    return mpz_probab_prime_p(v.get_mpz_t(), 40) > 0;
}

int valuation(const BigInt& n_in, u64 p) {
    if (sgn(n_in) == 0) throw std::domain_error("valuation of zero is undefined");
    if (p < 2) throw std::domain_error("valuation: p must be prime");
    BigInt n = abs(n_in);
    return strip(n, p);
}

int valuation(i64 n, u64 p) { return valuation(from_i64(n), p); }

FactoredModulus::FactoredModulus() { finish(); }

FactoredModulus::FactoredModulus(const BigInt& q) : q_(q) {
    if (sgn(q) <= 0) throw std::domain_error("modulus must be positive");
    factors_ = factor(q);
    finish();
}

FactoredModulus::FactoredModulus(u64 q) : FactoredModulus(from_u64(q)) {}

FactoredModulus::FactoredModulus(std::vector<PrimePower> factors) : factors_(std::move(factors)) {
    std::sort(factors_.begin(), factors_.end(), [](auto& a, auto& b) { return a.p < b.p; });
    q_ = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i > 0 && factors_[i].p == factors_[i - 1].p) throw std::invalid_argument("repeated prime in factorization");
        if (factors_[i].exponent < 1 || !is_prime(factors_[i].p))
            throw std::invalid_argument("invalid prime power in factorization");
        q_ *= factors_[i].value();
    }
    finish();
}

void FactoredModulus::finish() {
    core_ = 1;
    gamma_max_ = 0;
    gamma_min_ = factors_.empty() ? 0 : std::numeric_limits<int>::max();
    for (const auto& f : factors_) {
        core_ *= from_u64(f.p);
        gamma_max_ = std::max(gamma_max_, f.exponent);
        gamma_min_ = std::min(gamma_min_, f.exponent);
    }
    tau_ = mpz_divisible_ui_p(q_.get_mpz_t(), 4) ? 2 : 1;
}

BigInt FactoredModulus::totient() const {
    BigInt t = 1;
    for (const auto& f : factors_) t *= pow(from_u64(f.p), static_cast<unsigned long>(f.exponent - 1)) * from_u64(f.p - 1);
    return t;
}

double FactoredModulus::log() const {
    double s = 0.0;
    for (const auto& f : factors_) s += f.exponent * std::log(static_cast<double>(f.p));
    return s;
}

BigInt core(const FactoredModulus& q) { return q.core(); }

bool satisfies_core_condition(const FactoredModulus& q, int gamma0) {
    if (q.value() < 2) throw std::domain_error("core condition needs q >= 2");
    return 10L * q.gamma_min() >= 7L * q.gamma_max() && q.gamma_max() >= gamma0;
}

BigInt totient(const FactoredModulus& q) { return q.totient(); }

BigInt UnitGroupBasis::group_order() const {
    BigInt n = 1;
    for (const auto& o : orders) n *= o;
    return n;
}

BigInt multiplicative_order(const BigInt& g, const BigInt& m) {
    if (m == 1) return BigInt(1);
    if (gcd(g, m) != 1) throw std::domain_error("order of a non-unit");
    // Order divides lambda(m) | phi(m); strip prime factors of phi(m).
    FactoredModulus fm(m);
    BigInt n = fm.totient();
    std::map<u64, int> primes;
    for (const auto& f : fm.factors()) {
        if (f.exponent > 1) primes[f.p] += f.exponent - 1;
        for (const auto& g2 : factor(f.p - 1)) primes[g2.p] += g2.exponent;
    }
    for (const auto& [p, e] : primes) {
        for (int i = 0; i < e; ++i) {
            BigInt cand = n / from_u64(p);
            if (powmod(g, cand, m) == 1)
                n = cand;
            else
                break;
        }
    }
    return n;
}

UnitGroupBasis unit_group_basis(u64 p, int gamma) {
    if (!is_prime(p)) throw std::domain_error("unit_group_basis: p must be prime");
    if (gamma < 1) throw std::domain_error("unit_group_basis: gamma must be >= 1");
    UnitGroupBasis b;
    b.p = p;
    b.gamma = gamma;
    b.modulus = pow(from_u64(p), static_cast<unsigned long>(gamma));
    if (p == 2) {
        if (gamma == 2) {
            b.generators = {BigInt(3)};
            b.orders = {BigInt(2)};
        } else if (gamma >= 3) {
            b.generators = {b.modulus - 1, BigInt(5)};
            b.orders = {BigInt(2), pow(BigInt(2), static_cast<unsigned long>(gamma - 2))};
        }
        return b;
    }
    // Least primitive root modulo p^2: order p(p-1) there.
    BigInt p2 = from_u64(p) * from_u64(p);
    auto pm1 = factor(p - 1);
    for (u64 g = 2;; ++g) {
        BigInt G = from_u64(g);
        bool primitive_mod_p = true;
        for (const auto& f : pm1) {
            if (powmod(G, from_u64((p - 1) / f.p), from_u64(p)) == 1) {
                primitive_mod_p = false;
                break;
            }
        }
        if (!primitive_mod_p) continue;
        if (powmod(G, from_u64(p - 1), p2) == 1) continue;  // does not lift
        b.generators = {mod(G, b.modulus)};
        b.orders = {pow(from_u64(p), static_cast<unsigned long>(gamma - 1)) * from_u64(p - 1)};
        return b;
    }
}

namespace {

// Solve g^x = h in a cyclic group of prime order ell (g of order ell) by baby-step/giant-step.
BigInt bsgs_prime_order(const BigInt& g, const BigInt& h, u64 ell, const BigInt& m) {
    if (h == 1) return BigInt(0);
    u64 step = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(ell))));
    if (step == 0) step = 1;
    std::unordered_map<std::string, u64> baby;
    baby.reserve(step * 2);
    BigInt cur = 1;
    for (u64 j = 0; j < step; ++j) {
        baby.emplace(cur.get_str(16), j);
        cur = mod(cur * g, m);
    }
    BigInt factor_g = invmod(powmod(g, from_u64(step), m), m);
    BigInt gamma = h;
    for (u64 i = 0; i <= step; ++i) {
        auto it = baby.find(gamma.get_str(16));
        if (it != baby.end()) return mod(from_u64(i) * from_u64(step) + from_u64(it->second), from_u64(ell));
        gamma = mod(gamma * factor_g, m);
    }
    throw std::runtime_error("discrete log: element not in subgroup");
}

// Pohlig-Hellman in the cyclic group generated by g of order n = prod ell^e.
BigInt cyclic_log(const BigInt& g, const BigInt& h, const BigInt& n, const std::map<u64, int>& nf, const BigInt& m) {
    BigInt x = 0, mod_acc = 1;
    for (const auto& [ell, e] : nf) {
        BigInt ell_e = pow(from_u64(ell), static_cast<unsigned long>(e));
        BigInt cof = n / ell_e;
        BigInt g1 = powmod(g, cof, m);
        BigInt h1 = powmod(h, cof, m);
        BigInt gamma = powmod(g1, ell_e / from_u64(ell), m);  // order ell
        BigInt xk = 0, ell_pow = 1;
        BigInt g1_inv = invmod(g1, m);
        for (int k = 0; k < e; ++k) {
            BigInt hk = powmod(mod(h1 * powmod(g1_inv, xk, m), m), ell_e / (ell_pow * from_u64(ell)), m);
            BigInt dk = bsgs_prime_order(gamma, hk, ell, m);
            xk += dk * ell_pow;
            ell_pow *= from_u64(ell);
        }
        // CRT merge x (mod mod_acc) with xk (mod ell_e).
        BigInt t = mod((xk - x) * invmod(mod(mod_acc, ell_e), ell_e), ell_e);
        x += mod_acc * t;
        mod_acc *= ell_e;
    }
    return mod(x, n);
}

std::map<u64, int> factor_map(const BigInt& n) {
    std::map<u64, int> out;
    for (const auto& f : factor(n)) out[f.p] += f.exponent;
    return out;
}

}  // namespace

std::vector<BigInt> discrete_log(const BigInt& x_in, const UnitGroupBasis& basis) {
    const BigInt& m = basis.modulus;
    BigInt x = mod(x_in, m);
    if (gcd(x, from_u64(basis.p)) != 1) throw std::domain_error("discrete_log: argument not coprime to modulus");
    if (basis.generators.empty()) return {};
    if (basis.p == 2) {
        if (basis.gamma == 2) return {BigInt(x == 1 ? 0 : 1)};
        // x = (-1)^a 5^b with a determined by x mod 4.
        BigInt a = (mod(x, BigInt(4)) == 1) ? 0 : 1;
        BigInt y = (a == 0) ? x : mod(-x, m);
        const BigInt& n = basis.orders[1];
        BigInt b = (n == 1) ? BigInt(0) : cyclic_log(basis.generators[1], y, n, factor_map(n), m);
        return {a, b};
    }
    const BigInt& n = basis.orders[0];
    return {cyclic_log(basis.generators[0], x, n, factor_map(n), m)};
}

UnitLogTable::UnitLogTable(const UnitGroupBasis& basis) {
    modulus_ = to_u64(basis.modulus);
    rank_ = basis.generators.size();
    for (const auto& o : basis.orders) orders_.push_back(to_u64(o));
    if (modulus_ > (u64{1} << 28)) throw std::length_error("UnitLogTable: modulus too large to tabulate");
    logs_.assign(modulus_ * rank_, 0);
    unit_.assign(modulus_, false);
    if (rank_ == 0) {
        // Trivial group: only residue 1 (mod 1 or mod 2).
        for (u64 r = 0; r < modulus_; ++r) unit_[r] = (gcd(r, modulus_) == 1);
        return;
    }
    std::vector<u64> gens;
    for (const auto& g : basis.generators) gens.push_back(to_u64(g));
    if (rank_ == 1) {
        u64 x = 1;
        for (u64 k = 0; k < orders_[0]; ++k) {
            logs_[x] = static_cast<std::uint32_t>(k);
            unit_[x] = true;
            x = mulmod(x, gens[0], modulus_);
        }
        return;
    }
    // p = 2, gamma >= 3: residues (-1)^a 5^b.
    u64 x = 1;
    for (u64 b = 0; b < orders_[1]; ++b) {
        for (u64 a = 0; a < 2; ++a) {
            u64 r = a ? modulus_ - x : x;
            logs_[r * 2] = static_cast<std::uint32_t>(a);
            logs_[r * 2 + 1] = static_cast<std::uint32_t>(b);
            unit_[r] = true;
        }
        x = mulmod(x, gens[1], modulus_);
    }
}

}  // namespace chisum
