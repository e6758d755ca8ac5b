#pragma once

// Integer, modular and unit-group arithmetic.

#include <cstdint>
#include <vector>

#include "chisum/bigint.hpp"

namespace chisum {

struct PrimePower {
    u64 p = 0;
    int exponent = 0;

    BigInt value() const;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Trial division with a mod-30 wheel. Primes ascending; n = 1 gives an empty list.
/// Throws std::domain_error if n < 1, std::runtime_error if a cofactor is out of reach.
std::vector<PrimePower> factor(const BigInt& n);
std::vector<PrimePower> factor(u64 n);

bool is_prime(u64 n);

/// p-adic valuation; throws std::domain_error for n == 0.
int valuation(const BigInt& n, u64 p);
int valuation(i64 n, u64 p);

/// A positive modulus together with its factorization.
class FactoredModulus {
public:
    FactoredModulus();  // q = 1
    explicit FactoredModulus(const BigInt& q);
    explicit FactoredModulus(u64 q);
    explicit FactoredModulus(std::vector<PrimePower> factors);

    const BigInt& value() const { return q_; }
    const std::vector<PrimePower>& factors() const { return factors_; }
    /// Product of the distinct primes dividing q.
    const BigInt& core() const { return core_; }
    int gamma_max() const { return gamma_max_; }
    int gamma_min() const { return gamma_min_; }
    /// 2 when 4 | q, else 1.
    int tau() const { return tau_; }
    BigInt totient() const;
    double log() const;

    bool fits_u64() const { return chisum::fits_u64(q_); }
    u64 to_u64() const { return chisum::to_u64(q_); }

    friend bool operator==(const FactoredModulus& a, const FactoredModulus& b) { return a.q_ == b.q_; }

private:
    void finish();

    BigInt q_{1};
    std::vector<PrimePower> factors_;
    BigInt core_{1};
    int gamma_max_ = 0;
    int gamma_min_ = 0;
    int tau_ = 1;
};

BigInt core(const FactoredModulus& q);

/// min_p v_p(q) >= 0.7 max_p v_p(q) and max_p v_p(q) >= gamma0, compared as 10*min >= 7*max.
bool satisfies_core_condition(const FactoredModulus& q, int gamma0);

BigInt totient(const FactoredModulus& q);

/// Canonical generators of (Z/p^gamma)^x.
///
/// Odd p: the least g that is a primitive root modulo p^2 (hence modulo every p^gamma).
/// p = 2: {} for gamma = 1, {-1} for gamma = 2, {-1, 5} for gamma >= 3.
struct UnitGroupBasis {
    u64 p = 0;
    int gamma = 0;
    BigInt modulus;
    std::vector<BigInt> generators;
    std::vector<BigInt> orders;

    BigInt group_order() const;
};

UnitGroupBasis unit_group_basis(u64 p, int gamma);

/// Exponent vector e with prod generators[i]^e[i] = x (mod p^gamma), 0 <= e[i] < orders[i].
/// Pohlig-Hellman over the factored group order with baby-step/giant-step per prime.
/// Throws std::domain_error when gcd(x, p) != 1.
std::vector<BigInt> discrete_log(const BigInt& x, const UnitGroupBasis& basis);

/// Multiplicative order of g modulo m (g must be a unit).
BigInt multiplicative_order(const BigInt& g, const BigInt& m);

/// Dense discrete-log table for a prime power small enough to enumerate.
/// codes[r] holds the exponents of residue r (row-major, basis.generators.size() per row),
/// or is marked as a non-unit.
class UnitLogTable {
public:
    explicit UnitLogTable(const UnitGroupBasis& basis);

    u64 modulus() const { return modulus_; }
    std::size_t rank() const { return rank_; }
    bool is_unit(u64 r) const { return unit_[r]; }
    /// Exponent of generator j at residue r (r must be a unit).
    std::uint32_t exponent(u64 r, std::size_t j) const { return logs_[r * rank_ + j]; }
    const std::vector<u64>& orders() const { return orders_; }

private:
    u64 modulus_ = 1;
    std::size_t rank_ = 0;
    std::vector<u64> orders_;
    std::vector<std::uint32_t> logs_;
    std::vector<bool> unit_;
};

}  // namespace chisum
