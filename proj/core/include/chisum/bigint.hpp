#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace chisum {

using BigInt = mpz_class;
using Rational = mpq_class;

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

BigInt from_u64(u64 v);
BigInt from_i64(i64 v);

bool fits_u64(const BigInt& v);
u64 to_u64(const BigInt& v);   // throws std::overflow_error if out of range
i64 to_i64(const BigInt& v);

/// Natural logarithm of a positive integer of any size.
double log_of(const BigInt& v);

/// Parses decimal integers and the shorthand "p^e" (e.g. "3^60").
BigInt parse_bigint(std::string_view text);

/// Parses "a/b", "a", or a decimal such as "0.125" into an exact rational.
Rational parse_rational(std::string_view text);

std::string to_string(const BigInt& v);
std::string to_string(const Rational& v);

BigInt pow(const BigInt& base, unsigned long exponent);
BigInt powmod(const BigInt& base, const BigInt& exponent, const BigInt& modulus);
BigInt gcd(const BigInt& a, const BigInt& b);
BigInt lcm(const BigInt& a, const BigInt& b);
/// Least nonnegative residue of a mod m.
BigInt mod(const BigInt& a, const BigInt& m);
/// Inverse of a modulo m; throws std::domain_error when gcd(a, m) != 1.
BigInt invmod(const BigInt& a, const BigInt& m);

/// Fractional part of a rational in [0, 1).
Rational frac(const Rational& r);

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1U) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

inline u64 gcd(u64 a, u64 b) {
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

u64 invmod(u64 a, u64 m);

}  // namespace chisum
