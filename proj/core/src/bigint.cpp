#include "chisum/bigint.hpp"

#include <cmath>
#include <stdexcept>

namespace chisum {

BigInt from_u64(u64 v) {
    BigInt r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return r;
}

BigInt from_i64(i64 v) {
    if (v >= 0) return from_u64(static_cast<u64>(v));
    BigInt r = from_u64(static_cast<u64>(-(v + 1)) + 1U);
    return -r;
}

bool fits_u64(const BigInt& v) { return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64; }

u64 to_u64(const BigInt& v) {
    if (!fits_u64(v)) throw std::overflow_error("integer " + v.get_str() + " does not fit in 64 bits");
    u64 out = 0;
    mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, v.get_mpz_t());
    return out;
}

i64 to_i64(const BigInt& v) {
    if (mpz_sizeinbase(v.get_mpz_t(), 2) > 62) throw std::overflow_error("integer " + v.get_str() + " does not fit in 63 bits");
    BigInt a = abs(v);
    auto m = static_cast<i64>(to_u64(a));
    return sgn(v) < 0 ? -m : m;
}

double log_of(const BigInt& v) {
    if (sgn(v) <= 0) throw std::domain_error("log of a nonpositive integer");
    long exponent = 0;
    double mantissa = mpz_get_d_2exp(&exponent, v.get_mpz_t());
    return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

BigInt parse_bigint(std::string_view text) {
    std::string s(text);
    auto caret = s.find('^');
    if (caret != std::string::npos) {
        BigInt base = parse_bigint(s.substr(0, caret));
        BigInt e = parse_bigint(s.substr(caret + 1));
        if (sgn(e) < 0 || !fits_u64(e)) throw std::invalid_argument("bad exponent in '" + s + "'");
        return pow(base, static_cast<unsigned long>(to_u64(e)));
    }
    if (s.empty()) throw std::invalid_argument("empty integer");
    BigInt r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("not an integer: '" + s + "'");
    return r;
}

Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num = parse_bigint(s.substr(0, slash));
        BigInt den = parse_bigint(s.substr(slash + 1));
        if (sgn(den) == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        if (digits.empty() || digits == "-") throw std::invalid_argument("not a number: '" + s + "'");
        BigInt num = parse_bigint(digits);
        BigInt den = pow(BigInt(10), static_cast<unsigned long>(s.size() - dot - 1));
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    return Rational(parse_bigint(s));
}

std::string to_string(const BigInt& v) { return v.get_str(); }
std::string to_string(const Rational& v) { return v.get_str(); }

BigInt pow(const BigInt& base, unsigned long exponent) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

BigInt powmod(const BigInt& base, const BigInt& exponent, const BigInt& modulus) {
    BigInt r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

BigInt mod(const BigInt& a, const BigInt& m) {
    BigInt r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

BigInt invmod(const BigInt& a, const BigInt& m) {
    BigInt r;
    if (m == 1) return BigInt(0);
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error(a.get_str() + " is not invertible modulo " + m.get_str());
    return r;
}

Rational frac(const Rational& r) {
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    Rational out = r - Rational(fl);
    out.canonicalize();
    return out;
}

u64 invmod(u64 a, u64 m) {
    if (m == 1) return 0;
    i128 t = 0, new_t = 1;
    i128 r = m, new_r = a % m;
    while (new_r != 0) {
        i128 q = r / new_r;
        i128 tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) throw std::domain_error(std::to_string(a) + " is not invertible modulo " + std::to_string(m));
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

}  // namespace chisum
