#pragma once

// Brute-force reference implementations used to cross-check the library. Nothing here
// calls the library's discrete logarithms, sieves, or counting kernels.

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "chisum/characters.hpp"

namespace oracle {

using chisum::BigInt;
using chisum::Rational;
using chisum::i64;
using chisum::u64;

/// Character values by walking generator powers: every unit of Z/p^gamma is visited once
/// as a product of generator powers and assigned its angle directly.
class CharacterOracle {
public:
    explicit CharacterOracle(const chisum::DirichletCharacter& chi);

    u64 modulus() const { return q_; }
    /// Exact angle in [0, 1) of chi(n), or nullopt when gcd(n, q) > 1.
    std::optional<Rational> angle(i64 n) const;
    std::complex<double> value(i64 n) const;

private:
    u64 q_ = 1;
    struct Component {
        u64 modulus;
        std::vector<std::optional<Rational>> angles;  // indexed by residue
    };
    std::vector<Component> components_;
};

/// N_{k,d}(P) by enumerating every 2k-tuple (the last entry is forced by the degree-1 equation).
BigInt vinogradov_naive(int k, int d, u64 P);

/// sum of Lambda(n) over n <= x, n = a mod q, as prime -> multiplicity, by trial division.
std::map<u64, u64> psi_trial_division(u64 x, u64 q, u64 a);

/// sum_{n <= N} chi(n) n^{-s} for real s.
std::complex<double> dirichlet_partial_sum(const CharacterOracle& chi, double s, u64 N);

bool is_prime_naive(u64 n);

/// chi(1 + tau core x) = e(m F_d(tau core x) / q) for every x in [0, q / (tau core)), with
/// F_d summed term by term as exact rationals and chi taken from the oracle.
bool postnikov_identity_holds(const CharacterOracle& chi, const chisum::FactoredModulus& q, const BigInt& m, int d);

}  // namespace oracle
