#pragma once

// Vinogradov mean-value counts, rational approximations, and Korobov's double-sum inequality.

#include <cstdint>
#include <optional>
#include <vector>

#include "chisum/bigint.hpp"
#include "chisum/expsums.hpp"

namespace chisum {

struct CountConfig {
    u64 max_multisets = 50'000'000;
};

/// Number of (y, z) in [1, P]^{2k} with sum y_i^r = sum z_i^r for r = 1..d. Computed as
/// sum_v r(v)^2 over power-sum signatures v of k-multisets weighted by multinomial counts.
/// Throws std::length_error when the number of k-multisets exceeds the budget.
BigInt count_vinogradov(int k, int d, u64 P, const CountConfig& cfg = {});

/// Number of k-multisets of [1, P], i.e. binom(P + k - 1, k).
BigInt multiset_count(int k, u64 P);

struct RationalApprox {
    BigInt a;
    BigInt b{1};
    double theta = 0.0;  // alpha = a/b + theta / b^2
};

/// Last continued-fraction convergent with denominator <= bound.
RationalApprox rational_approx(const Rational& alpha, const BigInt& bound);
/// The double is converted to the rational it represents exactly.
RationalApprox rational_approx(double alpha, const BigInt& bound);

/// Coefficient of x^r in g (r = 1..d), either exact or real, with an optional approximation.
struct KorobovCoefficient {
    std::optional<Rational> exact;
    double value = 0.0;
    std::optional<RationalApprox> approx;
};

struct KorobovReport {
    int k = 0;
    int d = 0;
    u64 P = 0;
    BigInt Q;
    double log_W = 0.0;
    double W = 0.0;
    BigInt N;
    double S_abs = 0.0;
    double lhs_log = 0.0;  // log |S|^{2k^2}
    double rhs_log = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    std::vector<RationalApprox> approximations;
};

/// Checks |S|^{2k^2} <= (64 k^2 log 3Q)^{d/2} W P^{2k(2k-1)} N_{k,d}(P) with S = sum_{y,z <= P} e(g(yz)),
/// Q = max b_r and W = prod min{P^r, P^r b_r^{-1/2} + b_r^{1/2}}. Missing approximations are
/// taken as continued-fraction convergents with b_r <= P^r. Requires d >= 2.
KorobovReport korobov_check(const std::vector<KorobovCoefficient>& g, int k, u64 P, const CountConfig& cfg = {});

struct KorobovInstance {
    std::vector<Rational> coefficients;  // x^1 .. x^d
    int k = 1;
    u64 P = 1;
};

/// Seeded random instances: d in [2, max_d], denominators in [1, max_den], P in [1, max_P], k in [1, max_k].
std::vector<KorobovInstance> korobov_campaign(u64 seed, int count, int max_d = 4, u64 max_den = 50, u64 max_P = 25,
                                              int max_k = 3);

/// log of d^{3 d^3} P^{2k - 0.499 d^2}.
double ford_bound_log(int d, u64 P, long k);

struct FordSearch {
    long k = 0;
    double log_bound = 0.0;
    long k_min = 0;
    long k_max = 0;
    bool guarantee_applies = false;  // d >= 129
};

/// Scans k in [2 d^2, 4 d^2] for the least log-bound.
FordSearch ford_k_search(int d, u64 P);

}  // namespace chisum
