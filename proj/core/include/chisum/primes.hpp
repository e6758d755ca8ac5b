#pragma once

// Von Mangoldt sums over arithmetic progressions and the short-interval comparison.

#include <cstdint>
#include <utility>
#include <vector>

#include "chisum/bigint.hpp"

namespace chisum {

/// log r if n = r^k for a prime r, else 0. n = 0 gives 0.
double von_mangoldt(u64 n);

/// sum_i count_i log(prime_i), kept as (prime, count) pairs in ascending prime order so that
/// sums can be compared exactly.
struct LogCombination {
    std::vector<std::pair<u64, u64>> terms;

    double value() const;
    void add(u64 prime, u64 count = 1);
    void merge(const LogCombination& other);
    friend bool operator==(const LogCombination&, const LogCombination&) = default;
};

/// psi(x; q, a) = sum of Lambda(n) over 1 <= n <= x with n = a (mod q). q = 1 sums every n.
/// Segmented sieve; blocks are combined in order so the result is thread-count independent.
double psi_progression(double x, u64 q, i64 a);

/// Sum of Lambda(n) over lo < n <= hi with n = a (mod q).
double psi_interval(u64 lo, u64 hi, u64 q, i64 a);

/// Exact forms of psi(x; q, a) for one class, and for every class a = 0..q-1.
LogCombination psi_progression_exact(u64 x, u64 q, i64 a);
std::vector<LogCombination> psi_all_classes_exact(u64 x, u64 q);

/// Primes in (lo, hi] in ascending order.
std::vector<u64> primes_between(u64 lo, u64 hi);

struct PsiReport {
    u64 q = 1;
    i64 a = 0;
    double x = 0.0;
    double h = 0.0;
    double b = 2.4;
    double eps = 0.05;
    double c0 = 1.0;
    double psi_x = 0.0;
    double psi_x_plus_h = 0.0;
    double delta_psi = 0.0;
    double main_term = 0.0;  // h / phi(q)
    double rel_error = 0.0;
    double theorem5_error_shape = 0.0;  // exp(-c0 (log x)^{1/3} (log log x)^{-1/3})
    bool lower_window_ok = false;  // q x^{1 - 1/b + eps} <= h
    bool upper_window_ok = false;  // h <= x
    bool modulus_window_ok = false;  // x <= q^{1/eps}
    bool window_holds = false;
    bool empty_interval = false;
};

/// Compares psi(x + h; q, a) - psi(x; q, a) with h / phi(q). The window conditions are reported
/// as flags. Throws std::invalid_argument when gcd(a, q) > 1.
PsiReport short_interval_check(u64 q, i64 a, u64 x, u64 h, double b = 2.4, double eps = 0.05, double c0 = 1.0);

}  // namespace chisum
