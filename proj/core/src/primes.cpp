#include "chisum/primes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chisum/arith.hpp"
#include "chisum/parallel.hpp"

namespace chisum {

namespace {

constexpr u64 kSegment = u64{1} << 20;

struct Neumaier {
    double s = 0.0, c = 0.0;
    void add(double v) {
        double t = s + v;
        if (std::fabs(s) >= std::fabs(v)) c += (s - t) + v;
        else c += (v - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<u64> small_primes(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

// Primes in [L, R), L >= 2, given every prime up to sqrt(R - 1).
template <class F>
void sieve_segment(u64 L, u64 R, const std::vector<u64>& base, F&& on_prime) {
    std::vector<char> composite(R - L, 0);
    for (u64 p : base) {
        if (p * p >= R) break;
        u64 start = std::max(p * p, (L + p - 1) / p * p);
        for (u64 m = start; m < R; m += p) composite[m - L] = 1;
    }
    for (u64 n = L; n < R; ++n)
        if (!composite[n - L]) on_prime(n);
}

u64 reduce_class(i64 a, u64 q) {
    i64 r = a % static_cast<i64>(q);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(q) : r);
}

}  // namespace

double von_mangoldt(u64 n) {
    if (n < 2) return 0.0;
    auto f = factor(n);
    return f.size() == 1 ? std::log(static_cast<double>(f[0].p)) : 0.0;
}

double LogCombination::value() const {
    Neumaier acc;
    for (const auto& [p, c] : terms) acc.add(static_cast<double>(c) * std::log(static_cast<double>(p)));
    return acc.value();
}

void LogCombination::add(u64 prime, u64 count) {
    if (count == 0) return;
    if (terms.empty() || terms.back().first < prime) {
        terms.emplace_back(prime, count);
        return;
    }
    auto it = std::lower_bound(terms.begin(), terms.end(), prime, [](const auto& t, u64 p) { return t.first < p; });
    if (it != terms.end() && it->first == prime) it->second += count;
    else terms.insert(it, {prime, count});
}

void LogCombination::merge(const LogCombination& other) {
    std::vector<std::pair<u64, u64>> out;
    out.reserve(terms.size() + other.terms.size());
    auto a = terms.cbegin();
    auto b = other.terms.cbegin();
    while (a != terms.cend() || b != other.terms.cend()) {
        if (b == other.terms.cend() || (a != terms.cend() && a->first < b->first)) {
            out.push_back(*a++);
        } else if (a == terms.cend() || b->first < a->first) {
            if (b->second) out.push_back(*b);
            ++b;
        } else {
            out.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    terms = std::move(out);
}

std::vector<u64> primes_between(u64 lo, u64 hi) {
    std::vector<u64> out;
    if (hi <= lo || hi < 2) return out;
    const auto base = small_primes(isqrt(hi));
    for (u64 L = std::max<u64>(lo + 1, 2); L <= hi; L += kSegment) {
        const u64 R = std::min(hi + 1, L + kSegment);
        sieve_segment(L, R, base, [&](u64 p) { out.push_back(p); });
    }
    return out;
}

double psi_interval(u64 lo, u64 hi, u64 q, i64 a) {
    if (q == 0) throw std::invalid_argument("psi: modulus must be >= 1");
    if (hi <= lo || hi < 2) return 0.0;
    const u64 cls = reduce_class(a, q);
    const auto base = small_primes(isqrt(hi));
    const u64 first = std::max<u64>(lo + 1, 2);
    const u64 blocks = (hi - first) / kSegment + 1;

    auto partial = map_blocks<Neumaier>(blocks, [&](std::size_t b) {
        Neumaier acc;
        const u64 L = first + b * kSegment;
        const u64 R = std::min(hi + 1, L + kSegment);
        sieve_segment(L, R, base, [&](u64 p) {
            if (p % q == cls) acc.add(std::log(static_cast<double>(p)));
        });
        return acc;
    });
    Neumaier total;
    for (const auto& part : partial) {
        total.add(part.s);
        total.add(part.c);
    }
    // prime powers r^k, k >= 2
    for (u64 r : base) {
        const double lr = std::log(static_cast<double>(r));
        for (u64 pw = r * r;; pw *= r) {
            if (pw > lo && pw % q == cls) total.add(lr);
            if (pw > hi / r) break;
        }
    }
    return total.value();
}

double psi_progression(double x, u64 q, i64 a) {
    if (!(x >= 0.0)) throw std::invalid_argument("psi: x must be >= 0");
    if (x < 2.0) return 0.0;
    return psi_interval(0, static_cast<u64>(std::floor(x)), q, a);
}

std::vector<LogCombination> psi_all_classes_exact(u64 x, u64 q) {
    if (q == 0) throw std::invalid_argument("psi: modulus must be >= 1");
    std::vector<LogCombination> classes(q);
    for (u64 r : primes_between(0, x)) {
        for (u64 pw = r;; pw *= r) {
            classes[pw % q].add(r);
            if (pw > x / r) break;
        }
    }
    return classes;
}

LogCombination psi_progression_exact(u64 x, u64 q, i64 a) {
    if (q == 0) throw std::invalid_argument("psi: modulus must be >= 1");
    const u64 cls = reduce_class(a, q);
    LogCombination out;
    for (u64 r : primes_between(0, x)) {
        for (u64 pw = r;; pw *= r) {
            if (pw % q == cls) out.add(r);
            if (pw > x / r) break;
        }
    }
    return out;
}

PsiReport short_interval_check(u64 q, i64 a, u64 x, u64 h, double b, double eps, double c0) {
    if (q == 0) throw std::invalid_argument("short_interval_check: q must be >= 1");
    if (gcd(reduce_class(a, q), q) != 1)
        throw std::invalid_argument("short_interval_check: gcd(a, q) > 1, the class holds at most one prime");
    if (!(b > 1.0)) throw std::invalid_argument("short_interval_check: b must exceed 1");
    PsiReport rep;
    rep.q = q;
    rep.a = a;
    rep.x = static_cast<double>(x);
    rep.h = static_cast<double>(h);
    rep.b = b;
    rep.eps = eps;
    rep.c0 = c0;
    rep.psi_x = psi_interval(0, x, q, a);
    rep.delta_psi = psi_interval(x, x + h, q, a);
    rep.psi_x_plus_h = rep.psi_x + rep.delta_psi;
    const double phi = totient(FactoredModulus(q)).get_d();
    rep.main_term = rep.h / phi;
    rep.rel_error = rep.main_term > 0.0 ? std::fabs(rep.delta_psi - rep.main_term) / rep.main_term : 0.0;
    const double lx = std::log(rep.x);
    const double llx = lx > 0.0 ? std::log(lx) : 0.0;
    rep.theorem5_error_shape = llx > 0.0 ? std::exp(-c0 * std::cbrt(lx) / std::cbrt(llx)) : 1.0;
    const double lq = std::log(static_cast<double>(q));
    rep.lower_window_ok = h > 0 && x > 0 && lq + (1.0 - 1.0 / b + eps) * lx <= std::log(rep.h);
    rep.upper_window_ok = h <= x;
    rep.modulus_window_ok = x > 0 && eps > 0.0 && lx <= lq / eps;
    rep.window_holds = rep.lower_window_ok && rep.upper_window_ok && rep.modulus_window_ok;
    rep.empty_interval = rep.delta_psi == 0.0;
    return rep;
}

}  // namespace chisum
