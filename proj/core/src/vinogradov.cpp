#include "chisum/vinogradov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace chisum {

BigInt multiset_count(int k, u64 P) {
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(P + static_cast<u64>(k) - 1), static_cast<unsigned long>(k));
    return out;
}

namespace {

template <class Key>
BigInt count_signatures(int k, int d, u64 P) {
    // pw[y * d + r - 1] = y^r
    std::vector<Key> pw(static_cast<std::size_t>((P + 1) * static_cast<u64>(d)));
    for (u64 y = 1; y <= P; ++y) {
        Key v = 1;
        for (int r = 1; r <= d; ++r) {
            v *= Key(y);
            pw[y * d + r - 1] = v;
        }
    }
    std::vector<u64> fact(static_cast<std::size_t>(k) + 1, 1);
    for (int i = 1; i <= k; ++i) fact[i] = fact[i - 1] * static_cast<u64>(i);

    std::vector<Key> keys;
    std::vector<u64> weights;
    std::vector<u64> y(static_cast<std::size_t>(k), 1);
    std::vector<Key> sums(static_cast<std::size_t>(k + 1) * d, Key(0));

    // iterative nondecreasing enumeration: position i holds y[i], sums row i+1 = row i + powers(y[i])
    int i = 0;
    y[0] = 1;
    while (true) {
        for (int r = 0; r < d; ++r) sums[(i + 1) * d + r] = sums[i * d + r] + pw[y[i] * d + r];
        if (i + 1 < k) {
            ++i;
            y[i] = y[i - 1];
            continue;
        }
        // leaf: weight k! / prod m!
        u64 w = fact[k];
        int run = 1;
        for (int j = 1; j <= k; ++j) {
            if (j < k && y[j] == y[j - 1]) {
                ++run;
            } else {
                w /= fact[run];
                run = 1;
            }
        }
        for (int r = 0; r < d; ++r) keys.push_back(sums[k * d + r]);
        weights.push_back(w);
        // advance
        while (i >= 0 && y[i] == P) --i;
        if (i < 0) break;
        ++y[i];
    }

    std::vector<std::size_t> idx(weights.size());
    std::iota(idx.begin(), idx.end(), 0);
    auto less = [&](std::size_t a, std::size_t b) {
        for (int r = 0; r < d; ++r) {
            const Key& ka = keys[a * d + r];
            const Key& kb = keys[b * d + r];
            if (ka < kb) return true;
            if (kb < ka) return false;
        }
        return false;
    };
    auto equal = [&](std::size_t a, std::size_t b) {
        for (int r = 0; r < d; ++r)
            if (keys[a * d + r] != keys[b * d + r]) return false;
        return true;
    };
    std::sort(idx.begin(), idx.end(), less);

    BigInt total(0);
    std::size_t pos = 0;
    while (pos < idx.size()) {
        u128 rv = 0;
        std::size_t end = pos;
        while (end < idx.size() && equal(idx[pos], idx[end])) rv += weights[idx[end++]];
        BigInt b;
        u64 hi = static_cast<u64>(rv >> 64);
        u64 lo = static_cast<u64>(rv);
        b = from_u64(hi);
        b <<= 64;
        b += from_u64(lo);
        total += b * b;
        pos = end;
    }
    return total;
}

}  // namespace

BigInt count_vinogradov(int k, int d, u64 P, const CountConfig& cfg) {
    if (k < 1 || d < 1 || P < 1) throw std::invalid_argument("count_vinogradov: k, d, P must be >= 1");
    if (k > 20) throw std::invalid_argument("count_vinogradov: k must be <= 20");
    if (multiset_count(k, P) > BigInt(static_cast<unsigned long>(cfg.max_multisets)))
        throw std::length_error("count_vinogradov: signature table exceeds the memory budget");
    // k * P^d bounds every power sum
    BigInt top = BigInt(k) * pow(from_u64(P), static_cast<unsigned long>(d));
    if (top <= BigInt(1) << 62) return count_signatures<u64>(k, d, P);
    return count_signatures<BigInt>(k, d, P);
}

RationalApprox rational_approx(const Rational& alpha_in, const BigInt& bound) {
    if (bound < 1) throw std::invalid_argument("rational_approx: bound must be >= 1");
    Rational alpha = alpha_in;
    alpha.canonicalize();
    // convergents h/k of the continued fraction of alpha
    BigInt h_prev(1), k_prev(0);
    BigInt num = alpha.get_num(), den = alpha.get_den();
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    BigInt h = a, kk(1);
    BigInt rem = num - a * den;
    num = den;
    den = rem;
    while (den != 0) {
        mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        BigInt h_next = a * h + h_prev;
        BigInt k_next = a * kk + k_prev;
        if (k_next > bound) break;
        h_prev = h;
        k_prev = kk;
        h = h_next;
        kk = k_next;
        rem = num - a * den;
        num = den;
        den = rem;
    }
    RationalApprox out;
    out.a = h;
    out.b = kk;
    Rational diff = alpha - Rational(h, kk);
    diff *= Rational(kk * kk);
    out.theta = diff.get_d();
    return out;
}

RationalApprox rational_approx(double alpha, const BigInt& bound) {
    if (!std::isfinite(alpha)) throw std::invalid_argument("rational_approx: alpha must be finite");
    return rational_approx(Rational(alpha), bound);
}

KorobovReport korobov_check(const std::vector<KorobovCoefficient>& g, int k, u64 P, const CountConfig& cfg) {
    const int d = static_cast<int>(g.size());
    if (d < 2) throw std::invalid_argument("korobov_check: requires degree d >= 2");
    if (k < 1 || P < 1) throw std::invalid_argument("korobov_check: k and P must be >= 1");

    KorobovReport rep;
    rep.k = k;
    rep.d = d;
    rep.P = P;

    bool exact = true;
    for (const auto& c : g) exact = exact && c.exact.has_value();
    RealPolynomial poly;
    if (exact) {
        std::vector<Rational> cs{Rational(0)};
        for (const auto& c : g) cs.push_back(*c.exact);
        poly = RealPolynomial::from_rationals(cs);
    } else {
        std::vector<double> cs{0.0};
        for (const auto& c : g) cs.push_back(c.exact ? c.exact->get_d() : c.value);
        poly = RealPolynomial::from_doubles(cs);
    }

    const double logP = std::log(static_cast<double>(P));
    rep.Q = 1;
    rep.log_W = 0.0;
    BigInt Pr(1);
    for (int r = 1; r <= d; ++r) {
        Pr *= from_u64(P);
        const auto& c = g[static_cast<std::size_t>(r - 1)];
        RationalApprox ap = c.approx ? *c.approx : (c.exact ? rational_approx(*c.exact, Pr) : rational_approx(c.value, Pr));
        if (ap.b < 1) throw std::invalid_argument("korobov_check: approximation denominators must be >= 1");
        if (std::fabs(ap.theta) > 1.0) throw std::invalid_argument("korobov_check: approximation has |theta| > 1");
        rep.Q = std::max(rep.Q, ap.b);
        const double lb = log_of(ap.b);
        const double a1 = r * logP;                   // log P^r
        const double t1 = r * logP - 0.5 * lb;        // log P^r b^{-1/2}
        const double t2 = 0.5 * lb;                   // log b^{1/2}
        const double a2 = std::max(t1, t2) + std::log1p(std::exp(-std::fabs(t1 - t2)));
        rep.log_W += std::min(a1, a2);
        rep.approximations.push_back(ap);
    }
    rep.W = std::exp(rep.log_W);

    SumResult S = double_sum(poly, P);
    rep.S_abs = std::abs(S.value);
    const double k2 = 2.0 * k * k;
    rep.lhs_log = rep.S_abs > 0 ? k2 * std::log(rep.S_abs) : -INFINITY;

    rep.N = count_vinogradov(k, d, P, cfg);
    const double log3Q = std::log(3.0) + log_of(rep.Q);
    rep.rhs_log = 0.5 * d * std::log(64.0 * k * k * log3Q) + rep.log_W + 2.0 * k * (2.0 * k - 1.0) * logP + log_of(rep.N);
    rep.lhs = std::exp(rep.lhs_log);
    rep.rhs = std::exp(rep.rhs_log);
    rep.holds = rep.lhs_log <= rep.rhs_log + std::log1p(1e-9);
    return rep;
}

std::vector<KorobovInstance> korobov_campaign(u64 seed, int count, int max_d, u64 max_den, u64 max_P, int max_k) {
    std::mt19937_64 rng(seed);
    auto pick = [&](u64 lo, u64 hi) { return lo + rng() % (hi - lo + 1); };
    std::vector<KorobovInstance> out;
    for (int i = 0; i < count; ++i) {
        KorobovInstance inst;
        int d = static_cast<int>(pick(2, static_cast<u64>(max_d)));
        for (int r = 1; r <= d; ++r) {
            u64 b = pick(1, max_den);
            u64 a = pick(0, b - 1);
            Rational c(from_u64(a), from_u64(b));
            c.canonicalize();
            inst.coefficients.push_back(c);
        }
        // keep the top coefficient nonzero so the degree is d
        if (inst.coefficients.back() == 0) {
            u64 b = pick(2, std::max<u64>(2, max_den));
            inst.coefficients.back() = Rational(1, static_cast<long>(b));
        }
        inst.P = pick(1, max_P);
        inst.k = static_cast<int>(pick(1, static_cast<u64>(max_k)));
        out.push_back(std::move(inst));
    }
    return out;
}

double ford_bound_log(int d, u64 P, long k) {
    if (d < 1) throw std::invalid_argument("ford_bound: d must be >= 1");
    if (P < 1) throw std::invalid_argument("ford_bound: P must be >= 1");
    const double dd = d;
    return 3.0 * dd * dd * dd * std::log(dd) + (2.0 * static_cast<double>(k) - 0.499 * dd * dd) * std::log(static_cast<double>(P));
}

FordSearch ford_k_search(int d, u64 P) {
    FordSearch out;
    out.k_min = 2L * d * d;
    out.k_max = 4L * d * d;
    out.guarantee_applies = d >= 129;
    out.k = out.k_min;
    out.log_bound = ford_bound_log(d, P, out.k_min);
    for (long k = out.k_min + 1; k <= out.k_max; ++k) {
        double v = ford_bound_log(d, P, k);
        if (v < out.log_bound) {
            out.log_bound = v;
            out.k = k;
        }
    }
    return out;
}

}  // namespace chisum
