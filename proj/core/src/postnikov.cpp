#include "chisum/postnikov.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

namespace chisum {

std::vector<Rational> fd_coefficients(int d) {
    if (d < 1) throw std::invalid_argument("fd_coefficients: d must be >= 1");
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(d));
    for (int r = 1; r <= d; ++r) {
        Rational c(r % 2 == 1 ? 1 : -1, r);
        c.canonicalize();
        out.push_back(c);
    }
    return out;
}

int minimal_postnikov_degree(const FactoredModulus& q) {
    if (q.value() < 2) throw std::invalid_argument("minimal_postnikov_degree: q must be >= 2");
    return 2 * q.gamma_max();
}

BigInt coprime_lcm(const FactoredModulus& q, int d) {
    BigInt l(1);
    for (int r = 1; r <= d; ++r)
        if (gcd(BigInt(r), q.value()) == 1) l = lcm(l, BigInt(r));
    return l;
}

namespace {

struct IdentitySetup {
    u64 q = 0;
    u64 step = 0;  // tau * core
    u64 points = 0;
    BigInt lcm;
    std::vector<u64> c;  // c[r-1] = (-1)^{r-1} (L / r') ((tau core)^r / r_q) mod q
};

IdentitySetup make_setup(const DirichletCharacter& chi, int d, u64 max_points) {
    const FactoredModulus& fq = chi.modulus();
    if (fq.value() < 2) throw std::invalid_argument("postnikov: q must be >= 2");
    if (d < 1) throw std::invalid_argument("postnikov: d must be >= 1");
    BigInt qq = fq.value() * fq.value();
    if (pow(fq.core(), static_cast<unsigned long>(d)) % qq != 0)
        throw std::invalid_argument("postnikov: q^2 does not divide core^d");
    if (fq.value() >= BigInt(1) << 62) throw std::invalid_argument("postnikov: q exceeds 2^62");

    IdentitySetup st;
    st.q = fq.to_u64();
    BigInt step = fq.core() * fq.tau();
    st.step = to_u64(step);
    st.points = st.q / st.step;
    if (st.points > max_points) throw std::invalid_argument("postnikov: exhaustive check exceeds the point budget");
    st.lcm = coprime_lcm(fq, d);

    for (int r = 1; r <= d; ++r) {
        BigInt rq(1);
        BigInt rest(r);
        for (const auto& f : fq.factors()) {
            BigInt p = from_u64(f.p);
            while (rest % p == 0) {
                rest /= p;
                rq *= p;
            }
        }
        BigInt term = (st.lcm / rest) * (pow(step, static_cast<unsigned long>(r)) / rq);
        if (r % 2 == 0) term = -term;
        st.c.push_back(to_u64(mod(term, fq.value())));
    }
    return st;
}

// B(x) = sum c_r x^r mod q by Horner.
u64 eval_b(const IdentitySetup& st, u64 x) {
    u64 acc = 0;
    x %= st.q;
    for (std::size_t i = st.c.size(); i-- > 0;) {
        acc = static_cast<u64>((static_cast<u128>(acc) + st.c[i]) % st.q);
        acc = mulmod(acc, x, st.q);
    }
    return acc;
}

// chi(1 + step x) as a numerator over q; nullopt if that angle has denominator not dividing q.
using Lhs = std::function<std::optional<u64>(u64)>;

Lhs make_lhs(const DirichletCharacter& chi, const IdentitySetup& st) {
    if (st.q <= ModulusTables::kLimit) {
        auto table = std::make_shared<CharacterTable>(chi);
        return [table, st](u64 x) -> std::optional<u64> {
            u64 n = static_cast<u64>((static_cast<u128>(st.step) * x + 1) % st.q);
            i64 j = table->numerator_reduced(n);
            if (j < 0) return std::nullopt;
            u128 num = static_cast<u128>(j) * st.q;
            if (num % table->order() != 0) return std::nullopt;
            return static_cast<u64>(num / table->order());
        };
    }
    return [&chi, st](u64 x) -> std::optional<u64> {
        BigInt n = from_u64(st.step) * from_u64(x) + 1;
        CharValue v = evaluate(chi, n);
        if (!v) return std::nullopt;
        BigInt num = v->numerator() * from_u64(st.q);
        if (num % v->denominator() != 0) return std::nullopt;
        return to_u64(BigInt(num / v->denominator()));
    };
}

bool check_candidate(const IdentitySetup& st, const Lhs& lhs, u64 mr) {
    for (u64 x = 0; x < st.points; ++x) {
        auto a = lhs(x);
        if (!a) return false;
        if (mulmod(mr, eval_b(st, x), st.q) != *a) return false;
    }
    return true;
}

}  // namespace

PostnikovResult find_postnikov(const DirichletCharacter& chi, int d, u64 max_points) {
    IdentitySetup st = make_setup(chi, d, max_points);
    Lhs lhs = make_lhs(chi, st);

    auto a1 = lhs(1);
    if (!a1) throw std::runtime_error("postnikov: character value at 1 + tau core is not a q-th root of unity");
    u64 b1 = eval_b(st, 1);
    u64 g = gcd(b1, st.q);
    if (*a1 % g != 0) throw std::runtime_error("postnikov: no m satisfies the identity at x = 1");
    u64 period = st.q / g;
    u64 m0 = 0;
    if (period > 1) m0 = mulmod((*a1 / g) % period, invmod((b1 / g) % period, period), period);
    if (m0 == 0) m0 = period;

    for (u64 mr = m0; mr < st.q; mr += period) {
        if (gcd(mr, st.q) != 1) continue;
        if (!check_candidate(st, lhs, mr)) continue;
        PostnikovResult out;
        out.m_reduced = from_u64(mr);
        out.coprime_lcm = st.lcm;
        out.m = st.lcm * out.m_reduced;
        out.d = d;
        out.points_checked = st.points;
        return out;
    }
    throw std::runtime_error("postnikov: no valid m exists (is the character primitive?)");
}

BigInt find_postnikov_m(const DirichletCharacter& chi, int d) { return find_postnikov(chi, d).m; }

bool verify_postnikov(const DirichletCharacter& chi, int d, const BigInt& m, u64 max_points) {
    const FactoredModulus& fq = chi.modulus();
    BigInt step = fq.core() * fq.tau();
    BigInt points = fq.value() / step;
    if (points > BigInt(static_cast<unsigned long>(max_points)))
        throw std::invalid_argument("verify_postnikov: exhaustive check exceeds the point budget");
    if (gcd(m, fq.value()) != 1) return false;
    for (int r = 1; r <= d; ++r)
        if (gcd(BigInt(r), fq.value()) == 1 && m % r != 0) return false;
    std::vector<Rational> coef = fd_coefficients(d);
    for (BigInt x = 0; x < points; ++x) {
        CharValue lhs = evaluate(chi, BigInt(step * x + 1));
        if (!lhs) return false;
        BigInt y = step * x;
        Rational f(0);
        BigInt yr(1);
        for (int r = 1; r <= d; ++r) {
            yr *= y;
            f += coef[static_cast<std::size_t>(r - 1)] * Rational(yr);
        }
        Rational rhs = f * Rational(m) / Rational(fq.value());
        if (!(RationalAngle(rhs) == *lhs)) return false;
    }
    return true;
}

int script_L(int gamma) {
    if (gamma < 1) throw std::invalid_argument("script_L: gamma must be >= 1");
    return static_cast<int>(std::floor(1.5 * std::log(2.0 * gamma)));
}

int TruncatedLogPolynomial::integer_tail_start() const {
    int r0 = degree + 1;
    for (int r = degree; r >= 1; --r) {
        if (coefficient(r).get_den() != 1) break;
        r0 = r;
    }
    return r0;
}

TruncatedLogPolynomial shifted_poly(const DirichletCharacter& chi, const BigInt& n, int s, int d) {
    const FactoredModulus& fq = chi.modulus();
    if (s < 2) throw std::invalid_argument("shifted_poly: s must be >= 2");
    if (d < 1) throw std::invalid_argument("shifted_poly: d must be >= 1");
    if (gcd(n, fq.value()) != 1) throw std::invalid_argument("shifted_poly: gcd(n, q) must be 1");
    int dm = std::max(d, minimal_postnikov_degree(fq));

    TruncatedLogPolynomial out;
    out.degree = d;
    out.s = s;
    out.n = n;
    out.m = find_postnikov_m(chi, dm);
    out.n_bar = invmod(mod(n, fq.value()), fq.value());
    BigInt shift = pow(fq.core(), static_cast<unsigned long>(s));
    BigInt shift_r(1), nbar_r(1);
    for (int r = 1; r <= d; ++r) {
        shift_r *= shift;
        nbar_r *= out.n_bar;
        BigInt num = shift_r * out.m * nbar_r;
        if (r % 2 == 0) num = -num;
        Rational a(num, fq.value() * r);
        a.canonicalize();
        out.coefficients.push_back(a);
    }
    return out;
}

int predicted_denominator_valuation(const FactoredModulus& q, u64 p, int r, int s) {
    int vq = 0;
    for (const auto& f : q.factors())
        if (f.p == p) vq = f.exponent;
    return std::max(0, vq - r * s + valuation(static_cast<i64>(r), p));
}

BoundParameters bound_parameters(const FactoredModulus& q, const BigInt& N, const BoundConfig& cfg) {
    if (q.value() <= 1) throw std::invalid_argument("bound_parameters: q must be > 1");
    if (N <= 1) throw std::invalid_argument("bound_parameters: N must be > 1");
    BoundParameters bp;
    bp.epsilon = cfg.epsilon;
    bp.gamma0 = cfg.gamma0;
    bp.xi0 = cfg.xi0;
    bp.gamma = q.gamma_max();
    const double log_q = q.log();
    const double log_N = log_of(N);
    const double log_core = log_of(q.core());
    bp.rho = N == q.value() ? 1.0 : log_q / log_N;
    bp.mu = log_q / (bp.gamma * log_core);
    bp.d0 = 2 * bp.gamma;
    bp.script_L = script_L(bp.gamma);

    double e = cfg.epsilon.get_d() * bp.gamma / bp.rho;
    bp.eps_gamma_over_rho = e;
    double nearest = std::round(e);
    if (std::fabs(e - nearest) <= 1e-12 * std::max(1.0, std::fabs(e))) e = nearest;
    bp.s = static_cast<long>(std::floor(e));
    if (bp.s > 0) {
        bp.d = (bp.gamma + bp.script_L) / bp.s;
    } else {
        bp.d = 0;
        bp.diagnostics.push_back("s = 0: eps*gamma/rho < 1, d is undefined");
    }

    if (!satisfies_core_condition(q, cfg.gamma0))
        bp.diagnostics.push_back("q violates the min/max valuation condition for gamma0");
    if (log_N < cfg.gamma0 * log_core - 1e-12 * std::fabs(log_N))
        bp.diagnostics.push_back("N < core^gamma0");
    if (bp.eps_gamma_over_rho < 2.0) bp.diagnostics.push_back("eps*gamma/rho < 2, so s < 2");
    if (std::log(static_cast<double>(std::max(cfg.gamma0, 1))) < 200.0)
        bp.diagnostics.push_back("gamma0 below the asymptotic regime log gamma0 >= 200");
    if (bp.rho < 1.0 - 1e-12) bp.diagnostics.push_back("rho < 1 (N > q)");
    if (bp.rho > static_cast<double>(bp.gamma) / cfg.gamma0 + 1e-12)
        bp.diagnostics.push_back("rho > gamma/gamma0");
    if (bp.s > 0 && bp.d < 200) bp.diagnostics.push_back("d < 200");
    if (bp.mu < 0.7 - 1e-12 || bp.mu > 1.0 + 1e-12) bp.diagnostics.push_back("mu outside [0.7, 1]");
    return bp;
}

double main_bound_log(double log_q, double log_N, double xi0) {
    if (log_N <= 0 || log_q <= 0) throw std::invalid_argument("main_bound: q and N must be >= 2");
    double rho = log_q / log_N;
    return log_N * (1.0 - xi0 / (rho * rho));
}

double main_bound(const BigInt& q, const BigInt& N, double xi0) {
    if (q < 2 || N < 2) throw std::invalid_argument("main_bound: q and N must be >= 2");
    return std::exp(main_bound_log(log_of(q), log_of(N), xi0));
}

double iwaniec_bound_log(double log_q, double log_N, double a, double xi0) {
    if (log_N <= 0 || log_q <= 0) throw std::invalid_argument("iwaniec_bound: q and N must be >= 2");
    double rho = log_q / log_N;
    if (!(rho > 1.0)) throw std::domain_error("iwaniec_bound: requires rho > 1");
    double lr = std::log(rho);
    return a * rho * (1.0 + lr) * (1.0 + lr) + log_N * (1.0 - xi0 / (rho * rho * lr));
}

double iwaniec_bound(const BigInt& q, const BigInt& N, double a, double xi0) {
    if (q < 2 || N < 2) throw std::invalid_argument("iwaniec_bound: q and N must be >= 2");
    return std::exp(iwaniec_bound_log(log_of(q), log_of(N), a, xi0));
}

namespace {

// Least L in [lo, hi] with f(L) >= 0, assuming a single sign change from negative to nonnegative.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
    if (f(lo) >= 0) return lo;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) >= 0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

double main_threshold_log_N(double log_q, double xi0) {
    if (!(xi0 > 0)) throw std::invalid_argument("main_threshold: xi0 must be positive");
    const double l2 = std::log(2.0);
    auto savings = [&](double L) { return L - main_bound_log(log_q, L, xi0) - l2; };
    double hi = log_q;
    while (savings(hi) < 0) hi *= 2.0;
    return bisect(savings, hi * 1e-12, hi);
}

double iwaniec_threshold_log_N(double log_q, double a, double xi0) {
    if (!(xi0 > 0)) throw std::invalid_argument("iwaniec_threshold: xi0 must be positive");
    const double l2 = std::log(2.0);
    auto savings = [&](double L) { return L - iwaniec_bound_log(log_q, L, a, xi0) - l2; };
    double hi = log_q * (1.0 - 1e-15);
    return bisect(savings, log_q * 1e-9, hi);
}

std::vector<ThresholdRow> compare_thresholds(u64 p, const std::vector<int>& gammas, double a, double xi0) {
    std::vector<ThresholdRow> out;
    for (int g : gammas) {
        ThresholdRow row;
        row.gamma = g;
        row.log_q = g * std::log(static_cast<double>(p));
        row.main_log_N = main_threshold_log_N(row.log_q, xi0);
        row.iwaniec_log_N = iwaniec_threshold_log_N(row.log_q, a, xi0);
        row.main_over_two_thirds = row.main_log_N / std::pow(row.log_q, 2.0 / 3.0);
        row.main_over_three_quarters = row.main_log_N / std::pow(row.log_q, 0.75);
        row.iwaniec_over_three_quarters = row.iwaniec_log_N / std::pow(row.log_q, 0.75);
        out.push_back(row);
    }
    return out;
}

}  // namespace chisum
