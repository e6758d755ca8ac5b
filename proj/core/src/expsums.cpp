#include "chisum/expsums.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chisum/parallel.hpp"
#include "chisum/postnikov.hpp"

namespace chisum {

namespace {

constexpr u64 kBlock = u64{1} << 16;
constexpr u64 kCyclotomicLimit = u64{1} << 20;

u64 reduce_mod(i64 n, u64 m) {
    i64 r = n % static_cast<i64>(m);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

// frac(t * n) with the product's rounding error folded back in.
double frac_mul(double t, double n) {
    double p = t * n;
    double e = std::fma(t, n, -p);
    double f = p - std::floor(p);
    f += e;
    return f - std::floor(f);
}

double frac(double v) { return v - std::floor(v); }

}  // namespace

void CompensatedSum::step(double& s, double& c, double v) {
    double t = s + v;
    if (std::fabs(s) >= std::fabs(v))
        c += (s - t) + v;
    else
        c += (v - t) + s;
    s = t;
}

void CompensatedSum::add(Complex v) {
    step(re_, cre_, v.real());
    step(im_, cim_, v.imag());
}

void CompensatedSum::add(const CompensatedSum& other) {
    step(re_, cre_, other.re_);
    step(im_, cim_, other.im_);
    cre_ += other.cre_;
    cim_ += other.cim_;
}

// ---------------------------------------------------------------------------

RealPolynomial RealPolynomial::from_doubles(std::vector<double> coefficients) {
    RealPolynomial p;
    p.coeffs_ = std::move(coefficients);
    p.trim();
    return p;
}

RealPolynomial RealPolynomial::from_rationals(std::vector<Rational> coefficients) {
    RealPolynomial p;
    for (auto& c : coefficients) c.canonicalize();
    while (!coefficients.empty() && coefficients.back() == 0) coefficients.pop_back();
    p.exact_ = coefficients;
    for (const auto& c : coefficients) p.coeffs_.push_back(c.get_d());
    p.prepare();
    return p;
}

void RealPolynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

void RealPolynomial::prepare() {
    BigInt D(1);
    for (const auto& c : *exact_) D = lcm(D, BigInt(c.get_den()));
    if (D >= BigInt(1) << 62) return;
    denom_ = to_u64(D);
    for (const auto& c : *exact_) {
        BigInt a = c.get_num() * (D / c.get_den());
        numer_.push_back(to_u64(mod(a, D)));
    }
}

double RealPolynomial::operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

double RealPolynomial::phase(i64 n) const {
    if (coeffs_.empty()) return 0.0;
    if (exact_) {
        if (denom_ == 0) return exact_phase(from_i64(n)).get_d();
        u64 m = reduce_mod(n, denom_);
        u64 acc = 0;
        for (std::size_t i = numer_.size(); i-- > 0;)
            acc = static_cast<u64>((static_cast<u128>(acc) * m + numer_[i]) % denom_);
        return static_cast<double>(acc) / static_cast<double>(denom_);
    }
    const double x = static_cast<double>(n);
    double total = frac(coeffs_[0]);
    for (std::size_t r = 1; r < coeffs_.size(); ++r) {
        double t = frac(coeffs_[r]);
        for (std::size_t k = 0; k < r; ++k) t = frac_mul(t, x);
        total += t;
    }
    return frac(total);
}

Rational RealPolynomial::exact_phase(const BigInt& n) const {
    if (!exact_) throw std::logic_error("exact_phase: polynomial has inexact coefficients");
    Rational acc(0);
    for (std::size_t i = exact_->size(); i-- > 0;) acc = acc * Rational(n) + (*exact_)[i];
    return frac(acc);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<i64> cyclotomic_poly(u64 k) {
    std::vector<PrimePower> f = factor(k);
    std::vector<i64> poly{1};
    std::vector<u64> divide_by;
    // Phi_k = prod_{d | k, d squarefree} (x^{k/d} - 1)^{mu(d)}
    std::size_t nf = f.size();
    for (u64 mask = 0; mask < (u64{1} << nf); ++mask) {
        u64 d = 1;
        int bits = 0;
        for (std::size_t i = 0; i < nf; ++i)
            if (mask >> i & 1U) {
                d *= f[i].p;
                ++bits;
            }
        u64 e = k / d;
        if (bits % 2 == 0) {
            std::vector<i64> next(poly.size() + e, 0);
            for (std::size_t i = 0; i < poly.size(); ++i) {
                next[i + e] += poly[i];
                next[i] -= poly[i];
            }
            poly = std::move(next);
        } else {
            divide_by.push_back(e);
        }
    }
    for (u64 e : divide_by) {
        // exact division by x^e - 1: q_i = q_{i-e} - p_i read from the low end
        std::size_t n = poly.size() - e;
        std::vector<i64> quo(n, 0);
        for (std::size_t i = 0; i < n; ++i) quo[i] = (i >= e ? quo[i - e] : 0) - poly[i];
        poly = std::move(quo);
    }
    return poly;
}

}  // namespace

u64 AngleHistogram::total() const {
    u64 t = 0;
    for (u64 c : counts) t += c;
    return t;
}

std::optional<std::vector<i64>> AngleHistogram::cyclotomic_coordinates() const {
    if (order > kCyclotomicLimit) return std::nullopt;
    std::vector<i64> phi = cyclotomic_poly(order);
    const std::size_t deg = phi.size() - 1;
    std::vector<std::pair<std::size_t, i64>> terms;
    for (std::size_t j = 0; j < deg; ++j)
        if (phi[j] != 0) terms.emplace_back(j, phi[j]);
    std::vector<i128> r(counts.begin(), counts.end());
    for (std::size_t i = r.size(); i-- > deg;) {
        i128 c = r[i];
        if (c == 0) continue;
        r[i] = 0;
        for (const auto& [j, a] : terms) r[i - deg + j] -= c * a;
    }
    std::vector<i64> out(deg);
    for (std::size_t i = 0; i < deg; ++i) out[i] = static_cast<i64>(r[i]);
    return out;
}

std::optional<bool> AngleHistogram::exact_zero() const {
    auto c = cyclotomic_coordinates();
    if (!c) return std::nullopt;
    for (i64 v : *c)
        if (v != 0) return false;
    return true;
}

// ---------------------------------------------------------------------------

namespace {

SumResult finish_exact(const CharacterTable& table, AngleHistogram h) {
    SumResult out;
    out.term_count = 0;
    CompensatedSum acc;
    if (auto coords = h.cyclotomic_coordinates()) {
        bool zero = true;
        for (std::size_t i = 0; i < coords->size(); ++i) {
            if ((*coords)[i] == 0) continue;
            zero = false;
            acc.add(static_cast<double>((*coords)[i]) * table.root(i));
        }
        out.exact_zero = zero;
    } else {
        for (u64 j = 0; j < h.order; ++j)
            if (h.counts[j]) acc.add(static_cast<double>(h.counts[j]) * table.root(j));
    }
    out.value = acc.value();
    out.mode = "exact";
    out.exact_terms = std::move(h);
    return out;
}

template <class Term>
SumResult blocked_sum(i64 M, u64 N, Term term) {
    const std::size_t blocks = static_cast<std::size_t>((N + kBlock - 1) / kBlock);
    auto parts = map_blocks<CompensatedSum>(blocks, [&](std::size_t b) {
        CompensatedSum s;
        u64 lo = b * kBlock;
        u64 hi = std::min(N, lo + kBlock);
        for (u64 i = lo; i < hi; ++i) s.add(term(M + 1 + static_cast<i64>(i)));
        return s;
    });
    CompensatedSum total;
    for (const auto& p : parts) total.add(p);
    SumResult out;
    out.value = total.value();
    out.term_count = N;
    out.mode = "float";
    return out;
}

}  // namespace

SumResult char_sum(const CharacterTable& table, i64 M, u64 N) {
    if (N == 0) throw std::invalid_argument("char_sum: N must be >= 1");
    if (N <= kExactSumLimit) {
        AngleHistogram h;
        h.order = table.order();
        h.counts.assign(h.order, 0);
        u64 r = table.reduce(M + 1);
        const u64 q = table.modulus();
        for (u64 i = 0; i < N; ++i) {
            i64 j = table.numerator_reduced(r);
            if (j >= 0) ++h.counts[static_cast<std::size_t>(j)];
            if (++r == q) r = 0;
        }
        SumResult out = finish_exact(table, std::move(h));
        out.term_count = N;
        return out;
    }
    return blocked_sum(M, N, [&](i64 n) { return table.value(n); });
}

SumResult char_sum(const DirichletCharacter& chi, i64 M, u64 N) {
    if (chi.modulus().value() <= BigInt(static_cast<unsigned long>(ModulusTables::kLimit)))
        return char_sum(CharacterTable(chi), M, N);
    if (N == 0) throw std::invalid_argument("char_sum: N must be >= 1");
    return blocked_sum(M, N, [&](i64 n) {
        CharValue v = evaluate(chi, from_i64(n));
        return v ? v->unit() : Complex(0.0, 0.0);
    });
}

SumResult twisted_sum(const CharacterTable& table, i64 M, u64 N, const RealPolynomial& G) {
    if (G.is_zero()) return char_sum(table, M, N);
    if (N == 0) throw std::invalid_argument("twisted_sum: N must be >= 1");
    const double k = static_cast<double>(table.order());
    return blocked_sum(M, N, [&](i64 n) {
        i64 j = table.numerator(n);
        if (j < 0) return Complex(0.0, 0.0);
        return unit_phase(static_cast<double>(j) / k + G.phase(n));
    });
}

SumResult twisted_sum(const DirichletCharacter& chi, i64 M, u64 N, const RealPolynomial& G) {
    return twisted_sum(CharacterTable(chi), M, N, G);
}

SumResult dirichlet_poly(const CharacterTable& table, i64 M, u64 N, double t) {
    if (M + 1 <= 0) throw std::invalid_argument("dirichlet_poly: requires M + 1 >= 1");
    if (t == 0.0) return char_sum(table, M, N);
    if (N == 0) throw std::invalid_argument("dirichlet_poly: N must be >= 1");
    const double k = static_cast<double>(table.order());
    const double c = t / (2.0 * std::numbers::pi);
    return blocked_sum(M, N, [&](i64 n) {
        i64 j = table.numerator(n);
        if (j < 0) return Complex(0.0, 0.0);
        return unit_phase(static_cast<double>(j) / k + c * std::log(static_cast<double>(n)));
    });
}

SumResult dirichlet_poly(const DirichletCharacter& chi, i64 M, u64 N, double t) {
    return dirichlet_poly(CharacterTable(chi), M, N, t);
}

RealPolynomial taylor_approx_poly(int nu) {
    if (nu < 2) throw std::invalid_argument("taylor_approx_poly: nu must be >= 2");
    std::vector<double> c{0.0};
    for (const auto& a : fd_coefficients(nu - 1)) c.push_back(a.get_d() / (2.0 * std::numbers::pi));
    return RealPolynomial::from_doubles(std::move(c));
}

double taylor_error_bound(int nu, double t, double x) { return 4.0 * std::fabs(t) * std::pow(std::fabs(x), nu); }

SumResult dirichlet_poly_taylor(const CharacterTable& table, i64 M, u64 N, double t, int nu, u64 block) {
    if (M + 1 <= 0) throw std::invalid_argument("dirichlet_poly_taylor: requires M + 1 >= 1");
    if (N == 0) throw std::invalid_argument("dirichlet_poly_taylor: N must be >= 1");
    if (block == 0) throw std::invalid_argument("dirichlet_poly_taylor: block must be >= 1");
    const RealPolynomial G = taylor_approx_poly(nu);
    const double k = static_cast<double>(table.order());
    const double c = t / (2.0 * std::numbers::pi);
    CompensatedSum acc;
    i64 n = M + 1;
    const i64 end = M + static_cast<i64>(N);
    while (n <= end) {
        i64 len = std::min<i64>(static_cast<i64>(block), std::max<i64>(1, n / 8));
        len = std::min(len, end - n + 1);
        i64 n0 = n + len / 2;
        double base = c * std::log(static_cast<double>(n0));
        for (i64 m = n; m < n + len; ++m) {
            i64 j = table.numerator(m);
            if (j < 0) continue;
            double x = static_cast<double>(m - n0) / static_cast<double>(n0);
            acc.add(unit_phase(static_cast<double>(j) / k + base + t * G(x)));
        }
        n += len;
    }
    SumResult out;
    out.value = acc.value();
    out.term_count = N;
    return out;
}

SumResult double_sum(const RealPolynomial& g, u64 P) {
    if (P == 0) throw std::invalid_argument("double_sum: P must be >= 1");
    constexpr u64 kRows = 64;
    const std::size_t blocks = static_cast<std::size_t>((P + kRows - 1) / kRows);
    auto parts = map_blocks<CompensatedSum>(blocks, [&](std::size_t b) {
        CompensatedSum s;
        u64 lo = b * kRows + 1;
        u64 hi = std::min(P, lo + kRows - 1);
        for (u64 y = lo; y <= hi; ++y)
            for (u64 z = 1; z <= P; ++z) s.add(unit_phase(g.phase(static_cast<i64>(y * z))));
        return s;
    });
    CompensatedSum total;
    for (const auto& p : parts) total.add(p);
    SumResult out;
    out.value = total.value();
    out.term_count = P * P;
    return out;
}

DecomposeResult decompose(const DirichletCharacter& chi, i64 M, u64 N, const RealPolynomial& G, int s,
                          const DecomposeConfig& cfg) {
    if (s < 2) throw std::invalid_argument("decompose: s must be >= 2");
    if (N == 0) throw std::invalid_argument("decompose: N must be >= 1");
    const FactoredModulus& fq = chi.modulus();
    BigInt Pb = pow(fq.core(), static_cast<unsigned long>(s));
    if (static_cast<double>(Pb.get_d()) * Pb.get_d() > cfg.work_budget)
        throw std::invalid_argument("decompose: core^{2s} exceeds the work budget");
    CharacterTable table(chi);
    const u64 q = table.modulus();
    const u64 P = to_u64(Pb);
    const double k = static_cast<double>(table.order());

    std::vector<i64> ns;
    for (u64 i = 0; i < N; ++i) {
        i64 n = M + 1 + static_cast<i64>(i);
        if (gcd(table.reduce(n), q) == 1) ns.push_back(n);
    }
    if (static_cast<double>(ns.size()) * static_cast<double>(P) * static_cast<double>(P) > cfg.work_budget)
        throw std::invalid_argument("decompose: work exceeds the budget");

    const u64 Pq = P % q;
    constexpr std::size_t kPerBlock = 16;
    const std::size_t blocks = (ns.size() + kPerBlock - 1) / kPerBlock;
    auto parts = map_blocks<CompensatedSum>(blocks, [&](std::size_t b) {
        CompensatedSum acc;
        std::size_t lo = b * kPerBlock;
        std::size_t hi = std::min(ns.size(), lo + kPerBlock);
        for (std::size_t idx = lo; idx < hi; ++idx) {
            const i64 n = ns[idx];
            const u64 nr = table.reduce(n);
            const double an = static_cast<double>(table.numerator_reduced(nr)) / k;
            const u64 step = mulmod(Pq, invmod(nr, q), q);  // core^s nbar mod q
            for (u64 y = 1; y <= P; ++y)
                for (u64 z = 1; z <= P; ++z) {
                    const u64 yz = y * z;
                    const u64 r = static_cast<u64>((static_cast<u128>(step) * (yz % q) + 1) % q);
                    const double inner = static_cast<double>(table.numerator_reduced(r)) / k;
                    double phase = an + inner;
                    if (!G.is_zero()) phase += G.phase(n + static_cast<i64>(P * yz));
                    acc.add(unit_phase(phase));
                }
        }
        return acc;
    });
    CompensatedSum V;
    for (const auto& p : parts) V.add(p);

    DecomposeResult out;
    out.P = P;
    out.coprime_count = ns.size();
    out.V = V.value();
    const double P2 = static_cast<double>(P) * static_cast<double>(P);
    out.reconstruction = out.V / P2;
    out.S = twisted_sum(table, M, N, G).value;
    out.residual = std::abs(out.S - out.reconstruction);
    out.residual_constant = cfg.residual_constant;
    out.bound = cfg.residual_constant * std::pow(static_cast<double>(P), 3.0);
    out.holds = out.residual <= out.bound;
    return out;
}

}  // namespace chisum
