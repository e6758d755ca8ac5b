#include "chisum/lfunc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chisum/parallel.hpp"

namespace chisum {

namespace {

constexpr int kBernoulliTerms = 12;

// B_{2j} / (2j)! for j = 1..12.
const std::array<double, kBernoulliTerms>& bernoulli_factors() {
    static const std::array<double, kBernoulliTerms> table = [] {
        const double num[kBernoulliTerms] = {1.0,        -1.0,       1.0,          -1.0,       5.0,         -691.0,
                                              7.0,        -3617.0,    43867.0,      -174611.0,  854513.0,    -236364091.0};
        const double den[kBernoulliTerms] = {6.0,   30.0,  42.0,  30.0,  66.0,   2730.0,
                                              6.0,   510.0, 798.0, 330.0, 138.0,  2730.0};
        std::array<double, kBernoulliTerms> out{};
        double fact = 1.0;
        for (int j = 1; j <= kBernoulliTerms; ++j) {
            fact *= (2.0 * j - 1.0) * (2.0 * j);
            out[j - 1] = num[j - 1] / den[j - 1] / fact;
        }
        return out;
    }();
    return table;
}

struct EmTail {
    Complex value;
    Complex derivative;
};

// x^{-s}/2 + sum_j B_{2j}/(2j)! s(s+1)...(s+2j-2) x^{-s-2j+1}, with its s-derivative.
EmTail em_tail(Complex s, double x, bool want_derivative) {
    const auto& c = bernoulli_factors();
    const double lx = std::log(x);
    const Complex xs = std::exp(-s * lx);
    EmTail out{0.5 * xs, want_derivative ? -0.5 * lx * xs : Complex(0.0)};
    Complex P = s, dP = 1.0;
    double xpow = 1.0 / x;  // x^{1-2j}
    const double inv_x2 = 1.0 / (x * x);
    for (int j = 1; j <= kBernoulliTerms; ++j) {
        if (j > 1) {
            Complex f1 = s + (2.0 * j - 3.0), f2 = s + (2.0 * j - 2.0);
            dP = dP * f1 * f2 + P * (f1 + f2);
            P = P * f1 * f2;
            xpow *= inv_x2;
        }
        Complex base = c[j - 1] * xpow * xs;
        out.value += base * P;
        if (want_derivative) out.derivative += base * (dP - lx * P);
    }
    return out;
}

// E(w) = expm1(w) / w and E'(w).
void expm1_ratio(Complex w, Complex& E, Complex& dE) {
    if (std::abs(w) < 0.5) {
        // E = sum_{n>=0} w^n / (n+1)!,  E' = sum_{n>=1} n w^{n-1} / (n+1)!
        E = 0.0;
        dE = 0.0;
        Complex wn = 1.0;       // w^n
        Complex wn_prev = 0.0;  // w^{n-1}
        double fact = 1.0;      // (n+1)!
        for (int n = 0; n <= 30; ++n) {
            fact *= (n + 1);
            E += wn / fact;
            if (n >= 1) dE += static_cast<double>(n) * wn_prev / fact;
            wn_prev = wn;
            wn *= w;
        }
        return;
    }
    Complex ew = std::exp(w);
    E = (ew - 1.0) / w;
    dE = (w * ew - ew + 1.0) / (w * w);
}

void check_domain(Complex s) {
    if (!(s.real() > 0.0)) throw std::domain_error("L-function evaluation requires Re s > 0");
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw std::domain_error("s must be finite");
}

int direct_terms(Complex s) { return 20 + static_cast<int>(std::ceil(std::abs(s))); }

}  // namespace

HurwitzValue hurwitz_regularized(Complex s, double a) {
    check_domain(s);
    if (!(a > 0.0 && a <= 1.0)) throw std::domain_error("hurwitz: a must lie in (0, 1]");
    const int N0 = direct_terms(s);
    Complex sum = 0.0, dsum = 0.0;
    for (int n = N0 - 1; n >= 0; --n) {
        const double la = std::log(n + a);
        const Complex v = std::exp(-s * la);
        sum += v;
        dsum -= la * v;
    }
    const double x = N0 + a;
    const double u = std::log(x);
    Complex E, dE;
    expm1_ratio((1.0 - s) * u, E, dE);
    EmTail tail = em_tail(s, x, true);
    HurwitzValue out;
    out.value = sum - u * E + tail.value;
    out.derivative = dsum + u * u * dE + tail.derivative;
    return out;
}

Complex hurwitz_zeta(Complex s, double a) {
    if (s == Complex(1.0, 0.0)) throw std::domain_error("hurwitz_zeta: pole at s = 1");
    return hurwitz_regularized(s, a).value + 1.0 / (s - 1.0);
}

Complex zeta_tail(Complex w, double K) {
    if (w == Complex(1.0, 0.0)) throw std::domain_error("zeta_tail: pole at w = 1");
    const Complex head = std::exp((1.0 - w) * std::log(K)) / (w - 1.0);
    return head + em_tail(w, K, false).value;
}

namespace {

struct UnitValues {
    u64 q = 1;
    std::vector<u64> units;
    std::vector<Complex> chi;
};

UnitValues unit_values(const DirichletCharacter& chi) {
    UnitValues out;
    CharacterTable table(chi);
    out.q = table.modulus();
    for (u64 a = 1; a <= out.q; ++a) {
        u64 r = a % out.q;
        if (table.numerator_reduced(r) < 0) continue;
        out.units.push_back(a);
        out.chi.push_back(table.value_reduced(r));
    }
    return out;
}

}  // namespace

Complex l_value(const DirichletCharacter& chi, Complex s) {
    check_domain(s);
    if (chi.is_principal() && s == Complex(1.0, 0.0)) throw std::domain_error("l_value: principal character has a pole at s = 1");
    UnitValues uv = unit_values(chi);
    const double q = static_cast<double>(uv.q);
    Complex acc = 0.0, chisum = 0.0;
    for (std::size_t i = 0; i < uv.units.size(); ++i) {
        acc += uv.chi[i] * hurwitz_regularized(s, static_cast<double>(uv.units[i]) / q).value;
        chisum += uv.chi[i];
    }
    if (chi.is_principal()) acc += chisum / (s - 1.0);
    return std::exp(-s * std::log(q)) * acc;
}

Complex l_derivative(const DirichletCharacter& chi, Complex s) {
    check_domain(s);
    if (chi.is_principal() && s == Complex(1.0, 0.0)) throw std::domain_error("l_derivative: pole at s = 1");
    UnitValues uv = unit_values(chi);
    const double q = static_cast<double>(uv.q);
    const double lq = std::log(q);
    Complex acc = 0.0, dacc = 0.0, chisum = 0.0;
    for (std::size_t i = 0; i < uv.units.size(); ++i) {
        HurwitzValue h = hurwitz_regularized(s, static_cast<double>(uv.units[i]) / q);
        acc += uv.chi[i] * h.value;
        dacc += uv.chi[i] * h.derivative;
        chisum += uv.chi[i];
    }
    if (chi.is_principal()) {
        acc += chisum / (s - 1.0);
        dacc -= chisum / ((s - 1.0) * (s - 1.0));
    }
    const Complex qs = std::exp(-s * lq);
    return qs * (dacc - lq * acc);
}

Complex l_value_series(const DirichletCharacter& chi, Complex s) {
    check_domain(s);
    if (chi.is_principal()) throw std::invalid_argument("l_value_series: nonprincipal characters only");
    UnitValues uv = unit_values(chi);
    const u64 q = uv.q;
    const u64 K0 = 64 + static_cast<u64>(std::ceil(4.0 * std::abs(s)));

    // direct part, grouped by residue class
    Complex direct = 0.0;
    for (std::size_t i = 0; i < uv.units.size(); ++i) {
        Complex cls = 0.0;
        for (u64 m = K0; m-- > 0;) {
            const double n = static_cast<double>(uv.units[i] + m * q);
            if (uv.units[i] + m * q > K0 * q) continue;
            cls += std::exp(-s * std::log(n));
        }
        direct += uv.chi[i] * cls;
    }

    // tail: sum_j binom(-s, j) q^{-s} C_j zeta_tail(s + j, K0), C_j = sum_a chi(a) (a/q)^j
    const double qd = static_cast<double>(q);
    const Complex qs = std::exp(-s * std::log(qd));
    std::vector<double> ratio(uv.units.size());
    std::vector<double> power(uv.units.size(), 1.0);
    for (std::size_t i = 0; i < uv.units.size(); ++i) ratio[i] = static_cast<double>(uv.units[i]) / qd;
    Complex binom = 1.0;
    Complex tail = 0.0;
    int small = 0;
    for (int j = 1; j <= 400; ++j) {
        binom *= (-s - static_cast<double>(j - 1)) / static_cast<double>(j);
        Complex Cj = 0.0;
        for (std::size_t i = 0; i < uv.units.size(); ++i) {
            power[i] *= ratio[i];
            Cj += uv.chi[i] * power[i];
        }
        const Complex term = binom * qs * Cj * zeta_tail(s + static_cast<double>(j), static_cast<double>(K0));
        tail += term;
        if (std::abs(term) <= 1e-18 * (std::abs(direct + tail) + 1e-300)) {
            if (++small >= 3) break;
        } else {
            small = 0;
        }
    }
    return direct + tail;
}

// ---------------------------------------------------------------------------

LBatch::LBatch(const FactoredModulus& q, const std::vector<DirichletCharacter>& chars) {
    ModulusTables tables(q);
    q_ = tables.q();
    log_q_ = std::log(static_cast<double>(q_));
    for (u64 a = 1; a <= q_; ++a)
        if (gcd(a, q_) == 1) units_.push_back(a);
    for (const auto& chi : chars) {
        if (chi.is_principal()) throw std::invalid_argument("LBatch: nonprincipal characters only");
        CharacterTable t(chi, tables);
        std::vector<Complex> v;
        v.reserve(units_.size());
        for (u64 a : units_) v.push_back(t.value_reduced(a % q_));
        values_.push_back(std::move(v));
    }
}

void LBatch::eval(Complex s, std::vector<Complex>& L, std::vector<Complex>* dL) const {
    check_domain(s);
    std::vector<HurwitzValue> h(units_.size());
    const double q = static_cast<double>(q_);
    parallel_for(units_.size(), [&](std::size_t i) { h[i] = hurwitz_regularized(s, static_cast<double>(units_[i]) / q); });
    const Complex qs = std::exp(-s * log_q_);
    L.assign(values_.size(), 0.0);
    if (dL) dL->assign(values_.size(), 0.0);
    for (std::size_t c = 0; c < values_.size(); ++c) {
        Complex acc = 0.0, dacc = 0.0;
        const auto& v = values_[c];
        for (std::size_t i = 0; i < units_.size(); ++i) {
            acc += v[i] * h[i].value;
            if (dL) dacc += v[i] * h[i].derivative;
        }
        L[c] = qs * acc;
        if (dL) (*dL)[c] = qs * (dacc - log_q_ * acc);
    }
}

// ---------------------------------------------------------------------------

namespace {

// 16-point Gauss-Legendre nodes and weights on [-1, 1] (positive half).
constexpr std::array<double, 8> kGlX = {0.0950125098376374401853193, 0.2816035507792589132304605,
                                        0.4580167776572273863424194, 0.6178762444026437484466718,
                                        0.7554044083550030338951012, 0.8656312023878317438804679,
                                        0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr std::array<double, 8> kGlW = {0.1894506104550684962853967, 0.1826034150449235888667637,
                                        0.1691565193950025381893121, 0.1495959888165767320815017,
                                        0.1246289712555338720524763, 0.0951585116824927848099251,
                                        0.0622535239386478928628438, 0.0271524594117540948517806};

struct Panel {
    double ta, tb;
    int depth;
    std::vector<Complex> La, Lb;
};

bool all_finite_nonzero(const std::vector<Complex>& v) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z == Complex(0.0, 0.0)) return false;
    return true;
}

// Accumulates arg changes of every L along the segment A -> B. Returns false on failure.
bool integrate_edge(const LBatch& batch, Complex A, Complex B, const ZeroCountConfig& cfg, std::vector<double>& arg,
                    std::size_t& panels) {
    const Complex dir = B - A;
    const double len = std::abs(dir);
    const int initial = std::max(1, static_cast<int>(std::ceil(len / 0.5)));
    std::vector<Complex> Lcur, dLcur;

    std::vector<std::vector<Complex>> endpoint(static_cast<std::size_t>(initial) + 1);
    for (int i = 0; i <= initial; ++i) {
        batch.eval(A + dir * (static_cast<double>(i) / initial), endpoint[static_cast<std::size_t>(i)]);
        if (!all_finite_nonzero(endpoint[static_cast<std::size_t>(i)])) return false;
    }
    std::vector<Panel> stack;
    for (int i = initial - 1; i >= 0; --i)
        stack.push_back({static_cast<double>(i) / initial, static_cast<double>(i + 1) / initial, 0,
                         endpoint[static_cast<std::size_t>(i)], endpoint[static_cast<std::size_t>(i) + 1]});

    const std::size_t nc = batch.size();
    while (!stack.empty()) {
        Panel p = std::move(stack.back());
        stack.pop_back();
        if (++panels > cfg.max_panels) return false;
        const double mid = 0.5 * (p.ta + p.tb);
        const double half = 0.5 * (p.tb - p.ta);
        std::vector<Complex> integral(nc, 0.0);
        bool ok = true;
        for (int k = 0; k < 16 && ok; ++k) {
            const double x = k < 8 ? -kGlX[static_cast<std::size_t>(7 - k)] : kGlX[static_cast<std::size_t>(k - 8)];
            const double w = k < 8 ? kGlW[static_cast<std::size_t>(7 - k)] : kGlW[static_cast<std::size_t>(k - 8)];
            batch.eval(A + dir * (mid + half * x), Lcur, &dLcur);
            if (!all_finite_nonzero(Lcur)) {
                ok = false;
                break;
            }
            for (std::size_t c = 0; c < nc; ++c) integral[c] += w * dLcur[c] / Lcur[c];
        }
        bool accept = ok;
        std::vector<double> darg(nc, 0.0);
        if (ok) {
            for (std::size_t c = 0; c < nc && accept; ++c) {
                const Complex I = integral[c] * dir * half;
                const Complex lg = std::log(p.Lb[c] / p.La[c]);
                if (std::fabs(lg.imag()) >= 0.5 * std::numbers::pi) accept = false;
                else if (std::abs(I - lg) > 1e-6 * std::max(1.0, std::abs(lg))) accept = false;
                darg[c] = lg.imag();
            }
        }
        if (accept) {
            for (std::size_t c = 0; c < nc; ++c) arg[c] += darg[c];
            continue;
        }
        if (p.depth >= cfg.max_depth) return false;
        std::vector<Complex> Lm;
        batch.eval(A + dir * mid, Lm);
        if (!all_finite_nonzero(Lm)) return false;
        // right half pushed first so the left half is processed next
        stack.push_back({mid, p.tb, p.depth + 1, Lm, p.Lb});
        stack.push_back({p.ta, mid, p.depth + 1, p.La, std::move(Lm)});
    }
    return true;
}

std::vector<DirichletCharacter> nonprincipal(const FactoredModulus& q) {
    std::vector<DirichletCharacter> out;
    for (auto& chi : enumerate_characters(q, false))
        if (!chi.is_principal()) out.push_back(std::move(chi));
    return out;
}

}  // namespace

ZeroCountResult zero_count_rectangle(const FactoredModulus& q, double alpha, double T, const ZeroCountConfig& cfg) {
    if (!(alpha >= 0.5 && alpha < 1.0)) throw std::invalid_argument("zero_count_rectangle: requires 1/2 <= alpha < 1");
    return zero_count_characters(q, nonprincipal(q), alpha, T, cfg);
}

ZeroCountResult zero_count_characters(const FactoredModulus& q, const std::vector<DirichletCharacter>& chars, double alpha,
                                      double T, const ZeroCountConfig& cfg) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("zero_count: requires 0 < alpha < 1");
    if (!(T > 0.0)) throw std::invalid_argument("zero_count: requires T > 0");
    ZeroCountResult out;
    out.characters = chars.size();
    if (chars.empty()) {
        out.alpha_used = alpha;
        return out;
    }
    LBatch batch(q, chars);

    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        const int k = (attempt + 1) / 2;
        const double sign = attempt % 2 == 1 ? 1.0 : -1.0;
        const double a = alpha + sign * k * cfg.perturbation;
        if (!(a > 0.0 && a < 1.0)) continue;
        const Complex z[4] = {{a, -T}, {1.0, -T}, {1.0, T}, {a, T}};
        std::vector<double> arg(chars.size(), 0.0);
        std::size_t panels = 0;
        bool ok = true;
        for (int e = 0; e < 4 && ok; ++e) ok = integrate_edge(batch, z[e], z[(e + 1) % 4], cfg, arg, panels);
        if (!ok) continue;
        out.per_character.assign(chars.size(), 0);
        out.max_snap_error = 0.0;
        long total = 0;
        for (std::size_t c = 0; c < chars.size() && ok; ++c) {
            const double w = arg[c] / (2.0 * std::numbers::pi);
            const double n = std::round(w);
            const double err = std::fabs(w - n);
            out.max_snap_error = std::max(out.max_snap_error, err);
            if (err > cfg.snap_tolerance) ok = false;
            out.per_character[c] = static_cast<long>(n);
            total += static_cast<long>(n);
        }
        if (!ok) continue;
        out.count = total;
        out.alpha_used = a;
        out.perturbation = a - alpha;
        out.panels = panels;
        return out;
    }
    throw std::runtime_error("zero_count_rectangle: winding number did not stabilise after alpha perturbations");
}

GridScanResult grid_lower_bound_scan(const FactoredModulus& q, double alpha, double T, int max_depth) {
    if (!(alpha < 1.0)) throw std::invalid_argument("grid_lower_bound_scan: requires alpha < 1");
    if (!(T > 0.0)) throw std::invalid_argument("grid_lower_bound_scan: requires T > 0");
    const auto chars = nonprincipal(q);
    GridScanResult out;
    out.min_abs_L = INFINITY;
    if (chars.empty()) {
        out.certified = true;
        return out;
    }
    LBatch batch(q, chars);
    const double w0 = 1.0 - alpha;
    const int ny = std::max(1, static_cast<int>(std::ceil(2.0 * T / w0)));
    const double h0 = 2.0 * T / ny;

    struct Cell {
        double x0, y0, w, h;
        int depth;
    };
    std::vector<Cell> stack;
    for (int j = ny - 1; j >= 0; --j) stack.push_back({alpha, -T + j * h0, w0, h0, 0});
    std::vector<Complex> L, dL;
    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        ++out.cells;
        out.max_depth = std::max(out.max_depth, c.depth);
        const double r = 0.5 * std::hypot(c.w, c.h);
        const Complex pts[5] = {{c.x0 + 0.5 * c.w, c.y0 + 0.5 * c.h}, {c.x0, c.y0}, {c.x0 + c.w, c.y0},
                                {c.x0, c.y0 + c.h}, {c.x0 + c.w, c.y0 + c.h}};
        std::vector<double> centre_abs(chars.size(), 0.0), max_d(chars.size(), 0.0);
        for (int i = 0; i < 5; ++i) {
            batch.eval(pts[i], L, &dL);
            for (std::size_t k = 0; k < chars.size(); ++k) {
                const double a = std::abs(L[k]);
                out.min_abs_L = std::min(out.min_abs_L, a);
                if (i == 0) centre_abs[k] = a;
                max_d[k] = std::max(max_d[k], std::abs(dL[k]));
            }
        }
        bool cleared = true;
        for (std::size_t k = 0; k < chars.size() && cleared; ++k) cleared = centre_abs[k] > 2.0 * r * max_d[k];
        if (cleared) continue;
        if (c.depth >= max_depth) {
            ++out.uncertified;
            continue;
        }
        const double hw = 0.5 * c.w, hh = 0.5 * c.h;
        stack.push_back({c.x0 + hw, c.y0 + hh, hw, hh, c.depth + 1});
        stack.push_back({c.x0, c.y0 + hh, hw, hh, c.depth + 1});
        stack.push_back({c.x0 + hw, c.y0, hw, hh, c.depth + 1});
        stack.push_back({c.x0, c.y0, hw, hh, c.depth + 1});
    }
    out.certified = out.uncertified == 0;
    return out;
}

// ---------------------------------------------------------------------------

EllContext ell_context(const FactoredModulus& q, double t) {
    EllContext out;
    out.t = t;
    out.ell = q.log() + std::log(std::fabs(t) + 3.0);
    out.log_Z = 2.0 * out.ell;
    out.Z = std::exp(out.log_Z);
    return out;
}

const char* theorem3_term_name(int i) {
    static const char* names[3] = {"eta*log(core)", "eta^(3/2)*ell", "eta*ell^(2/3)*(log ell)^(1/3)"};
    return names[i];
}

Theorem3Result theorem3_bound(const FactoredModulus& q, double eta, double t, double c_impl) {
    if (!(eta > 0.0 && eta < 0.5)) throw std::invalid_argument("theorem3_bound: eta must lie in (0, 1/2)");
    Theorem3Result out;
    out.c_impl = c_impl;
    out.ell = ell_context(q, t).ell;
    const double l = out.ell;
    out.terms[0] = eta * log_of(q.core());
    out.terms[1] = std::pow(eta, 1.5) * l;
    out.terms[2] = eta * std::pow(l, 2.0 / 3.0) * std::cbrt(std::log(l));
    out.dominant = 0;
    for (int i = 1; i < 3; ++i)
        if (out.terms[i] > out.terms[out.dominant]) out.dominant = i;
    out.log_bound = -std::log(eta) + c_impl * out.terms[out.dominant];
    out.bound = std::exp(out.log_bound);
    return out;
}

Lemma8Result lemma8_check(const FactoredModulus& q, double log_Y, double eta, double t, const Lemma8Constants& c) {
    Lemma8Result out;
    out.ell = ell_context(q, t).ell;
    out.log_Y = log_Y;
    out.y_condition = log_Y >= c.gamma0 * log_of(q.core());
    out.eta_ceiling = c.xi0 * log_Y * log_Y / (out.ell * out.ell) - c.c0 * std::log(out.ell) / log_Y;
    out.eta_condition = eta > 0.0 && eta <= out.eta_ceiling;
    out.valid = out.y_condition && out.eta_condition;
    out.log_bound = eta > 0.0 ? -std::log(eta) + eta * log_Y : INFINITY;
    out.bound = std::exp(out.log_bound);
    return out;
}

double lemma8_log_Y(const FactoredModulus& q, double eta, double t, double A) {
    const double l = ell_context(q, t).ell;
    const double a = log_of(q.core());
    const double b = std::sqrt(eta) * l;
    const double c = std::pow(l, 2.0 / 3.0) * std::cbrt(std::log(l));
    return A * std::max({a, b, c});
}

double vartheta_shape(const BigInt& q, double A) {
    // log log q > 0 already for q > e^e ~ 15.15; q >= 16 keeps clear of the boundary
    if (q < 16) throw std::domain_error("vartheta_shape: q must be >= 16");
    const double lq = log_of(q);
    const double llq = std::log(lq);
    return A / (std::pow(lq, 2.0 / 3.0) * std::cbrt(llq));
}

ZeroFreeRegionParams zero_free_params(const FactoredModulus& q, double eta, double T, double M_bound, double A) {
    if (!(eta > 0.0 && eta < 0.5)) throw std::invalid_argument("zero_free_params: eta must lie in (0, 1/2)");
    if (!(T >= 1.0)) throw std::invalid_argument("zero_free_params: T must be >= 1");
    if (!(M_bound >= std::numbers::e - 1e-12)) throw std::invalid_argument("zero_free_params: M must be >= e");
    ZeroFreeRegionParams out;
    out.eta = eta;
    out.T = T;
    out.M_bound = M_bound;
    out.vartheta = eta / (400.0 * std::log(M_bound));
    out.lhs = eta * std::log(5.0 * (std::log(3.0) + q.log()));
    out.rhs_as_printed = 3.0 * std::log(2.5 * out.vartheta);
    out.rhs_corrected = 3.0 * std::log(2.5 / out.vartheta);
    out.etacond_holds_as_printed = out.lhs <= out.rhs_as_printed;
    out.etacond_holds_corrected = out.lhs <= out.rhs_corrected;
    out.A_shape = A;
    if (q.value() >= 16) out.vartheta_shape = vartheta_shape(q.value(), A);
    return out;
}

std::vector<L1TrendRow> l1_trend(u64 p, int gamma_max) {
    std::vector<L1TrendRow> rows;
    for (int g = 1; g <= gamma_max; ++g) {
        FactoredModulus q(std::vector<PrimePower>{{p, g}});
        auto chars = enumerate_characters(q, true);
        L1TrendRow row;
        row.gamma = g;
        row.q = q.value();
        row.characters = chars.size();
        const double lq = q.log();
        row.scale = std::pow(lq, 2.0 / 3.0) * std::cbrt(std::log(lq));
        if (!chars.empty()) {
            LBatch batch(q, chars);
            std::vector<Complex> L;
            batch.eval({1.0, 0.0}, L);
            row.min_abs = INFINITY;
            for (const auto& v : L) {
                row.max_abs = std::max(row.max_abs, std::abs(v));
                row.min_abs = std::min(row.min_abs, std::abs(v));
            }
            row.max_ratio = row.max_abs / row.scale;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace chisum
