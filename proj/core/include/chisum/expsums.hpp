#pragma once

// Character sums, twisted sums, Dirichlet polynomials, Korobov double sums and the
// shift decomposition of a twisted character sum.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "chisum/characters.hpp"

namespace chisum {

using Complex = std::complex<double>;

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
    void add(Complex v);
    void add(const CompensatedSum& other);
    Complex value() const { return {re_ + cre_, im_ + cim_}; }

private:
    static void step(double& s, double& c, double v);
    double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

/// Polynomial with real coefficients, index r holding the x^r coefficient. When built from
/// rationals, phases G(n) mod 1 are computed exactly.
class RealPolynomial {
public:
    RealPolynomial() = default;
    static RealPolynomial from_doubles(std::vector<double> coefficients);
    static RealPolynomial from_rationals(std::vector<Rational> coefficients);

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_exact() const { return exact_.has_value(); }
    const std::vector<double>& coefficients() const { return coeffs_; }
    const std::vector<Rational>& exact_coefficients() const { return *exact_; }

    double operator()(double x) const;
    /// G(n) mod 1 in [0, 1).
    double phase(i64 n) const;
    /// Exact G(n) mod 1; requires is_exact().
    Rational exact_phase(const BigInt& n) const;

private:
    void trim();
    void prepare();

    std::vector<double> coeffs_;
    std::optional<std::vector<Rational>> exact_;
    // exact phases: numerators a_r of r-th coefficient over the common denominator D
    u64 denom_ = 0;  // 0 when D does not fit the fast path
    std::vector<u64> numer_;
};

/// Multiset of angles j / order, j in [0, order).
struct AngleHistogram {
    u64 order = 1;
    std::vector<u64> counts;

    u64 total() const;
    /// Exact reduction modulo the order-th cyclotomic polynomial: coefficients of
    /// 1, zeta, ..., zeta^{phi(order)-1}. nullopt if order is too large to reduce.
    std::optional<std::vector<i64>> cyclotomic_coordinates() const;
    std::optional<bool> exact_zero() const;
};

struct SumResult {
    Complex value{0.0, 0.0};
    u64 term_count = 0;
    std::string mode = "float";  // "exact" when exact_terms is present
    std::optional<AngleHistogram> exact_terms;
    std::optional<bool> exact_zero;
};

/// Largest N for which char_sum keeps the exact angle multiset.
inline constexpr u64 kExactSumLimit = 10'000'000;

/// sum_{n=M+1}^{M+N} chi(n).
SumResult char_sum(const DirichletCharacter& chi, i64 M, u64 N);
SumResult char_sum(const CharacterTable& table, i64 M, u64 N);

/// sum_{n=M+1}^{M+N} chi(n) e(G(n)).
SumResult twisted_sum(const DirichletCharacter& chi, i64 M, u64 N, const RealPolynomial& G);
SumResult twisted_sum(const CharacterTable& table, i64 M, u64 N, const RealPolynomial& G);

/// sum_{n=M+1}^{M+N} chi(n) n^{it}, with n^{it} = e(t log n / 2pi).
SumResult dirichlet_poly(const DirichletCharacter& chi, i64 M, u64 N, double t);
SumResult dirichlet_poly(const CharacterTable& table, i64 M, u64 N, double t);

/// Same sum through (n0 + h)^{it} = n0^{it} e(t G(h / n0)) with G from taylor_approx_poly(nu),
/// expanding around a centre every `block` terms.
SumResult dirichlet_poly_taylor(const CharacterTable& table, i64 M, u64 N, double t, int nu = 12, u64 block = 16);

/// G(x) = F_{nu-1}(x) / (2 pi), so that (1 + x)^{it} = e(t G(x)) (1 + O(|t| |x|^nu)).
RealPolynomial taylor_approx_poly(int nu);
/// 4 |t| |x|^nu, valid for |x| <= 1/2.
double taylor_error_bound(int nu, double t, double x);

/// sum_{y,z=1}^P e(g(yz)).
SumResult double_sum(const RealPolynomial& g, u64 P);

struct DecomposeConfig {
    double residual_constant = 10.0;
    double work_budget = 1e9;
};

struct DecomposeResult {
    Complex S{0.0, 0.0};
    Complex V{0.0, 0.0};
    Complex reconstruction{0.0, 0.0};  // core^{-2s} V
    double residual = 0.0;             // |S - reconstruction|
    double bound = 0.0;                // residual_constant * core^{3s}
    bool holds = false;
    u64 P = 0;                         // core^s
    u64 coprime_count = 0;             // |{n in [M+1, M+N] : gcd(n, q) = 1}|
    double residual_constant = 10.0;
};

/// V = sum_{n coprime to q in [M+1, M+N]} chi(n) sum_{y,z=1}^{core^s} chi(1 + core^s nbar yz) e(G(n + core^s yz)).
/// Throws std::invalid_argument if s < 2 or the work exceeds the budget.
DecomposeResult decompose(const DirichletCharacter& chi, i64 M, u64 N, const RealPolynomial& G, int s,
                          const DecomposeConfig& cfg = {});

}  // namespace chisum
