#pragma once

// Truncated-logarithm polynomials, the polynomial representation of characters on
// 1 + tau*core*Z, the parameter ledger for the main bound, and the bound shapes.

#include <optional>
#include <string>
#include <vector>

#include "chisum/arith.hpp"
#include "chisum/characters.hpp"

namespace chisum {

/// Coefficients of F_d(x) = sum_{r=1}^d (-1)^{r-1} x^r / r; entry r-1 holds the x^r coefficient.
std::vector<Rational> fd_coefficients(int d);

/// Least d with q^2 | core(q)^d, which equals 2 * gamma_max (also the choice d0 = 2 gamma).
int minimal_postnikov_degree(const FactoredModulus& q);

/// lcm of all r in [1, d] coprime to q.
BigInt coprime_lcm(const FactoredModulus& q, int d);

struct PostnikovResult {
    BigInt m;              // the returned representative
    BigInt m_reduced;      // m / coprime_lcm
    BigInt coprime_lcm;    // lcm{r <= d : gcd(r, q) = 1}
    int d = 0;
    u64 points_checked = 0;  // x values verified, i.e. q / (tau core)
};

/// Least m (a multiple of coprime_lcm(q, d), coprime to q) with
/// chi(1 + tau core x) = e(m F_d(tau core x) / q) for every x in [0, q/(tau core)),
/// the identity checked exhaustively as exact angles. Throws std::runtime_error if no m exists
/// and std::invalid_argument if q^2 does not divide core^d or the check exceeds max_points.
PostnikovResult find_postnikov(const DirichletCharacter& chi, int d, u64 max_points = 100'000'000);
BigInt find_postnikov_m(const DirichletCharacter& chi, int d);

/// Exact check of the identity for a given m at every x in [0, q/(tau core)).
bool verify_postnikov(const DirichletCharacter& chi, int d, const BigInt& m, u64 max_points = 100'000'000);

/// L = floor(1.5 log(2 gamma)).
int script_L(int gamma);

/// alpha_r = a_r / b_r for r = 1..degree, reduced.
struct TruncatedLogPolynomial {
    int degree = 0;
    std::vector<Rational> coefficients;  // index r-1
    BigInt m;
    int s = 0;
    BigInt n;
    BigInt n_bar;

    const Rational& coefficient(int r) const { return coefficients.at(static_cast<std::size_t>(r - 1)); }
    BigInt denominator(int r) const { return coefficient(r).get_den(); }
    /// Least r0 such that b_r = 1 for every r >= r0 up to degree (degree + 1 if b_degree != 1).
    int integer_tail_start() const;
};

/// f_n with alpha_r = (-1)^{r-1} core^{rs} m nbar^r / (q r), r = 1..d, where m comes from
/// find_postnikov with degree max(d, 2 gamma). Throws std::invalid_argument if gcd(n, q) != 1 or s < 2.
TruncatedLogPolynomial shifted_poly(const DirichletCharacter& chi, const BigInt& n, int s, int d);

/// v_p(b_r) = max(0, v_p(q) - r s + v_p(r)).
int predicted_denominator_valuation(const FactoredModulus& q, u64 p, int r, int s);

struct BoundConfig {
    Rational epsilon{1, 200};
    int gamma0 = 2;
    double xi0 = 1e-4;
};

struct BoundParameters {
    Rational epsilon;
    int gamma0 = 0;
    double xi0 = 0.0;
    double rho = 0.0;       // log q / log N
    double mu = 0.0;        // q = core^{mu gamma}
    double eps_gamma_over_rho = 0.0;
    long s = 0;             // floor(eps gamma / rho)
    int d0 = 0;             // 2 gamma
    long d = 0;             // floor((gamma + L) / s), 0 when s = 0
    int script_L = 0;
    int gamma = 0;
    std::vector<std::string> diagnostics;
};

/// Throws std::invalid_argument if q <= 1 or N <= 1. Violated asymptotic preconditions
/// are listed in diagnostics instead.
BoundParameters bound_parameters(const FactoredModulus& q, const BigInt& N, const BoundConfig& cfg);

/// log of N^{1 - xi0/rho^2}, rho = log q / log N.
double main_bound_log(double log_q, double log_N, double xi0);
double main_bound(const BigInt& q, const BigInt& N, double xi0);

/// log of exp(a rho (1 + log rho)^2) N^{1 - xi0/(rho^2 log rho)}; throws std::domain_error when rho <= 1.
double iwaniec_bound_log(double log_q, double log_N, double a, double xi0);
double iwaniec_bound(const BigInt& q, const BigInt& N, double a, double xi0);

/// Least log N at which each bound saves a factor 2 over the trivial bound N. The
/// iwaniec threshold is searched on (0, log q) where rho > 1.
double main_threshold_log_N(double log_q, double xi0);
double iwaniec_threshold_log_N(double log_q, double a, double xi0);

struct ThresholdRow {
    int gamma = 0;
    double log_q = 0.0;
    double main_log_N = 0.0;
    double iwaniec_log_N = 0.0;
    double main_over_two_thirds = 0.0;      // main_log_N / (log q)^{2/3}
    double main_over_three_quarters = 0.0;  // main_log_N / (log q)^{3/4}
    double iwaniec_over_three_quarters = 0.0;
};

/// Rows for q = p^gamma over the given exponents.
std::vector<ThresholdRow> compare_thresholds(u64 p, const std::vector<int>& gammas, double a, double xi0);

}  // namespace chisum
