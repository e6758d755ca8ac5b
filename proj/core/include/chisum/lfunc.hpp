#pragma once

// Dirichlet L-functions: evaluation, zero counting in rectangles, and the bound and
// zero-free-region parameter evaluators.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "chisum/characters.hpp"

namespace chisum {

using Complex = std::complex<double>;

/// zeta(s, a) = sum_{n >= 0} (n + a)^{-s} by Euler-Maclaurin (12 Bernoulli terms after
/// max(20, |s| + 20) direct terms). Requires Re s > 0, s != 1, a in (0, 1].
Complex hurwitz_zeta(Complex s, double a);

struct HurwitzValue {
    Complex value;       // zeta(s, a) - 1/(s - 1)
    Complex derivative;  // d/ds of value
};

/// zeta(s, a) - 1/(s - 1), finite at s = 1, with its s-derivative.
HurwitzValue hurwitz_regularized(Complex s, double a);

/// sum_{m >= K} m^{-w} by Euler-Maclaurin alone (K large compared with |w|).
Complex zeta_tail(Complex w, double K);

/// L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q). Throws for principal chi at s = 1 or Re s <= 0.
Complex l_value(const DirichletCharacter& chi, Complex s);
/// L'(s, chi) through the analytic derivative of the Hurwitz expansion.
Complex l_derivative(const DirichletCharacter& chi, Complex s);

/// Independent path: sum_{n <= K0 q} chi(n) n^{-s} plus the binomial expansion of the tail
/// sum_j binom(-s, j) q^{-s} sum_a chi(a) (a/q)^j zeta(s + j, K0). Nonprincipal chi only.
Complex l_value_series(const DirichletCharacter& chi, Complex s);

/// Evaluates L and L' for a fixed set of nonprincipal characters of one modulus, sharing
/// the Hurwitz values across characters.
class LBatch {
public:
    LBatch(const FactoredModulus& q, const std::vector<DirichletCharacter>& chars);

    std::size_t size() const { return values_.size(); }
    void eval(Complex s, std::vector<Complex>& L, std::vector<Complex>* dL = nullptr) const;

private:
    u64 q_ = 1;
    double log_q_ = 0.0;
    std::vector<u64> units_;                   // residues a in [1, q) coprime to q
    std::vector<std::vector<Complex>> values_;  // values_[c][i] = chi_c(units_[i])
};

struct ZeroCountConfig {
    double snap_tolerance = 1e-3;
    double perturbation = 1e-6;
    int max_retries = 4;
    int max_depth = 40;
    std::size_t max_panels = 200'000;
};

struct ZeroCountResult {
    long count = 0;          // total over nonprincipal characters
    std::vector<long> per_character;
    double alpha_used = 0.0;
    double perturbation = 0.0;  // alpha_used - alpha
    double max_snap_error = 0.0;
    std::size_t panels = 0;
    std::size_t characters = 0;
};

/// Zeros of all nonprincipal L(s, chi) mod q inside [alpha, 1] x [-T, T], by the argument
/// principle with adaptive Gauss-Legendre panels of L'/L. Throws std::runtime_error if the
/// count does not stabilise after the allowed alpha perturbations.
ZeroCountResult zero_count_rectangle(const FactoredModulus& q, double alpha, double T, const ZeroCountConfig& cfg = {});

/// Same contour count for an explicit list of nonprincipal characters mod q, any 0 < alpha < 1.
ZeroCountResult zero_count_characters(const FactoredModulus& q, const std::vector<DirichletCharacter>& chars, double alpha,
                                      double T, const ZeroCountConfig& cfg = {});

struct GridScanResult {
    bool certified = false;  // every cell certified free of zeros for every character
    double min_abs_L = 0.0;
    std::size_t cells = 0;
    std::size_t uncertified = 0;
    int max_depth = 0;
};

/// Independent check: a square cell of half-diagonal r centred at c is cleared when
/// |L(c)| > 2 r max|L'| over its centre and corners; otherwise it is split, up to depth 8.
GridScanResult grid_lower_bound_scan(const FactoredModulus& q, double alpha, double T, int max_depth = 8);

struct Theorem3Result {
    double ell = 0.0;
    double terms[3] = {0, 0, 0};  // eta log core, eta^{3/2} ell, eta ell^{2/3} (log ell)^{1/3}
    int dominant = 0;
    double log_bound = 0.0;
    double bound = 0.0;
    double c_impl = 1.0;
};

/// eta^{-1} exp(c_impl max{...}). Throws std::invalid_argument unless 0 < eta < 1/2.
Theorem3Result theorem3_bound(const FactoredModulus& q, double eta, double t, double c_impl = 1.0);
const char* theorem3_term_name(int i);

struct Lemma8Constants {
    int gamma0 = 2;
    double xi0 = 1e-4;
    double c0 = 1.0;
};

struct Lemma8Result {
    bool valid = false;
    bool y_condition = false;    // Y >= core^{gamma0}
    bool eta_condition = false;  // 0 < eta <= ceiling
    double ell = 0.0;
    double log_Y = 0.0;
    double eta_ceiling = 0.0;    // xi0 (log Y)^2 / ell^2 - c0 log ell / log Y
    double log_bound = 0.0;      // log(eta^{-1} Y^eta)
    double bound = 0.0;
};

Lemma8Result lemma8_check(const FactoredModulus& q, double log_Y, double eta, double t, const Lemma8Constants& c);

/// log Y = A max{log core, eta^{1/2} ell, ell^{2/3} (log ell)^{1/3}}.
double lemma8_log_Y(const FactoredModulus& q, double eta, double t, double A);

struct EllContext {
    double t = 0.0;
    double ell = 0.0;    // log(q (|t| + 3))
    double log_Z = 0.0;  // 2 ell
    double Z = 0.0;
};

EllContext ell_context(const FactoredModulus& q, double t);

struct ZeroFreeRegionParams {
    double eta = 0.0;
    double T = 0.0;
    double M_bound = 0.0;
    double vartheta = 0.0;  // eta / (400 log M)
    double lhs = 0.0;       // eta log(5 log 3q)
    double rhs_as_printed = 0.0;  // 3 log(2.5 vartheta)
    double rhs_corrected = 0.0;   // 3 log(2.5 / vartheta)
    bool etacond_holds_as_printed = false;
    bool etacond_holds_corrected = false;
    double A_shape = 1.0;
    std::optional<double> vartheta_shape;
};

ZeroFreeRegionParams zero_free_params(const FactoredModulus& q, double eta, double T, double M_bound, double A = 1.0);

/// A / ((log q)^{2/3} (log log q)^{1/3}); throws std::domain_error when q < 16.
double vartheta_shape(const BigInt& q, double A);

struct L1TrendRow {
    int gamma = 0;
    BigInt q;
    std::size_t characters = 0;
    double max_abs = 0.0;
    double min_abs = 0.0;
    double scale = 0.0;  // (log q)^{2/3} (log log q)^{1/3}
    double max_ratio = 0.0;
};

/// |L(1, chi)| over primitive chi mod p^gamma for gamma = 1..gamma_max.
std::vector<L1TrendRow> l1_trend(u64 p, int gamma_max);

}  // namespace chisum
