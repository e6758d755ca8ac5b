#include <doctest.h>

#include <cmath>

#include "chisum/postnikov.hpp"
#include "oracles.hpp"

using namespace chisum;

namespace {

bool identity_holds(const oracle::CharacterOracle& o, const DirichletCharacter& chi, const BigInt& m, int d) {
    return oracle::postnikov_identity_holds(o, chi.modulus(), m, d);
}

int v_p(BigInt n, u64 p) {
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

}  // namespace

TEST_CASE("truncated logarithm coefficients") {
    CHECK(fd_coefficients(1) == std::vector<Rational>{Rational(1)});
    CHECK(fd_coefficients(2) == std::vector<Rational>{Rational(1), Rational(-1, 2)});
    CHECK(fd_coefficients(4) == std::vector<Rational>{Rational(1), Rational(-1, 2), Rational(1, 3), Rational(-1, 4)});
}

TEST_CASE("minimal degree") {
    CHECK(minimal_postnikov_degree(FactoredModulus(u64{9})) == 4);
    CHECK(minimal_postnikov_degree(FactoredModulus(u64{7})) == 2);
    CHECK(minimal_postnikov_degree(FactoredModulus(u64{12})) == 4);
    CHECK(minimal_postnikov_degree(FactoredModulus(u64{3 * 3 * 3 * 5})) == 6);
    CHECK(coprime_lcm(FactoredModulus(u64{9}), 4) == 4);
    CHECK(coprime_lcm(FactoredModulus(u64{10}), 6) == 3);
}

TEST_CASE("q = 9 with chi(2) = e(1/6)") {
    FactoredModulus fq(u64{9});
    std::optional<DirichletCharacter> chi;
    for (const auto& c : enumerate_characters(fq, true))
        if (oracle::CharacterOracle(c).angle(2) == Rational(1, 6)) chi = c;
    REQUIRE(chi);
    oracle::CharacterOracle o(*chi);

    auto res = find_postnikov(*chi, 4);
    CHECK(res.points_checked == 3);
    CHECK(res.coprime_lcm == 4);
    CHECK(res.m % 4 == 0);
    CHECK(gcd(res.m, BigInt(9)) == 1);
    CHECK(identity_holds(o, *chi, res.m, 4));
    // least valid multiple of 4 coprime to 9
    for (BigInt m = 4; m < res.m; m += 4)
        if (gcd(m, BigInt(9)) == 1) CHECK_FALSE(identity_holds(o, *chi, m, 4));

    // brute force over m in [1, 9) coprime to 9, without the divisibility condition
    std::vector<int> valid;
    for (int m = 1; m < 9; ++m)
        if (m % 3 != 0 && identity_holds(o, *chi, BigInt(m), 4)) valid.push_back(m);
    REQUIRE(valid.size() == 1);
    CHECK(res.m % 3 == valid[0] % 3);
}

TEST_CASE("q = 25, every primitive character") {
    FactoredModulus fq(u64{25});
    for (const auto& chi : enumerate_characters(fq, true)) {
        oracle::CharacterOracle o(chi);
        auto res = find_postnikov(chi, 4);
        CHECK(identity_holds(o, chi, res.m, 4));
        CHECK(gcd(res.m, BigInt(25)) == 1);
        for (int r : {1, 2, 3, 4}) CHECK(res.m % r == 0);
        CHECK(verify_postnikov(chi, 4, res.m));
        CHECK_FALSE(verify_postnikov(chi, 4, res.m + 12));
    }
}

TEST_CASE("identity over small prime powers, checked by the oracle") {
    for (u64 q : {u64{27}, u64{49}, u64{81}, u64{125}, u64{243}, u64{343}}) {
        FactoredModulus fq(q);
        const int d = minimal_postnikov_degree(fq);
        for (const auto& chi : enumerate_characters(fq, true)) {
            oracle::CharacterOracle o(chi);
            BigInt m = find_postnikov_m(chi, d);
            REQUIRE(identity_holds(o, chi, m, d));
            for (int r = 1; r <= d; ++r)
                if (gcd(static_cast<u64>(r), q) == 1) REQUIRE(m % r == 0);
        }
    }
}

TEST_CASE("composite and even moduli") {
    for (u64 q : {u64{16}, u64{36}, u64{72}, u64{100}}) {
        FactoredModulus fq(q);
        const int d = minimal_postnikov_degree(fq);
        for (const auto& chi : enumerate_characters(fq, true)) {
            oracle::CharacterOracle o(chi);
            CHECK(identity_holds(o, chi, find_postnikov_m(chi, d), d));
        }
    }
}

TEST_CASE("degree below the minimum is rejected") {
    FactoredModulus fq(u64{27});
    auto chi = enumerate_characters(fq, true).front();
    CHECK_THROWS_AS(find_postnikov(chi, 5), std::invalid_argument);
}

TEST_CASE("script L") {
    CHECK(script_L(100) == 7);
    CHECK(script_L(6) == 3);
    CHECK(script_L(1) == 1);
}

TEST_CASE("shifted polynomial at q = 3^8, s = 2, n = 2") {
    FactoredModulus fq(pow(BigInt(3), 8));
    const int gamma = 8, s = 2, L = script_L(gamma);
    const int d_tail = (gamma + L) / s;
    auto chars = enumerate_characters(fq, true);
    for (std::size_t i : {std::size_t{0}, chars.size() / 3, chars.size() - 1}) {
        const auto& chi = chars[i];
        auto f = shifted_poly(chi, BigInt(2), s, 12);
        REQUIRE(f.degree == 12);
        const BigInt m = find_postnikov_m(chi, std::max(12, 2 * gamma));
        const BigInt nbar = invmod(BigInt(2), fq.value());
        CHECK(f.m == m);
        CHECK(f.n_bar == nbar);
        for (int r = 1; r <= 12; ++r) {
            Rational alpha(pow(BigInt(3), static_cast<unsigned long>(r * s)) * m * pow(nbar, static_cast<unsigned long>(r)),
                           fq.value() * r);
            alpha.canonicalize();
            if (r % 2 == 0) alpha = -alpha;
            CHECK(f.coefficient(r) == alpha);
            const BigInt b = f.denominator(r);
            CHECK(b == pow(BigInt(3), static_cast<unsigned long>(v_p(b, 3))));
            const int v = v_p(b, 3);
            CHECK(v >= std::max(0, gamma - r * s));
            CHECK(v <= std::max(0, gamma - r * s + L));
            CHECK(v == predicted_denominator_valuation(fq, 3, r, s));
            if (r > d_tail) CHECK(b == 1);
        }
        CHECK(f.integer_tail_start() <= d_tail + 1);
    }
}

TEST_CASE("integer tail and the r = d boundary") {
    // q = 3^6, s = 5: d = floor((6 + 3) / 5) = 1 but b_1 = 3 != 1
    FactoredModulus fq(pow(BigInt(3), 6));
    const int L = script_L(6);
    CHECK((6 + L) / 5 == 1);
    auto chi = enumerate_characters(fq, true).front();
    auto f = shifted_poly(chi, BigInt(1), 5, 4);
    CHECK(f.denominator(1) == 3);
    for (int r = 2; r <= 4; ++r) CHECK(f.denominator(r) == 1);

    CHECK_THROWS_AS(shifted_poly(chi, BigInt(3), 5, 4), std::invalid_argument);
    CHECK_THROWS_AS(shifted_poly(chi, BigInt(2), 1, 4), std::invalid_argument);
}

TEST_CASE("n = 1 substitution") {
    FactoredModulus fq(pow(BigInt(5), 4));
    auto chi = enumerate_characters(fq, true)[7];
    auto f = shifted_poly(chi, BigInt(1), 2, 6);
    for (int r = 1; r <= 6; ++r) {
        Rational alpha(pow(BigInt(5), static_cast<unsigned long>(2 * r)) * f.m, fq.value() * r);
        alpha.canonicalize();
        if (r % 2 == 0) alpha = -alpha;
        CHECK(f.coefficient(r) == alpha);
    }
}

TEST_CASE("bound parameters") {
    BoundConfig cfg;
    SUBCASE("q = N") {
        FactoredModulus fq(pow(BigInt(3), 400));
        auto bp = bound_parameters(fq, fq.value(), cfg);
        CHECK(bp.rho == doctest::Approx(1.0));
        CHECK(bp.s == 2);  // floor(400 / 200)
        CHECK(bp.d0 == 800);
        CHECK(bp.d == (400 + script_L(400)) / 2);
    }
    SUBCASE("q = 3^100, N = 3^20") {
        FactoredModulus fq(pow(BigInt(3), 100));
        auto bp = bound_parameters(fq, pow(BigInt(3), 20), cfg);
        CHECK(bp.rho == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(bp.mu == doctest::Approx(1.0));
        CHECK(bp.s == 0);  // floor(20 / 200)
        CHECK(bp.d == 0);
        CHECK(bp.script_L == 7);
        CHECK_FALSE(bp.diagnostics.empty());
    }
    SUBCASE("s inside its window") {
        FactoredModulus fq(pow(BigInt(3), 3000));
        auto bp = bound_parameters(fq, pow(BigInt(3), 1000), cfg);
        const double r = bp.eps_gamma_over_rho;
        CHECK(r == doctest::Approx(5.0));
        CHECK(bp.s == 5);
        CHECK(0.5 * r <= static_cast<double>(bp.s));
        CHECK(static_cast<double>(bp.s) <= r * (1 + 1e-12));
        CHECK(bp.d == (3000 + bp.script_L) / 5);
    }
    CHECK_THROWS_AS(bound_parameters(FactoredModulus(u64{9}), BigInt(1), cfg), std::invalid_argument);
    CHECK_THROWS_AS(bound_parameters(FactoredModulus(), BigInt(10), cfg), std::invalid_argument);
}

TEST_CASE("bound shapes") {
    const double lq = 100 * std::log(3.0);
    // rho = 1: N^{1 - xi0}
    CHECK(main_bound_log(lq, lq, 1e-4) == doctest::Approx((1 - 1e-4) * lq));
    CHECK(main_bound(BigInt(1000), BigInt(1000), 1e-4) == doctest::Approx(std::pow(1000.0, 1 - 1e-4)));
    CHECK(main_bound(BigInt(1000), BigInt(10), 1e-4) < 10.0);
    CHECK_THROWS_AS(iwaniec_bound_log(lq, lq, 1.0, 1e-4), std::domain_error);
    const double rho = 4.0, lN = lq / rho;
    CHECK(iwaniec_bound_log(lq, lN, 1.0, 1e-4) ==
          doctest::Approx(rho * std::pow(1 + std::log(rho), 2) + (1 - 1e-4 / (rho * rho * std::log(rho))) * lN));

    // savings exponent xi0 / rho^2 nondecreasing in N
    double prev = -1;
    for (int g = 1; g <= 100; ++g) {
        const double lNg = g * std::log(3.0);
        const double saving = lNg - main_bound_log(lq, lNg, 1e-4);
        CHECK(saving / lNg >= prev);
        prev = saving / lNg;
    }
}

TEST_CASE("threshold ordering") {
    auto rows = compare_thresholds(3, {100, 300, 1000}, 1.0, 1.0);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.main_log_N < r.iwaniec_log_N);
        // the main threshold solves xi0 L^3 / lq^2 = log 2
        CHECK(std::pow(r.main_log_N, 3) / (r.log_q * r.log_q) == doctest::Approx(std::log(2.0)));
        CHECK(r.main_over_two_thirds == doctest::Approx(std::cbrt(std::log(2.0))));
    }
    CHECK(rows[2].main_over_three_quarters < rows[1].main_over_three_quarters);
    CHECK(rows[1].main_over_three_quarters < rows[0].main_over_three_quarters);
}
