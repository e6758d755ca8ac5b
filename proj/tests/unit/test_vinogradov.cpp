#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chisum/vinogradov.hpp"
#include "oracles.hpp"

using namespace chisum;

namespace {

KorobovCoefficient exact(const Rational& r) {
    KorobovCoefficient c;
    c.exact = r;
    c.value = r.get_d();
    return c;
}

}  // namespace

TEST_CASE("Vinogradov counts, small cases") {
    CHECK(count_vinogradov(2, 2, 3) == 15);
    CHECK(count_vinogradov(2, 1, 2) == 6);
    CHECK(count_vinogradov(1, 3, 5) == 5);
    for (int k = 1; k <= 3; ++k)
        for (int d = 1; d <= 3; ++d) CHECK(count_vinogradov(k, d, 1) == 1);
    for (u64 P = 1; P <= 20; ++P) CHECK(count_vinogradov(1, 1, P) == from_u64(P));
    CHECK(multiset_count(3, 10) == 220);
}

TEST_CASE("counts match naive enumeration") {
    for (int k = 1; k <= 3; ++k) {
        for (u64 P = 1; P <= 8; ++P) {
            if (std::pow(static_cast<double>(P), 2 * k) > 3e5) break;
            for (int d = 1; d <= k + 1; ++d) {
                const BigInt fast = count_vinogradov(k, d, P);
                CHECK(fast == oracle::vinogradov_naive(k, d, P));
                CHECK(fast >= pow(from_u64(P), static_cast<unsigned long>(k)));
                CHECK(fast <= pow(from_u64(P), static_cast<unsigned long>(2 * k)));
            }
        }
    }
}

TEST_CASE("monotone in d and P") {
    for (int k = 1; k <= 3; ++k) {
        for (u64 P = 1; P <= 6; ++P) {
            for (int d = 1; d < 4; ++d) CHECK(count_vinogradov(k, d + 1, P) <= count_vinogradov(k, d, P));
            CHECK(count_vinogradov(k, 2, P + 1) >= count_vinogradov(k, 2, P));
        }
    }
}

TEST_CASE("multiset budget") {
    CountConfig cfg;
    cfg.max_multisets = 100;
    CHECK_THROWS_AS(count_vinogradov(3, 2, 50, cfg), std::length_error);
}

TEST_CASE("rational approximations") {
    auto a = rational_approx(Rational(1, 3), BigInt(10));
    CHECK(a.a == 1);
    CHECK(a.b == 3);
    CHECK(a.theta == 0.0);

    auto z = rational_approx(Rational(0), BigInt(7));
    CHECK(z.a == 0);
    CHECK(z.b == 1);
    CHECK(z.theta == 0.0);

    auto r2 = rational_approx(std::sqrt(2.0), BigInt(10));
    CHECK(r2.a == 7);
    CHECK(r2.b == 5);
    CHECK(std::fabs(r2.theta) <= 1.0);
    CHECK(r2.theta == doctest::Approx((std::sqrt(2.0) - 1.4) * 25));

    for (int num = -50; num <= 50; num += 7) {
        for (int den : {11, 97, 1000}) {
            Rational x(num, den);
            x.canonicalize();
            auto c = rational_approx(x, BigInt(30));
            CHECK(c.b <= 30);
            CHECK(gcd(c.a, c.b) == 1);
            CHECK(std::fabs(c.theta) <= 1.0);
            Rational back = Rational(c.a, c.b) + Rational(c.theta) / Rational(c.b * c.b);
            CHECK(std::fabs(Rational(back - x).get_d()) < 1e-12);
        }
    }
}

TEST_CASE("Korobov inequality") {
    SUBCASE("integer coefficients") {
        auto rep = korobov_check({exact(Rational(3)), exact(Rational(-2))}, 2, 6);
        CHECK(rep.holds);
        CHECK(rep.Q == 1);
        CHECK(rep.log_W == doctest::Approx(3 * std::log(6.0)));
    }
    SUBCASE("x^2 / 5, P = 10, k = 2") {
        auto rep = korobov_check({exact(Rational(0)), exact(Rational(1, 5))}, 2, 10);
        CHECK(rep.holds);
        CHECK(rep.Q == 5);
        CHECK(rep.N == count_vinogradov(2, 2, 10));
        const double W = std::min(10.0, 10.0 / 1.0 + 1.0) * std::min(100.0, 100.0 / std::sqrt(5.0) + std::sqrt(5.0));
        CHECK(rep.W == doctest::Approx(W));
        CHECK(rep.lhs_log <= rep.rhs_log);
    }
    SUBCASE("real coefficients fall back to convergents") {
        KorobovCoefficient a;
        a.value = std::sqrt(2.0);
        KorobovCoefficient b;
        b.value = std::numbers::pi;
        auto rep = korobov_check({a, b}, 1, 12);
        CHECK(rep.holds);
        REQUIRE(rep.approximations.size() == 2);
        CHECK(rep.approximations[0].b <= 12);
        CHECK(rep.approximations[1].b <= 144);
    }
    SUBCASE("seeded campaign") {
        auto inst = korobov_campaign(7, 20);
        REQUIRE(inst.size() == 20);
        CHECK(korobov_campaign(7, 20).front().coefficients == inst.front().coefficients);
        for (const auto& in : inst) {
            std::vector<KorobovCoefficient> g;
            for (const auto& c : in.coefficients) g.push_back(exact(c));
            auto rep = korobov_check(g, in.k, in.P);
            CHECK(rep.holds);
            CHECK(rep.S_abs <= static_cast<double>(in.P * in.P) + 1e-9);
        }
    }
    CHECK_THROWS(korobov_check({exact(Rational(1, 3))}, 1, 5));
}

TEST_CASE("Ford bound") {
    CHECK(ford_bound_log(1, 10, 2) == doctest::Approx((4 - 0.499) * std::log(10.0)));
    auto s = ford_k_search(129, 1000);
    CHECK(s.k_min == 33282);
    CHECK(s.k_max == 66564);
    CHECK(s.guarantee_applies);
    CHECK(s.k >= s.k_min);
    CHECK(s.k <= s.k_max);
    const double log10_const = 3.0 * 129 * 129 * 129 * std::log10(129.0);
    CHECK(log10_const == doctest::Approx(1.36e7).epsilon(0.01));
    CHECK(ford_bound_log(129, 1, 40000) / std::log(10.0) == doctest::Approx(log10_const));
    CHECK_FALSE(ford_k_search(4, 10).guarantee_applies);
}
