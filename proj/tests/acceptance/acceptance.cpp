// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chisum/expsums.hpp"
#include "chisum/lfunc.hpp"
#include "chisum/parallel.hpp"
#include "chisum/postnikov.hpp"
#include "chisum/primes.hpp"
#include "chisum/vinogradov.hpp"
#include "oracles.hpp"

using namespace chisum;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects the first few failure messages of a criterion.
class Failures {
public:
    void add(const std::string& msg) {
        std::lock_guard lock(mu_);
        ++count_;
        if (first_.size() < 3) first_.push_back(msg);
    }
    bool empty() const { return count_ == 0; }
    std::string summary() const {
        std::string s = std::to_string(count_) + " failure(s)";
        for (const auto& m : first_) s += "; " + m;
        return s;
    }

private:
    std::mutex mu_;
    std::size_t count_ = 0;
    std::vector<std::string> first_;
};

Outcome finish(const Failures& f, const std::string& ok) {
    if (f.empty()) return {true, ok};
    return {false, f.summary()};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// 1. Postnikov identity for every primitive character mod p^gamma <= 5000, p in {3, 5, 7}.
Outcome postnikov_identity() {
    Failures fail;
    std::size_t checked = 0;
    for (u64 p : {u64{3}, u64{5}, u64{7}}) {
        for (u64 q = p; q <= 5000; q *= p) {
            FactoredModulus fq(q);
            const int d = minimal_postnikov_degree(fq);
            const auto chars = enumerate_characters(fq, true);
            checked += chars.size();
            parallel_for(chars.size(), [&](std::size_t i) {
                const auto& chi = chars[i];
                const std::string where = "q=" + std::to_string(q) + " chi=" + chi.label_string();
                try {
                    const BigInt m = find_postnikov_m(chi, d);
                    if (!oracle::postnikov_identity_holds(oracle::CharacterOracle(chi), fq, m, d))
                        fail.add(where + " identity");
                    if (gcd(m, fq.value()) != 1) fail.add(where + " gcd(m, q) > 1");
                    for (int r = 1; r <= d; ++r)
                        if (gcd(static_cast<u64>(r), q) == 1 && m % r != 0) fail.add(where + " r does not divide m");
                } catch (const std::exception& e) {
                    fail.add(where + " " + e.what());
                }
            });
        }
    }
    return finish(fail, std::to_string(checked) + " characters verified exactly");
}

// 2. Korobov's inequality on 100 seeded instances.
Outcome korobov_campaign_check() {
    Failures fail;
    const auto inst = korobov_campaign(0, 100);
    double worst = -INFINITY;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        std::vector<KorobovCoefficient> g;
        for (const auto& c : inst[i].coefficients) {
            KorobovCoefficient k;
            k.exact = c;
            k.value = c.get_d();
            g.push_back(k);
        }
        auto rep = korobov_check(g, inst[i].k, inst[i].P);
        if (!rep.holds) fail.add("instance " + std::to_string(i));
        worst = std::max(worst, rep.lhs_log - rep.rhs_log);
    }
    return finish(fail, std::to_string(inst.size()) + " instances hold; max log(lhs/rhs) = " + fmt(worst));
}

// 3. Signature counts against naive enumeration for every P^{2k} <= 1e8.
Outcome vinogradov_oracle() {
    Failures fail;
    if (count_vinogradov(2, 2, 3) != 15) fail.add("N_{2,2}(3) != 15");
    if (count_vinogradov(2, 1, 2) != 6) fail.add("N_{2,1}(2) != 6");
    struct Case {
        int k, d;
        u64 P;
    };
    std::vector<Case> cases;
    for (int k = 1;; ++k) {
        if (std::pow(2.0, 2 * k) > 1e8) {
            // P = 1 is the only admissible value from here on; N = 1 for every d
            if (count_vinogradov(k, 1, 1) != 1) fail.add("P = 1");
            break;
        }
        for (u64 P = 1; std::pow(static_cast<double>(P), 2 * k) <= 1e8; ++P)
            for (int d = 1; d <= std::min(k + 1, 4); ++d) cases.push_back({k, d, P});
    }
    parallel_for(cases.size(), [&](std::size_t i) {
        const auto& c = cases[i];
        if (count_vinogradov(c.k, c.d, c.P) != oracle::vinogradov_naive(c.k, c.d, c.P))
            fail.add("k=" + std::to_string(c.k) + " d=" + std::to_string(c.d) + " P=" + std::to_string(c.P));
    });
    return finish(fail, std::to_string(cases.size()) + " (k, d, P) triples match");
}

// 4. Shift decomposition residual on the grid.
Outcome decomposition_grid() {
    Failures fail;
    std::size_t runs = 0;
    double worst = 0.0;
    const std::vector<RealPolynomial> Gs = {
        RealPolynomial(),
        RealPolynomial::from_rationals({Rational(0), Rational(1, 7)}),
        RealPolynomial::from_rationals({Rational(0), Rational(1, 5), Rational(2, 7)}),
    };
    for (u64 q : {u64{27}, u64{81}, u64{243}, u64{729}}) {
        FactoredModulus fq(q);
        const auto chars = enumerate_characters(fq, true);
        const std::array<std::size_t, 2> picks{0, chars.size() - 1};
        for (int s : {2, 3}) {
            const u64 P = s == 2 ? 9 : 27;
            for (u64 N : {P * P, 2 * P * P, q}) {
                for (std::size_t g = 0; g < Gs.size(); ++g) {
                    for (std::size_t c : picks) {
                        auto r = decompose(chars[c], 0, N, Gs[g], s);
                        ++runs;
                        worst = std::max(worst, r.residual / r.bound);
                        if (!r.holds)
                            fail.add("q=" + std::to_string(q) + " s=" + std::to_string(s) + " N=" + std::to_string(N) +
                                     " G#" + std::to_string(g));
                    }
                }
            }
        }
    }
    return finish(fail, std::to_string(runs) + " runs; max residual/bound = " + fmt(worst));
}

// 5. Orthogonality and Gauss-sum magnitudes.
Outcome sum_identities() {
    Failures fail;
    std::atomic<std::size_t> sums{0};
    auto check = [&](const DirichletCharacter& chi, const ModulusTables& tables) {
        const u64 q = chi.modulus().to_u64();
        SumResult r = char_sum(CharacterTable(chi, tables), 0, q);
        ++sums;
        const bool ok = chi.is_principal()
                            ? r.exact_zero == false && std::fabs(r.value.real() - totient(chi.modulus()).get_d()) < 1e-6
                            : r.exact_zero == true;
        if (!ok) fail.add("q=" + std::to_string(q) + " chi=" + chi.label_string());
    };
    // every character of 3^gamma, gamma <= 8
    for (int g = 1; g <= 8; ++g) {
        FactoredModulus fq(pow(BigInt(3), static_cast<unsigned long>(g)));
        ModulusTables tables(fq);
        const auto chars = enumerate_characters(fq, false);
        parallel_for(chars.size(), [&](std::size_t i) { check(chars[i], tables); });
    }
    // every character for q <= 200; principal plus 7 seeded characters for every q <= 3^8
    parallel_for(6560, [&](std::size_t i) {
        const u64 q = i + 2;
        FactoredModulus fq(q);
        ModulusTables tables(fq);
        if (q <= 200) {
            for (const auto& chi : enumerate_characters(fq, false)) check(chi, tables);
            return;
        }
        check(DirichletCharacter::principal(fq), tables);
        std::mt19937_64 rng(q);
        for (int k = 0; k < 7; ++k) {
            std::vector<std::vector<BigInt>> ex;
            for (const auto& f : fq.factors()) {
                auto b = unit_group_basis(f.p, f.exponent);
                std::vector<BigInt> e;
                for (const auto& o : b.orders) e.push_back(from_u64(rng() % o.get_ui()));
                ex.push_back(e);
            }
            check(DirichletCharacter(fq, ex), tables);
        }
    });
    double worst = 0.0;
    for (u64 p = 3; p <= 97; ++p) {
        if (!oracle::is_prime_naive(p)) continue;
        const auto G = RealPolynomial::from_rationals({Rational(0), Rational(1, static_cast<long>(p))});
        for (const auto& chi : enumerate_characters(FactoredModulus(p), true)) {
            const double dev = std::fabs(std::abs(twisted_sum(chi, 0, p, G).value) - std::sqrt(static_cast<double>(p)));
            worst = std::max(worst, dev);
            if (dev > 1e-9) fail.add("Gauss sum p=" + std::to_string(p) + " chi=" + chi.label_string());
        }
    }
    return finish(fail, std::to_string(sums.load()) + " full-period sums exact; max Gauss deviation " + fmt(worst));
}

// 6. L-values: closed forms and agreement of the two evaluation paths.
Outcome l_accuracy() {
    Failures fail;
    auto quadratic = [](u64 q) {
        for (const auto& c : enumerate_characters(FactoredModulus(q), true))
            if (c.is_real()) return c;
        throw std::logic_error("no real character");
    };
    const double pi = std::numbers::pi;
    const double e3 = std::abs(l_value(quadratic(3), 1.0) - pi / std::pow(3.0, 1.5));
    const double e4 = std::abs(l_value(quadratic(4), 2.0) - 0.915965594177219015054603514932);
    if (e3 > 1e-8) fail.add("L(1, chi_3) off by " + fmt(e3));
    if (e4 > 1e-8) fail.add("L(2, chi_4) off by " + fmt(e4));

    std::vector<DirichletCharacter> chars;
    for (u64 q : {u64{3}, u64{9}, u64{27}, u64{81}, u64{243}})
        for (auto& c : enumerate_characters(FactoredModulus(q), true)) chars.push_back(c);
    const std::vector<double> sigmas{0.6, 0.75, 1.0, 1.25, 1.5, 2.0};
    const std::vector<double> ts{-50.0, -20.0, -5.0, 0.0, 1.0, 5.0, 20.0, 50.0};
    std::vector<double> worst(chars.size(), 0.0);
    parallel_for(chars.size(), [&](std::size_t i) {
        for (double sigma : sigmas) {
            for (double t : ts) {
                const Complex s(sigma, t);
                const Complex a = l_value(chars[i], s), b = l_value_series(chars[i], s);
                const double d = std::abs(a - b) / std::max(1.0, std::abs(a));
                worst[i] = std::max(worst[i], d);
                if (d > 1e-8) fail.add("chi=" + chars[i].label_string() + " s=" + fmt(sigma) + "+" + fmt(t) + "i");
            }
        }
    });
    double w = 0.0;
    for (double v : worst) w = std::max(w, v);
    return finish(fail, "closed forms within " + fmt(std::max(e3, e4)) + "; " + std::to_string(chars.size()) +
                            " characters x " + std::to_string(sigmas.size() * ts.size()) + " points, max path gap " + fmt(w));
}

// 7. No zeros in [0.9, 1] x [-10, 10], by contour count and by the grid lower bound.
Outcome zero_scan() {
    Failures fail;
    std::string detail;
    for (u64 q : {u64{27}, u64{81}, u64{243}}) {
        FactoredModulus fq(q);
        auto z = zero_count_rectangle(fq, 0.9, 10.0);
        auto g = grid_lower_bound_scan(fq, 0.9, 10.0);
        if (z.count != 0) fail.add("q=" + std::to_string(q) + " count " + std::to_string(z.count));
        if (!g.certified) fail.add("q=" + std::to_string(q) + " grid not certified");
        detail += " q=" + std::to_string(q) + ": 0 zeros, min|L| " + fmt(g.min_abs_L) + ";";
    }
    detail.pop_back();
    return finish(fail, detail.substr(1));
}

// 8. Primes in progressions.
Outcome primes_check() {
    Failures fail;
    LogCombination small;
    small.add(2);
    small.add(7);
    if (!(psi_progression_exact(10, 3, 1) == small)) fail.add("psi(10; 3, 1)");
    if (std::fabs(psi_progression(10, 3, 1) - (std::log(2.0) + std::log(7.0))) > 1e-14) fail.add("psi(10; 3, 1) float");

    const u64 x = 1000000;
    const LogCombination total = psi_progression_exact(x, 1, 0);
    parallel_for(100, [&](std::size_t i) {
        const u64 q = i + 1;
        LogCombination sum;
        for (const auto& c : psi_all_classes_exact(x, q)) sum.merge(c);
        if (!(sum == total)) fail.add("reconstruction q=" + std::to_string(q));
    });
    // the library sieve against trial division on a few classes
    for (auto [q, a] : {std::pair<u64, u64>{27, 1}, {97, 5}, {4, 3}}) {
        LogCombination oracle_sum;
        for (const auto& [p, c] : oracle::psi_trial_division(x, q, a)) oracle_sum.add(p, c);
        if (!(oracle_sum == psi_progression_exact(x, q, static_cast<i64>(a))))
            fail.add("trial division q=" + std::to_string(q));
    }
    auto r = short_interval_check(27, 1, 1000000, 100000);
    if (!(r.rel_error <= 0.1)) fail.add("rel_error " + fmt(r.rel_error));
    return finish(fail, "exact reconstruction for q <= 100 at x = 1e6; short-interval rel_error " + fmt(r.rel_error));
}

std::string run_cli(const std::string& args, unsigned threads, int* status = nullptr) {
    const std::string cmd = "CHISUM_THREADS=" + std::to_string(threads) + " '" + CHISUM_BIN + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {};
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int rc = pclose(pipe);
    if (status) *status = rc;
    return out;
}

std::vector<std::vector<double>> numeric_rows(const std::string& csv) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

// 9. Threshold table: golden match, ordering and the ratio trends.
Outcome bound_comparator() {
    Failures fail;
    int status = 0;
    const std::string out = run_cli("--xi0 1 --format csv bound-compare", 1, &status);
    if (status != 0) fail.add("bound-compare exited with " + std::to_string(status));
    std::ifstream f(std::string(CHISUM_GOLDEN_DIR) + "/bound_compare.csv");
    std::stringstream golden;
    golden << f.rdbuf();
    const auto got = numeric_rows(out), want = numeric_rows(golden.str());
    if (got.size() != 3 || want.size() != 3) {
        fail.add("expected 3 rows");
        return finish(fail, "");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t c = 0; c < want[i].size(); ++c) worst = std::max(worst, std::fabs(got[i][c] - want[i][c]) / std::fabs(want[i][c]));
    if (worst > 1e-9) fail.add("golden mismatch " + fmt(worst));
    // columns: gamma, log_q, main, iwaniec, main/lq^{2/3}, main/lq^{3/4}, iwaniec/lq^{3/4}
    for (const auto& r : got)
        if (!(r[2] < r[3])) fail.add("main threshold not below the older one at gamma " + fmt(r[0]));
    double lo = INFINITY, hi = 0;
    for (const auto& r : got) {
        lo = std::min(lo, r[4]);
        hi = std::max(hi, r[4]);
    }
    if (hi / lo > 1.0 + 1e-9) fail.add("main / (log q)^{2/3} not constant");
    if (!(got[0][5] > got[1][5] && got[1][5] > got[2][5])) fail.add("main / (log q)^{3/4} not decreasing");
    return finish(fail, "golden match to " + fmt(worst) + "; main/(log q)^{2/3} = " + fmt(lo) +
                            ", main/(log q)^{3/4} " + fmt(got[0][5]) + " -> " + fmt(got[2][5]));
}

// 10. Byte-identical CLI output across runs and thread counts.
Outcome determinism() {
    Failures fail;
    const std::vector<std::string> runs = {
        "postnikov-verify --q 2187",
        "postnikov-verify --q 343 --chi primitive:3 --shift-n 2 --s 2",
        "korobov-check --campaign 100",
        "vmvt-count 3 3 12",
        "decompose --q 729 --chi primitive:0 --N 1458 --s 3 --G 0,1/5,2/7",
        "char-sum --q 6561 --chi primitive:5 --M 0 --N 6561",
        "twisted-sum --q 97 --chi primitive:3 --M 0 --N 97 --G 0,1/97",
        "dirichlet-poly --q 9 --chi primitive:0 --M 100 --N 100 --t 5",
        "lfunc-eval --q 243 --chi primitive:7 --sigma 0.6 --t 50",
        "zero-scan --q 243",
        "zfr-params --q 3^30 --eta 0.05",
        "psi-progression --q 27 --a 1 --x 1000000 --h 100000",
        "--xi0 1 --format csv bound-compare",
        "report-all",
    };
    for (const auto& args : runs) {
        int s1 = 0;
        const std::string a = run_cli(args, 4, &s1);
        const std::string b = run_cli(args, 4);
        const std::string c = run_cli(args, 1);
        if (s1 != 0 || a.empty()) fail.add("'" + args + "' failed");
        else if (a != b) fail.add("'" + args + "' differs between runs");
        else if (a != c) fail.add("'" + args + "' differs between 1 and 4 threads");
    }
    return finish(fail, std::to_string(runs.size()) + " commands identical over 2 runs at 4 threads and 1 run at 1 thread");
}

}  // namespace

int main() {
    if (thread_count() < 4) set_thread_count(4);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"postnikov identity", postnikov_identity},
        {"korobov inequality campaign", korobov_campaign_check},
        {"vinogradov oracle equivalence", vinogradov_oracle},
        {"decomposition residual grid", decomposition_grid},
        {"orthogonality and gauss sums", sum_identities},
        {"l-value accuracy", l_accuracy},
        {"zero scan", zero_scan},
        {"primes in progressions", primes_check},
        {"bound-shape comparator", bound_comparator},
        {"cli determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("criterion %zu %s  %s (%.1f s): %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
