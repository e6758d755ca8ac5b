#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "chisum/arith.hpp"
#include "chisum/characters.hpp"
#include "chisum/expsums.hpp"
#include "chisum/lfunc.hpp"
#include "chisum/parallel.hpp"
#include "chisum/postnikov.hpp"
#include "chisum/primes.hpp"
#include "chisum/vinogradov.hpp"

namespace chisum::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace

json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

json RunConfig::to_json() const {
    json c;
    c["epsilon"] = number(parse_rational(constants.epsilon).get_d());
    c["gamma0"] = constants.gamma0;
    c["xi0"] = number(constants.xi0);
    c["c0"] = number(constants.c0);
    c["a"] = number(constants.a);
    c["A"] = number(constants.A);
    c["b"] = number(constants.b);
    c["korobov_residual_constant"] = number(constants.korobov_residual_constant);
    json b;
    b["work_budget"] = number(budgets.work_budget);
    b["max_multisets"] = std::to_string(budgets.max_multisets);
    b["max_points"] = std::to_string(budgets.max_points);
    return {{"constants", c}, {"budgets", b}, {"format", format}, {"seed", std::to_string(seed)}};
}

namespace {

// ---------------------------------------------------------------------------
// argument parsing helpers

FactoredModulus parse_modulus(const std::string& text) {
    BigInt q;
    try {
        q = parse_bigint(text);
    } catch (const std::exception&) {
        throw UsageError("--q: cannot parse '" + text + "'");
    }
    if (q < 1) throw UsageError("--q: modulus must be >= 1");
    return FactoredModulus(q);
}

BigInt parse_integer(const std::string& flag, const std::string& text) {
    try {
        return parse_bigint(text);
    } catch (const std::exception&) {
        throw UsageError(flag + ": cannot parse '" + text + "'");
    }
}

u64 parse_u64(const std::string& flag, const std::string& text) {
    BigInt v = parse_integer(flag, text);
    if (v < 0 || !fits_u64(v)) throw UsageError(flag + ": out of range");
    return to_u64(v);
}

i64 parse_i64(const std::string& flag, const std::string& text) {
    BigInt v = parse_integer(flag, text);
    if (!v.fits_slong_p()) throw UsageError(flag + ": out of range");
    return to_i64(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("'" + path + "': " + e.what());
    }
}

// Index n in mixed radix over the generator orders, the first generator most significant.
DirichletCharacter character_by_index(const FactoredModulus& q, BigInt n) {
    std::vector<std::vector<BigInt>> ex;
    std::vector<BigInt*> flat;
    std::vector<BigInt> orders;
    for (const auto& f : q.factors()) {
        auto basis = unit_group_basis(f.p, f.exponent);
        ex.emplace_back(basis.generators.size());
        for (const auto& o : basis.orders) orders.push_back(o);
    }
    for (auto& comp : ex)
        for (auto& e : comp) flat.push_back(&e);
    for (std::size_t i = flat.size(); i-- > 0;) {
        BigInt r;
        mpz_fdiv_qr(n.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), orders[i].get_mpz_t());
        *flat[i] = r;
    }
    if (n != 0) throw UsageError("--chi: index exceeds phi(q)");
    return DirichletCharacter(q, ex);
}

DirichletCharacter parse_chi(const std::string& spec, const FactoredModulus& q) {
    if (spec == "principal") return DirichletCharacter::principal(q);
    auto colon = spec.find(':');
    std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (!spec.empty() && spec[0] == '@') {
        auto chi = character_from_json(read_json_file(spec.substr(1)));
        if (!(chi.modulus() == q)) throw UsageError("--chi: file modulus differs from --q");
        return chi;
    }
    if (kind == "index") {
        BigInt n = parse_integer("--chi", rest);
        if (n < 0) throw UsageError("--chi: index must be >= 0");
        return character_by_index(q, n);
    }
    if (kind == "primitive") {
        u64 n = parse_u64("--chi", rest);
        auto chars = enumerate_characters(q, true);
        if (n >= chars.size()) throw UsageError("--chi: only " + std::to_string(chars.size()) + " primitive characters");
        return chars[n];
    }
    if (kind == "exp") {
        std::vector<std::vector<BigInt>> ex;
        for (const auto& comp : split(rest, ';')) {
            std::vector<BigInt> e;
            for (const auto& v : split(comp, ',')) e.push_back(parse_integer("--chi", v));
            ex.push_back(std::move(e));
        }
        if (ex.size() != q.factors().size()) throw UsageError("--chi: need one exponent group per prime factor");
        for (std::size_t i = 0; i < ex.size(); ++i)
            if (ex[i].size() != unit_group_basis(q.factors()[i].p, q.factors()[i].exponent).generators.size())
                throw UsageError("--chi: exponent count does not match the unit-group rank");
        return DirichletCharacter(q, ex);
    }
    throw UsageError("--chi: expected principal, index:N, primitive:N, exp:..., or @file");
}

RealPolynomial parse_poly(const std::string& text) {
    if (text.empty()) return RealPolynomial::from_rationals({});
    std::vector<Rational> cs;
    for (const auto& part : split(text, ',')) {
        try {
            cs.push_back(parse_rational(part));
        } catch (const std::exception&) {
            throw UsageError("--G: cannot parse coefficient '" + part + "'");
        }
    }
    return RealPolynomial::from_rationals(cs);
}

json poly_json(const RealPolynomial& G) {
    json a = json::array();
    if (G.is_exact())
        for (const auto& c : G.exact_coefficients()) a.push_back(to_string(c));
    else
        for (double c : G.coefficients()) a.push_back(number(c));
    return a;
}

json chi_json(const DirichletCharacter& chi) {
    json j = to_json(chi);
    j["label"] = chi.label_string();
    j["conductor"] = to_string(conductor(chi));
    return j;
}

json complex_fields(Complex v, const std::string& prefix = "value") {
    return {{prefix + "_re", number(v.real())}, {prefix + "_im", number(v.imag())}, {prefix == "value" ? "abs" : prefix + "_abs", number(std::abs(v))}};
}

json sum_json(const SumResult& r) {
    json j = complex_fields(r.value);
    j["terms"] = std::to_string(r.term_count);
    j["mode"] = r.mode;
    if (r.exact_zero) j["exact_zero"] = *r.exact_zero;
    return j;
}

void merge_into(json& dst, const json& src) {
    for (auto it = src.begin(); it != src.end(); ++it) dst[it.key()] = it.value();
}

// ---------------------------------------------------------------------------
// options per subcommand

struct SumOpts {
    std::string q, chi = "principal", M = "0", N, G;
    double t = 0.0;
    int nu = 0;
    std::string block = "16";
    int s = 2;
};

struct PostnikovOpts {
    std::string q, chi = "all";
    int d = 0;
    std::string shift_n;
    int s = 2;
    int shift_d = 0;
};

struct BoundOpts {
    u64 p = 3;
    std::vector<int> gammas{100, 300, 1000};
    std::string q, N;
};

struct VmvtOpts {
    int k = 0, d = 0;
    std::string P;
};

struct KorobovOpts {
    std::string spec;
    int campaign = 0;
    int max_d = 4;
    u64 max_den = 50, max_P = 25;
    int max_k = 3;
};

struct FordOpts {
    int d = 0;
    std::string P;
    long k = 0;
};

struct LOpts {
    std::string q, chi = "primitive:0";
    double sigma = 1.0, t = 0.0;
};

struct ZeroOpts {
    std::string q;
    double alpha = 0.9, T = 10.0;
    bool no_grid = false;
    int grid_depth = 8;
};

struct ZfrOpts {
    std::string q;
    double eta = 0.05, T = 1.0, M = std::exp(1.0), t = 0.0, c_impl = 1.0;
};

struct PsiOpts {
    std::string q = "1", a = "0", x;
    std::optional<std::string> h;
    double eps = 0.05;
};

struct TrendOpts {
    u64 p = 3;
    int gamma_max = 6;
};

json base_report(const std::string& command, const RunConfig& cfg) {
    return {{"schema", kSchemaVersion}, {"command", command}, {"config", cfg.to_json()}};
}

// ---------------------------------------------------------------------------
// commands

json run_char_sum(const SumOpts& o) {
    auto q = parse_modulus(o.q);
    auto chi = parse_chi(o.chi, q);
    if (o.N.empty()) throw UsageError("--N is required");
    i64 M = parse_i64("--M", o.M);
    u64 N = parse_u64("--N", o.N);
    json j{{"q", to_string(q.value())}, {"chi", chi_json(chi)}, {"M", std::to_string(M)}, {"N", std::to_string(N)}};
    merge_into(j, sum_json(char_sum(chi, M, N)));
    return j;
}

json run_twisted_sum(const SumOpts& o) {
    auto q = parse_modulus(o.q);
    auto chi = parse_chi(o.chi, q);
    i64 M = parse_i64("--M", o.M);
    u64 N = parse_u64("--N", o.N);
    auto G = parse_poly(o.G);
    json j{{"q", to_string(q.value())}, {"chi", chi_json(chi)}, {"M", std::to_string(M)}, {"N", std::to_string(N)}, {"G", poly_json(G)}};
    merge_into(j, sum_json(twisted_sum(chi, M, N, G)));
    return j;
}

json run_dirichlet_poly(const SumOpts& o) {
    auto q = parse_modulus(o.q);
    auto chi = parse_chi(o.chi, q);
    i64 M = parse_i64("--M", o.M);
    u64 N = parse_u64("--N", o.N);
    json j{{"q", to_string(q.value())}, {"chi", chi_json(chi)}, {"M", std::to_string(M)}, {"N", std::to_string(N)}, {"t", number(o.t)}};
    SumResult direct = dirichlet_poly(chi, M, N, o.t);
    merge_into(j, sum_json(direct));
    if (o.nu > 0) {
        if (o.nu < 2) throw UsageError("--taylor-nu must be >= 2");
        CharacterTable table(chi);
        SumResult tay = dirichlet_poly_taylor(table, M, N, o.t, o.nu, parse_u64("--block", o.block));
        j["taylor_nu"] = o.nu;
        merge_into(j, complex_fields(tay.value, "taylor"));
        j["taylor_diff"] = number(std::abs(tay.value - direct.value));
    }
    return j;
}

json run_decompose(const SumOpts& o, const RunConfig& cfg) {
    auto q = parse_modulus(o.q);
    auto chi = parse_chi(o.chi, q);
    i64 M = parse_i64("--M", o.M);
    u64 N = parse_u64("--N", o.N);
    auto G = parse_poly(o.G);
    DecomposeConfig dc;
    dc.residual_constant = cfg.constants.korobov_residual_constant;
    dc.work_budget = cfg.budgets.work_budget;
    DecomposeResult r = decompose(chi, M, N, G, o.s, dc);
    json j{{"q", to_string(q.value())}, {"chi", chi_json(chi)}, {"M", std::to_string(M)}, {"N", std::to_string(N)},
           {"G", poly_json(G)}, {"s", o.s}};
    merge_into(j, complex_fields(r.S, "S"));
    merge_into(j, complex_fields(r.V, "V"));
    merge_into(j, complex_fields(r.reconstruction, "reconstruction"));
    j["residual"] = number(r.residual);
    j["bound"] = number(r.bound);
    j["holds"] = r.holds;
    j["P"] = std::to_string(r.P);
    j["coprime_count"] = std::to_string(r.coprime_count);
    return j;
}

json run_postnikov(const PostnikovOpts& o, const RunConfig& cfg) {
    auto q = parse_modulus(o.q);
    if (q.value() < 2) throw UsageError("--q: modulus must be >= 2");
    const int d = o.d > 0 ? o.d : minimal_postnikov_degree(q);
    std::vector<DirichletCharacter> chars;
    if (o.chi == "all") chars = enumerate_characters(q, true);
    else chars.push_back(parse_chi(o.chi, q));
    json rows = json::array();
    bool all = true;
    for (const auto& chi : chars) {
        PostnikovResult r = find_postnikov(chi, d, cfg.budgets.max_points);
        bool ok = verify_postnikov(chi, d, r.m, cfg.budgets.max_points);
        all = all && ok;
        rows.push_back({{"label", chi.label_string()}, {"m", to_string(r.m)}, {"m_reduced", to_string(r.m_reduced)},
                        {"points_checked", std::to_string(r.points_checked)}, {"verified", ok}});
    }
    json j{{"q", to_string(q.value())}, {"d", d}, {"minimal_degree", minimal_postnikov_degree(q)},
           {"coprime_lcm", to_string(coprime_lcm(q, d))}, {"characters", rows.size()}, {"results", rows}, {"all_verified", all}};
    json fd = json::array();
    for (const auto& c : fd_coefficients(d)) fd.push_back(to_string(c));
    j["fd_coefficients"] = fd;
    if (!o.shift_n.empty()) {
        if (chars.size() != 1) throw UsageError("--shift-n needs a single --chi");
        BigInt n = parse_integer("--shift-n", o.shift_n);
        const int sd = o.shift_d > 0 ? o.shift_d : d;
        auto f = shifted_poly(chars[0], n, o.s, sd);
        json coeffs = json::array();
        for (int r = 1; r <= f.degree; ++r) {
            json row{{"r", r}, {"alpha", to_string(f.coefficient(r))}};
            json vals = json::object();
            for (const auto& pf : q.factors()) {
                vals[std::to_string(pf.p)] = {{"actual", valuation(f.denominator(r), pf.p)},
                                              {"predicted", predicted_denominator_valuation(q, pf.p, r, o.s)}};
            }
            row["denominator_valuations"] = vals;
            coeffs.push_back(row);
        }
        j["shifted"] = {{"n", to_string(f.n)}, {"n_bar", to_string(f.n_bar)}, {"s", f.s}, {"m", to_string(f.m)},
                        {"script_L", script_L(q.gamma_max())}, {"integer_tail_start", f.integer_tail_start()},
                        {"coefficients", coeffs}};
    }
    return j;
}

std::string csv_number(double v) { return number(v).dump(); }

json threshold_rows_json(const std::vector<ThresholdRow>& rows) {
    json out = json::array();
    for (const auto& r : rows)
        out.push_back({{"gamma", r.gamma}, {"log_q", number(r.log_q)}, {"main_log_N", number(r.main_log_N)},
                       {"iwaniec_log_N", number(r.iwaniec_log_N)}, {"main_over_two_thirds", number(r.main_over_two_thirds)},
                       {"main_over_three_quarters", number(r.main_over_three_quarters)},
                       {"iwaniec_over_three_quarters", number(r.iwaniec_over_three_quarters)}});
    return out;
}

json ledger_json(const FactoredModulus& q, const BigInt& N, const RunConfig& cfg) {
    BoundConfig bc;
    bc.epsilon = parse_rational(cfg.constants.epsilon);
    bc.gamma0 = cfg.constants.gamma0;
    bc.xi0 = cfg.constants.xi0;
    BoundParameters bp = bound_parameters(q, N, bc);
    json j{{"q", to_string(q.value())}, {"N", to_string(N)}, {"rho", number(bp.rho)}, {"mu", number(bp.mu)},
           {"eps_gamma_over_rho", number(bp.eps_gamma_over_rho)}, {"s", bp.s}, {"d0", bp.d0}, {"d", bp.d},
           {"script_L", bp.script_L}, {"gamma", bp.gamma}, {"diagnostics", bp.diagnostics}};
    const double lq = q.log(), lN = log_of(N);
    j["main_bound_log"] = number(main_bound_log(lq, lN, cfg.constants.xi0));
    if (bp.rho > 1.0) j["iwaniec_bound_log"] = number(iwaniec_bound_log(lq, lN, cfg.constants.a, cfg.constants.xi0));
    return j;
}

json run_bound_compare(const BoundOpts& o, const RunConfig& cfg, std::string* csv) {
    auto rows = compare_thresholds(o.p, o.gammas, cfg.constants.a, cfg.constants.xi0);
    bool ordered = true;
    for (const auto& r : rows) ordered = ordered && r.main_log_N < r.iwaniec_log_N;
    json j{{"p", std::to_string(o.p)}, {"rows", threshold_rows_json(rows)}, {"main_strictly_smaller", ordered}};
    if (!o.q.empty() || !o.N.empty()) {
        if (o.q.empty() || o.N.empty()) throw UsageError("--q and --N go together");
        j["ledger"] = ledger_json(parse_modulus(o.q), parse_integer("--N", o.N), cfg);
    }
    if (csv) {
        std::ostringstream s;
        s << "# schema=" << kSchemaVersion << " command=bound-compare\n";
        s << "# config=" << cfg.to_json().dump() << "\n";
        s << "gamma,log_q,main_log_N,iwaniec_log_N,main_over_two_thirds,main_over_three_quarters,iwaniec_over_three_quarters\n";
        for (const auto& r : rows)
            s << r.gamma << ',' << csv_number(r.log_q) << ',' << csv_number(r.main_log_N) << ',' << csv_number(r.iwaniec_log_N)
              << ',' << csv_number(r.main_over_two_thirds) << ',' << csv_number(r.main_over_three_quarters) << ','
              << csv_number(r.iwaniec_over_three_quarters) << '\n';
        *csv = s.str();
    }
    return j;
}

json run_vmvt(const VmvtOpts& o, const RunConfig& cfg) {
    u64 P = parse_u64("P", o.P);
    CountConfig cc;
    cc.max_multisets = cfg.budgets.max_multisets;
    BigInt N = count_vinogradov(o.k, o.d, P, cc);
    return {{"k", o.k}, {"d", o.d}, {"P", std::to_string(P)}, {"N", to_string(N)}, {"multisets", to_string(multiset_count(o.k, P))}};
}

json korobov_json(const KorobovReport& r, const std::vector<std::string>& coeffs) {
    json ap = json::array();
    for (const auto& a : r.approximations) ap.push_back({{"a", to_string(a.a)}, {"b", to_string(a.b)}, {"theta", number(a.theta)}});
    return {{"k", r.k}, {"d", r.d}, {"P", std::to_string(r.P)}, {"coefficients", coeffs}, {"Q", to_string(r.Q)},
            {"log_W", number(r.log_W)}, {"N", to_string(r.N)}, {"S_abs", number(r.S_abs)}, {"lhs_log", number(r.lhs_log)},
            {"rhs_log", number(r.rhs_log)}, {"holds", r.holds}, {"approximations", ap}};
}

KorobovCoefficient coefficient_from_json(const json& c) {
    KorobovCoefficient out;
    if (c.is_string()) {
        out.exact = parse_rational(c.get<std::string>());
        out.value = out.exact->get_d();
    } else if (c.is_number()) {
        out.value = c.get<double>();
    } else {
        throw UsageError("korobov spec: coefficients must be strings or numbers");
    }
    return out;
}

json run_korobov(const KorobovOpts& o, const RunConfig& cfg) {
    CountConfig cc;
    cc.max_multisets = cfg.budgets.max_multisets;
    json reports = json::array();
    bool all = true;
    auto run_instance = [&](const std::vector<KorobovCoefficient>& g, int k, u64 P, const std::vector<std::string>& labels) {
        KorobovReport r = korobov_check(g, k, P, cc);
        all = all && r.holds;
        reports.push_back(korobov_json(r, labels));
    };
    auto run_campaign = [&](u64 seed, int count, int max_d, u64 max_den, u64 max_P, int max_k) {
        for (const auto& inst : korobov_campaign(seed, count, max_d, max_den, max_P, max_k)) {
            std::vector<KorobovCoefficient> g;
            std::vector<std::string> labels;
            for (const auto& c : inst.coefficients) {
                KorobovCoefficient kc;
                kc.exact = c;
                kc.value = c.get_d();
                g.push_back(kc);
                labels.push_back(to_string(c));
            }
            run_instance(g, inst.k, inst.P, labels);
        }
    };
    json j;
    if (!o.spec.empty()) {
        json spec = read_json_file(o.spec);
        try {
            if (spec.contains("campaign")) {
                const json& c = spec["campaign"];
                run_campaign(c.value("seed", cfg.seed), c.value("count", 100), c.value("max_d", 4), c.value("max_den", u64{50}),
                             c.value("max_P", u64{25}), c.value("max_k", 3));
            } else {
                json list = spec.contains("instances") ? spec["instances"] : json::array({spec});
                for (const auto& inst : list) {
                    std::vector<KorobovCoefficient> g;
                    std::vector<std::string> labels;
                    for (const auto& c : inst.at("coefficients")) {
                        g.push_back(coefficient_from_json(c));
                        labels.push_back(c.is_string() ? c.get<std::string>() : number(c.get<double>()).dump());
                    }
                    if (inst.contains("approximations")) {
                        const auto& aps = inst["approximations"];
                        if (aps.size() != g.size()) throw UsageError("korobov spec: one approximation per coefficient");
                        for (std::size_t i = 0; i < g.size(); ++i) {
                            RationalApprox ap;
                            ap.a = parse_bigint(aps[i].at("a").get<std::string>());
                            ap.b = parse_bigint(aps[i].at("b").get<std::string>());
                            ap.theta = aps[i].value("theta", 0.0);
                            g[i].approx = ap;
                        }
                    }
                    run_instance(g, inst.at("k").get<int>(), inst.at("P").get<u64>(), labels);
                }
            }
        } catch (const json::exception& e) {
            throw UsageError(std::string("korobov spec: ") + e.what());
        }
        j["source"] = "spec";
    } else if (o.campaign > 0) {
        run_campaign(cfg.seed, o.campaign, o.max_d, o.max_den, o.max_P, o.max_k);
        j["source"] = "campaign";
    } else {
        throw UsageError("korobov-check needs --spec FILE or --campaign COUNT");
    }
    j["instances"] = reports.size();
    j["reports"] = reports;
    j["all_hold"] = all;
    return j;
}

json run_ford(const FordOpts& o) {
    u64 P = parse_u64("--P", o.P);
    json j{{"d", o.d}, {"P", std::to_string(P)}};
    if (o.k > 0) {
        j["k"] = o.k;
        j["log_bound"] = number(ford_bound_log(o.d, P, o.k));
        return j;
    }
    FordSearch f = ford_k_search(o.d, P);
    j["k"] = f.k;
    j["log_bound"] = number(f.log_bound);
    j["k_min"] = f.k_min;
    j["k_max"] = f.k_max;
    j["guarantee_applies"] = f.guarantee_applies;
    return j;
}

json run_lfunc(const LOpts& o) {
    auto q = parse_modulus(o.q);
    auto chi = parse_chi(o.chi, q);
    const Complex s(o.sigma, o.t);
    json j{{"q", to_string(q.value())}, {"chi", chi_json(chi)}, {"sigma", number(o.sigma)}, {"t", number(o.t)}};
    const Complex L = l_value(chi, s);
    merge_into(j, complex_fields(L, "L"));
    merge_into(j, complex_fields(l_derivative(chi, s), "dL"));
    if (!chi.is_principal()) {
        const Complex S = l_value_series(chi, s);
        merge_into(j, complex_fields(S, "series"));
        j["path_diff"] = number(std::abs(S - L));
    }
    return j;
}

json run_zero_scan(const ZeroOpts& o) {
    auto q = parse_modulus(o.q);
    ZeroCountResult r = zero_count_rectangle(q, o.alpha, o.T);
    json per = json::array();
    for (long c : r.per_character) per.push_back(c);
    json j{{"q", to_string(q.value())}, {"alpha", number(o.alpha)}, {"T", number(o.T)}, {"count", r.count},
           {"per_character", per}, {"characters", r.characters}, {"alpha_used", number(r.alpha_used)},
           {"perturbation", number(r.perturbation)}, {"panels", r.panels}, {"max_snap_error", number(r.max_snap_error)}};
    if (!o.no_grid) {
        GridScanResult g = grid_lower_bound_scan(q, o.alpha, o.T, o.grid_depth);
        j["grid"] = {{"certified", g.certified}, {"min_abs_L", number(g.min_abs_L)}, {"cells", g.cells},
                     {"uncertified", g.uncertified}, {"max_depth", g.max_depth}};
        j["confirmed"] = r.count == 0 && g.certified;
    }
    return j;
}

json run_zfr(const ZfrOpts& o, const RunConfig& cfg) {
    auto q = parse_modulus(o.q);
    ZeroFreeRegionParams z = zero_free_params(q, o.eta, o.T, o.M, cfg.constants.A);
    json zj{{"eta", number(z.eta)}, {"T", number(z.T)}, {"M_bound", number(z.M_bound)}, {"vartheta", number(z.vartheta)},
            {"lhs", number(z.lhs)}, {"rhs_as_printed", number(z.rhs_as_printed)}, {"rhs_corrected", number(z.rhs_corrected)},
            {"etacond_holds_as_printed", z.etacond_holds_as_printed}, {"etacond_holds_corrected", z.etacond_holds_corrected},
            {"A_shape", number(z.A_shape)}};
    zj["vartheta_shape"] = z.vartheta_shape ? number(*z.vartheta_shape) : json(nullptr);

    json t3;
    if (o.eta < 0.5) {
        Theorem3Result r = theorem3_bound(q, o.eta, o.t, o.c_impl);
        t3 = {{"ell", number(r.ell)}, {"terms", {number(r.terms[0]), number(r.terms[1]), number(r.terms[2])}},
              {"dominant", theorem3_term_name(r.dominant)}, {"log_bound", number(r.log_bound)}, {"c_impl", number(r.c_impl)}};
    }
    Lemma8Constants lc{cfg.constants.gamma0, cfg.constants.xi0, cfg.constants.c0};
    const double log_Y = lemma8_log_Y(q, o.eta, o.t, cfg.constants.A);
    Lemma8Result l8 = lemma8_check(q, log_Y, o.eta, o.t, lc);
    json l8j{{"log_Y", number(l8.log_Y)}, {"ell", number(l8.ell)}, {"eta_ceiling", number(l8.eta_ceiling)},
             {"y_condition", l8.y_condition}, {"eta_condition", l8.eta_condition}, {"valid", l8.valid},
             {"log_bound", number(l8.log_bound)}};
    EllContext ec = ell_context(q, o.t);
    return {{"q", to_string(q.value())}, {"t", number(o.t)}, {"zfr", zj}, {"theorem3", t3}, {"lemma8", l8j},
            {"ell_context", {{"ell", number(ec.ell)}, {"log_Z", number(ec.log_Z)}}}};
}

json run_psi(const PsiOpts& o, const RunConfig& cfg) {
    u64 q = parse_u64("--q", o.q);
    if (q < 1) throw UsageError("--q must be >= 1");
    i64 a = parse_i64("--a", o.a);
    if (o.x.empty()) throw UsageError("--x is required");
    u64 x = parse_u64("--x", o.x);
    if (o.h) {
        u64 h = parse_u64("--h", *o.h);
        PsiReport r = short_interval_check(q, a, x, h, cfg.constants.b, o.eps, cfg.constants.c0);
        return {{"q", std::to_string(r.q)}, {"a", std::to_string(r.a)}, {"x", std::to_string(x)}, {"h", std::to_string(h)},
                {"b", number(r.b)}, {"eps", number(r.eps)}, {"c0", number(r.c0)}, {"psi_x", number(r.psi_x)},
                {"psi_x_plus_h", number(r.psi_x_plus_h)}, {"delta_psi", number(r.delta_psi)}, {"main_term", number(r.main_term)},
                {"rel_error", number(r.rel_error)}, {"theorem5_error_shape", number(r.theorem5_error_shape)},
                {"window", {{"lower_ok", r.lower_window_ok}, {"upper_ok", r.upper_window_ok}, {"modulus_ok", r.modulus_window_ok},
                            {"holds", r.window_holds}}},
                {"empty_interval", r.empty_interval}};
    }
    json j{{"q", std::to_string(q)}, {"a", std::to_string(a)}, {"x", std::to_string(x)}, {"psi", number(psi_progression(static_cast<double>(x), q, a))}};
    if (x <= 100000) {
        json terms = json::array();
        for (const auto& [p, c] : psi_progression_exact(x, q, a).terms) terms.push_back({std::to_string(p), std::to_string(c)});
        j["exact_terms"] = terms;
    }
    return j;
}

json run_trend(const TrendOpts& o) {
    json rows = json::array();
    for (const auto& r : l1_trend(o.p, o.gamma_max))
        rows.push_back({{"gamma", r.gamma}, {"q", to_string(r.q)}, {"characters", r.characters}, {"max_abs", number(r.max_abs)},
                        {"min_abs", number(r.min_abs)}, {"scale", number(r.scale)}, {"max_ratio", number(r.max_ratio)}});
    return {{"p", std::to_string(o.p)}, {"rows", rows}};
}

json run_report_all(const RunConfig& cfg) {
    json reports;
    {
        SumOpts o;
        o.q = "9";
        o.N = "9";
        reports["char-sum"] = run_char_sum(o);
    }
    {
        SumOpts o;
        o.q = "97";
        o.chi = "primitive:0";
        o.N = "97";
        o.G = "0,1/97";
        reports["twisted-sum"] = run_twisted_sum(o);
    }
    {
        SumOpts o;
        o.q = "9";
        o.chi = "primitive:0";
        o.M = "100";
        o.N = "100";
        o.t = 5.0;
        o.nu = 12;
        reports["dirichlet-poly"] = run_dirichlet_poly(o);
    }
    {
        SumOpts o;
        o.q = "27";
        o.chi = "primitive:0";
        o.N = "200";
        o.s = 2;
        reports["decompose"] = run_decompose(o, cfg);
    }
    {
        PostnikovOpts o;
        o.q = "243";
        reports["postnikov-verify"] = run_postnikov(o, cfg);
    }
    {
        BoundOpts o;
        reports["bound-compare"] = run_bound_compare(o, cfg, nullptr);
    }
    {
        VmvtOpts o{2, 2, "3"};
        reports["vmvt-count"] = run_vmvt(o, cfg);
    }
    {
        KorobovOpts o;
        o.campaign = 100;
        reports["korobov-check"] = run_korobov(o, cfg);
    }
    {
        FordOpts o{3, "1000", 0};
        reports["ford-bound"] = run_ford(o);
    }
    {
        LOpts o;
        o.q = "3";
        reports["lfunc-eval"] = run_lfunc(o);
    }
    {
        ZeroOpts o;
        o.q = "27";
        reports["zero-scan"] = run_zero_scan(o);
    }
    {
        ZfrOpts o;
        o.q = "3^30";
        o.eta = 0.05;
        o.M = std::pow(30.0 * std::log(3.0), 10.0);
        reports["zfr-params"] = run_zfr(o, cfg);
    }
    {
        PsiOpts o;
        o.q = "27";
        o.a = "1";
        o.x = "1000000";
        o.h = "100000";
        reports["psi-progression"] = run_psi(o, cfg);
    }
    reports["l1-trend"] = run_trend(TrendOpts{});
    return {{"reports", reports}};
}

void validate(const RunConfig& cfg) {
    Rational eps;
    try {
        eps = parse_rational(cfg.constants.epsilon);
    } catch (const std::exception&) {
        throw UsageError("--epsilon: cannot parse '" + cfg.constants.epsilon + "'");
    }
    const auto& c = cfg.constants;
    auto positive = [](const char* name, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string("--") + name + " must be positive");
    };
    if (eps <= 0) throw UsageError("--epsilon must be positive");
    if (c.gamma0 <= 0) throw UsageError("--gamma0 must be positive");
    positive("xi0", c.xi0);
    positive("c0", c.c0);
    positive("a-iwaniec", c.a);
    positive("A-shape", c.A);
    positive("b", c.b);
    positive("residual-constant", c.korobov_residual_constant);
    positive("work-budget", cfg.budgets.work_budget);
    if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Character sums modulo prime powers: exact checks and numerical experiments", "chisum"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print this help message and exit");  // -h is taken by --h
    app.set_config("--config", "", "INI or TOML file with option values (flags override it)");

    RunConfig cfg;
    int threads = 0;
    app.add_option("--epsilon", cfg.constants.epsilon, "epsilon of the parameter ledger (rational)")->capture_default_str();
    app.add_option("--gamma0", cfg.constants.gamma0, "gamma_0")->capture_default_str();
    app.add_option("--xi0", cfg.constants.xi0, "xi_0")->capture_default_str();
    app.add_option("--c0", cfg.constants.c0, "c_0")->capture_default_str();
    app.add_option("--a-iwaniec", cfg.constants.a, "exponent constant a of the older bound")->capture_default_str();
    app.add_option("--A-shape", cfg.constants.A, "shape constant A")->capture_default_str();
    app.add_option("--b", cfg.constants.b, "short-interval exponent b")->capture_default_str();
    app.add_option("--residual-constant", cfg.constants.korobov_residual_constant, "decomposition residual constant")
        ->capture_default_str();
    app.add_option("--work-budget", cfg.budgets.work_budget, "decomposition work budget")->capture_default_str();
    app.add_option("--max-multisets", cfg.budgets.max_multisets, "Vinogradov count budget")->capture_default_str();
    app.add_option("--max-points", cfg.budgets.max_points, "Postnikov verification budget")->capture_default_str();
    app.add_option("--format", cfg.format, "json or csv")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for randomized campaigns")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (overrides CHISUM_THREADS)");

    SumOpts sum_o;
    auto add_sum = [&](const char* name, const char* help) {
        auto* sc = app.add_subcommand(name, help);
        sc->add_option("--q", sum_o.q, "modulus (decimal or p^e)")->required();
        sc->add_option("--chi", sum_o.chi, "principal | index:N | primitive:N | exp:e1,e2;... | @file.json")->capture_default_str();
        sc->add_option("--M", sum_o.M, "offset M")->capture_default_str();
        sc->add_option("--N", sum_o.N, "length N")->required();
        return sc;
    };
    auto* c_char = add_sum("char-sum", "sum of chi(n) over M < n <= M + N");
    auto* c_twist = add_sum("twisted-sum", "sum of chi(n) e(G(n))");
    c_twist->add_option("--G", sum_o.G, "coefficients of G, constant term first, comma separated");
    auto* c_dpoly = add_sum("dirichlet-poly", "sum of chi(n) n^{it}");
    c_dpoly->add_option("--t", sum_o.t, "t")->required();
    c_dpoly->add_option("--taylor-nu", sum_o.nu, "also evaluate through the Taylor device of order nu");
    c_dpoly->add_option("--block", sum_o.block, "Taylor block length")->capture_default_str();
    auto* c_dec = add_sum("decompose", "shift decomposition and its residual");
    c_dec->add_option("--G", sum_o.G, "coefficients of G, constant term first");
    c_dec->add_option("--s", sum_o.s, "shift exponent s >= 2")->capture_default_str();

    PostnikovOpts pk_o;
    auto* c_pk = app.add_subcommand("postnikov-verify", "find and verify the polynomial representation of characters");
    c_pk->add_option("--q", pk_o.q, "modulus")->required();
    c_pk->add_option("--chi", pk_o.chi, "all (every primitive character) or a character spec")->capture_default_str();
    c_pk->add_option("--d", pk_o.d, "degree (default: least admissible)");
    c_pk->add_option("--shift-n", pk_o.shift_n, "also report the shifted polynomial at n");
    c_pk->add_option("--s", pk_o.s, "shift exponent for --shift-n")->capture_default_str();
    c_pk->add_option("--shift-d", pk_o.shift_d, "degree of the shifted polynomial");

    BoundOpts bd_o;
    auto* c_bd = app.add_subcommand("bound-compare", "nontriviality thresholds of the two bounds");
    c_bd->add_option("--p", bd_o.p, "prime")->capture_default_str();
    c_bd->add_option("--gammas", bd_o.gammas, "exponents")->delimiter(',')->capture_default_str();
    c_bd->add_option("--q", bd_o.q, "also print the parameter ledger for this q");
    c_bd->add_option("--N", bd_o.N, "length for the ledger");

    VmvtOpts vm_o;
    auto* c_vm = app.add_subcommand("vmvt-count", "exact Vinogradov mean-value count N_{k,d}(P)");
    c_vm->add_option("k", vm_o.k)->required()->check(CLI::Range(1, 20));
    c_vm->add_option("d", vm_o.d)->required()->check(CLI::PositiveNumber);
    c_vm->add_option("P", vm_o.P)->required();

    KorobovOpts kb_o;
    auto* c_kb = app.add_subcommand("korobov-check", "double-sum inequality with exact mean-value counts");
    c_kb->add_option("--spec", kb_o.spec, "JSON instance file");
    c_kb->add_option("--campaign", kb_o.campaign, "number of seeded random instances");
    c_kb->add_option("--max-d", kb_o.max_d)->capture_default_str();
    c_kb->add_option("--max-den", kb_o.max_den)->capture_default_str();
    c_kb->add_option("--max-P", kb_o.max_P)->capture_default_str();
    c_kb->add_option("--max-k", kb_o.max_k)->capture_default_str();

    FordOpts fd_o;
    auto* c_fd = app.add_subcommand("ford-bound", "mean-value upper bound over k");
    c_fd->add_option("--d", fd_o.d)->required()->check(CLI::PositiveNumber);
    c_fd->add_option("--P", fd_o.P)->required();
    c_fd->add_option("--k", fd_o.k, "fixed k (default: scan)");

    LOpts l_o;
    auto* c_l = app.add_subcommand("lfunc-eval", "L(s, chi) and L'(s, chi)");
    c_l->add_option("--q", l_o.q)->required();
    c_l->add_option("--chi", l_o.chi)->capture_default_str();
    c_l->add_option("--sigma", l_o.sigma)->capture_default_str();
    c_l->add_option("--t", l_o.t)->capture_default_str();

    ZeroOpts z_o;
    auto* c_z = app.add_subcommand("zero-scan", "zeros of all nonprincipal L mod q in [alpha, 1] x [-T, T]");
    c_z->add_option("--q", z_o.q)->required();
    c_z->add_option("--alpha", z_o.alpha)->capture_default_str();
    c_z->add_option("--T", z_o.T)->capture_default_str();
    c_z->add_flag("--no-grid", z_o.no_grid, "skip the independent |L| lower-bound scan");
    c_z->add_option("--grid-depth", z_o.grid_depth)->capture_default_str();

    ZfrOpts zf_o;
    auto* c_zf = app.add_subcommand("zfr-params", "zero-free-region parameters and L-bound evaluators");
    c_zf->add_option("--q", zf_o.q)->required();
    c_zf->add_option("--eta", zf_o.eta)->capture_default_str();
    c_zf->add_option("--T", zf_o.T)->capture_default_str();
    c_zf->add_option("--M", zf_o.M)->capture_default_str();
    c_zf->add_option("--t", zf_o.t)->capture_default_str();
    c_zf->add_option("--c-impl", zf_o.c_impl)->capture_default_str();

    PsiOpts ps_o;
    auto* c_ps = app.add_subcommand("psi-progression", "psi(x; q, a), or the short-interval comparison with --h");
    c_ps->add_option("--q", ps_o.q)->capture_default_str();
    c_ps->add_option("--a", ps_o.a)->capture_default_str();
    c_ps->add_option("--x", ps_o.x)->required();
    c_ps->add_option("--h", ps_o.h);
    c_ps->add_option("--eps", ps_o.eps)->capture_default_str();

    auto* c_all = app.add_subcommand("report-all", "fixed suite of every report");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        validate(cfg);
        if (threads > 0) set_thread_count(static_cast<unsigned>(threads));
        const bool csv = cfg.format == "csv";
        if (csv && !c_bd->parsed()) throw UsageError("--format csv is only available for bound-compare");

        std::string name = app.get_subcommands().front()->get_name();
        json body;
        std::string csv_text;
        if (c_char->parsed()) body = run_char_sum(sum_o);
        else if (c_twist->parsed()) body = run_twisted_sum(sum_o);
        else if (c_dpoly->parsed()) body = run_dirichlet_poly(sum_o);
        else if (c_dec->parsed()) body = run_decompose(sum_o, cfg);
        else if (c_pk->parsed()) body = run_postnikov(pk_o, cfg);
        else if (c_bd->parsed()) body = run_bound_compare(bd_o, cfg, csv ? &csv_text : nullptr);
        else if (c_vm->parsed()) body = run_vmvt(vm_o, cfg);
        else if (c_kb->parsed()) body = run_korobov(kb_o, cfg);
        else if (c_fd->parsed()) body = run_ford(fd_o);
        else if (c_l->parsed()) body = run_lfunc(l_o);
        else if (c_z->parsed()) body = run_zero_scan(z_o);
        else if (c_zf->parsed()) body = run_zfr(zf_o, cfg);
        else if (c_ps->parsed()) body = run_psi(ps_o, cfg);
        else if (c_all->parsed()) body = run_report_all(cfg);

        if (csv) {
            out << csv_text;
        } else {
            json report = base_report(name, cfg);
            merge_into(report, body);
            out << report.dump(2) << "\n";
        }
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace chisum::cli
