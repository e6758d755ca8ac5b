#pragma once

// Command-line front end. dispatch() is a library call so tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chisum/bigint.hpp"

namespace chisum::cli {

inline constexpr int kSchemaVersion = 1;

/// The effective constants, which the underlying theory leaves unspecified.
struct Constants {
    std::string epsilon = "1/200";
    int gamma0 = 2;
    double xi0 = 1e-4;
    double c0 = 1.0;
    double a = 1.0;  // exponent constant of the older bound
    double A = 1.0;  // shape constant of the zero-free region and of the Y choice
    double b = 2.4;
    double korobov_residual_constant = 10.0;
};

struct Budgets {
    double work_budget = 1e9;
    u64 max_multisets = 50'000'000;
    u64 max_points = 100'000'000;
};

struct RunConfig {
    Constants constants;
    Budgets budgets;
    std::string format = "json";
    u64 seed = 0;

    nlohmann::json to_json() const;
};

/// Runs one command line (program name excluded). Writes the report to `out` only on
/// success and diagnostics to `err`. Returns 0, 2 for usage errors, 1 for computation errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// A double rounded to 15 significant digits; non-finite values become strings.
nlohmann::json number(double v);

}  // namespace chisum::cli
