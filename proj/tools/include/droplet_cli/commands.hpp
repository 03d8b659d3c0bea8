#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace droplet::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;
inline constexpr int kNumericalError = 2;

// Entry point shared by the droplet executable and the tests. Results go to
// out, errors to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct OracleCheck {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// The identity table printed by exact-check.
std::vector<OracleCheck> oracle_checks(double a, const std::string& law);

}  // namespace droplet::cli
