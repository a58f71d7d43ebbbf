#pragma once
// Command-line front end. Reports go to `out` as one line of JSON (or CSV with
// --output csv); diagnostics go to `err`.
//
// Exit codes: 0 success, 1 input error, 2 verification failure.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "colposet/json_io.hpp"

namespace colposet {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SelftestConfig {
    std::uint64_t seed = 1;
    std::size_t count = 8; // random bundles
    int max_degree = 3;
};

/// Runs the property suite: random bundles (bicomplex identities, phi, quasi-isomorphism,
/// pages against e2_direct, convergence, long exact sequences), the admissibility families
/// and the Khovanov checks. Deterministic for a fixed config; "ok" is false on any failure.
Json selftest_report(const SelftestConfig& cfg);

} // namespace colposet
