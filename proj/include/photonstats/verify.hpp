#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace photonstats {

struct VerifyCheck {
    std::string suite;
    std::string name;
    bool pass = false;
    std::string detail;
};

// Formula-arbitration report: every closed form shipped by the library is
// checked against an independent oracle, and each classical variant that the
// oracles reject is recorded as a note with both values.
struct VerifyReport {
    std::vector<VerifyCheck> checks;
    std::vector<std::string> notes;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Suites: conversions, wishart, photon, estimators, spectral, simulation.
// Empty filter (or "all") runs everything. The seed drives the Monte-Carlo
// checks only.
VerifyReport run_verification(const std::vector<std::string>& suites = {},
                              std::uint64_t seed = 2026);

}  // namespace photonstats
