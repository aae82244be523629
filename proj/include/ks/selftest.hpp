#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ks {

struct SelfTestResult {
    int passed = 0;
    int failed = 0;
    int unverified = 0; // float-mode claims that were not exactly re-checked
    std::vector<std::string> failures;

    bool ok() const { return failed == 0; }
};

// Bundled battery of worked examples and invariants.  When a lattice-document
// path is given, its contents are checked against the E8 invariants (rank,
// determinant, evenness, positivity), so a corrupted fixture fails by name.
SelfTestResult run_selftest(const std::optional<std::string>& e8_fixture_path = std::nullopt);

} // namespace ks
