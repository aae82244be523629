#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ks/io.hpp"

namespace ks {

// Orchestration knobs.  Scalar mode, D, precision, and eps live in the period
// document itself; the config carries the machine-side settings.
struct PipelineConfig {
    int guard = 0;                    // dense rank guard; 0 keeps the context default
    int closure_bound = kClosureBound;
    int threads = 1;                  // fan-out for the per-prime bound stage
    int scan_count = 8;               // good primes reported by the sieve
    mpz_class mw = 1;                 // Masser-Wustholz style annihilator constant
    std::vector<mpz_class> exclusions;
    std::optional<std::string> setup_path; // Galois setup document
    std::optional<std::string> out_path;

    void validate() const;
};

// Picard lattice, torus data (or metadata for guarded ranks), sieve report,
// and per-prime bad-prime bounds in one deterministic document.  Errors from
// any stage are rethrown with the stage named.
ordered_json run_pipeline(const PipelineConfig& cfg, const ordered_json& period_doc);

} // namespace ks
