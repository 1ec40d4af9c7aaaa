#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>

#include "cbd/coupling.hpp"
#include "cbd/system.hpp"

namespace cbd {

// Strict reader for the system JSON format:
// { "contexts": [ { "id", "contents", "probabilities": {"+-..": "a/b"} } ] }
// Omitted outcomes are zero; duplicate keys anywhere are rejected.
System parse_system(const std::string& text);

std::string serialize_system(const System& system);

// n i.i.d. draws from dist; returns counts/n. Atoms of probability zero are
// never drawn.
ContextDistribution sample_context(const ContextDistribution& dist, std::size_t n,
                                   std::mt19937_64& rng);

// Resamples every context with the same generator (mt19937_64, contexts in
// sorted order), yielding the empirical system.
System simulate_system(const System& system, std::size_t n, std::uint64_t seed);

struct RunConfig {
    std::string command;
    std::string input_path;
    std::string format = "text";
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::size_t max_vars = kDefaultMaxVars;
    std::string out_dir;          // fixtures only
    std::string epsilon = "1/8";  // fixtures only
};

// Executes one CLI command. Returns the process exit status: 0 ok,
// 1 validation/analysis failure, 2 parse or I/O failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cbd
