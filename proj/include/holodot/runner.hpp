#pragma once

// Scenario dispatch: writes CSV tables and manifest.json into the output
// directory. Exit codes: 0 ok, 1 configuration error, 2 physics failure.

#include "holodot/config.hpp"

#include <string>
#include <vector>

namespace holodot {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitPhysics = 2;

struct Check {
    std::string name;
    bool pass = false;
    double value = 0.0;
};

/// The invariant suite behind the validate scenario.
std::vector<Check> validation_checks(const RunConfig& cfg);

/// Runs the configured scenario. Never throws; errors go to stderr and the
/// manifest.
int run(const RunConfig& cfg);

/// Manifest for a run that failed before a configuration existed (parse
/// errors); written into out_dir.
void write_failure_manifest(const std::string& out_dir, const std::string& error, int exit_code);

const char* artifact_version();

}  // namespace holodot
