#pragma once

#include <string>
#include <vector>

#include "aniso/spec_io.hpp"

namespace aniso {

inline constexpr int kExitHolds = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 3;
inline constexpr int kExitFailure = 4;

int exit_code(Verdict v);

/// Executes one job and writes its artifacts under cfg.out. Returns the exit
/// code; library errors propagate as exceptions.
int run_job(const JobConfig& cfg);

/// `aniso <profile|content|verify|gasket-exact> [flags]`. Never throws.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace aniso
