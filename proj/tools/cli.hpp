#pragma once

#include <string>
#include <vector>

namespace ectdim::cli {

/// Exit codes: 0 success, 1 domain/runtime failure, 2 usage errors.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

/// Runs one subcommand (pi-groups, grid, regions, synth, estimate, report)
/// against the given arguments, argv-style without the program name.
/// All numerical work stays in the library; this layer only parses flags,
/// resolves paths and writes artifacts atomically.
int dispatch(const std::vector<std::string>& args);

}  // namespace ectdim::cli
