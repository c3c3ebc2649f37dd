// Copyright 2026 The nedenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace nedenoise::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInternalError = 2;

/// Runs the command line `args` (without the program name). Progress goes to
/// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Directory name stem "<command>-<timestamp>-<seed>" for a run.
std::string run_dir_name(const std::string& command, const std::string& timestamp, std::uint64_t seed);

}  // namespace nedenoise::cli
