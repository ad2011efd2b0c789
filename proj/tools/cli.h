// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prtvol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one command. args[0] is the program name. Returns 0 on success,
/// 1 on a usage error (unknown command, bad flag, missing input file) and
/// 2 when the command itself fails.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prtvol::cli
