/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "gyrocal/error.h"

#include <ostream>
#include <string>
#include <vector>

namespace gyrocal::cli
{

// Process exit codes, stable per error class.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInput = 2;      // bad flags, config, session or params file
inline constexpr int kExitDegenerate = 3; // pose geometry cannot determine the scale
inline constexpr int kExitEstimation = 4; // sign resolution, fit divergence, failed battery

int ExitCodeFor(ErrorKind kind);

/// Runs one gyrocal command. args excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gyrocal::cli
