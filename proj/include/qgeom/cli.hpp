// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cli.hpp
 * @brief Entry point of the qgeom command line tool.
 *
 * Exit codes: 0 success, 2 invalid input (spec, domain, dimension), 3 a
 * numerical contract was violated, 64 command line usage error.
 */

#pragma once

#include <ostream>

namespace qgeom {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitUsage = 64;

inline constexpr const char* kVersion = "0.1.0";

/// Runs one command; the JSON document goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qgeom
