#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace snipforge {

// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Entry point for the snipforge tool; args[0] is the program name.
// Subcommands: filter, select, generate, evaluate, analyze, stats.
// Diagnostics go to `err`; `out` only carries stats and help text.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace snipforge
