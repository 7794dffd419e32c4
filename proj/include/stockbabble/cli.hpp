#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stockbabble/dialogue.hpp"

namespace stockbabble::cli {

// Exit codes shared by the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFallback = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInsufficientData = 3;

// Unicode block sparkline scaled to the min/max of `values`.
std::string sparkline(std::span<const double> values);

// Compact text rendering of a response for terminals.
std::string render_response(const dialogue::ChatResponse& response);

struct ReplOptions {
  bool json = false;  // one ChatResponse JSON document per line, no prompts
};

// Line-oriented chat until EOF, "quit" or "exit". A bare number picks the
// matching suggestion from the previous reply.
int run_repl(const dialogue::Engine& engine, dialogue::Session& session, std::istream& in,
             std::ostream& out, ReplOptions options = {});

// Prints the transcript. Returns kExitFallback when any turn fell back.
int run_demo(const dialogue::Engine& engine, dialogue::Session& session,
             const std::vector<std::string>& script, std::ostream& out, bool verbose = false);

// Six indicators, signals, score and label for one candles CSV.
int run_analyze(const std::filesystem::path& csv, bool json, std::ostream& out, std::ostream& err);

}  // namespace stockbabble::cli
