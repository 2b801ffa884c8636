#pragma once

#include "maxent/quotes.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace maxent::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kRuntimeError = 1, kInvalidInput = 2 };

/// Contents of a quote CSV: rows plus the `#meta` key/value pairs.
struct QuoteFile {
    std::vector<RawQuote> quotes;
    std::map<std::string, double> meta;
};

QuoteFile parse_quote_file(std::istream& in);
QuoteFile read_quote_file(const std::string& path);

/// "a:b:step" (inclusive) or a comma-separated list.
std::vector<double> parse_strike_list(const std::string& spec);

/// Runs one subcommand. Never throws; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace maxent::cli
