#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace osc::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kAssertionFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kResource = 3;

/// Runs `osctool` with argv[1..]; everything normally printed goes to out/err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a,b,c" (rationals), "lo:hi:step" or "lo:hi:Ng" (N geometric points
/// rounded to integers), ascending and without duplicates.
std::vector<mpq_class> parse_grid(const std::string& spec);

/// Config JSON object turned into flags: the subcommand from "command" unless
/// the user names one, then the config flags, then the user's own arguments
/// (which therefore take precedence).
std::vector<std::string> expand_config(const std::string& json_text, const std::vector<std::string>& user_args);

}  // namespace osc::cli
