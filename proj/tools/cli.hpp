#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bddqsp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line. `args` excludes the program name. Data goes to
/// `out` (or the --out file), diagnostics to `err`, and "-" reads `in`.
int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out,
        std::ostream &err);

} // namespace bddqsp::cli
