#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "pspkit/arith.hpp"

namespace pspkit::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeError = 1;  // unreadable or malformed input data
inline constexpr int kUsageError = 2;
inline constexpr int kCapacityError = 3;

// Parses a non-negative integer, accepting scientific shorthand such as
// "1e8" or "2.5e6" when the value is integral. Throws DomainError otherwise.
u64 parse_count(const std::string& text);

// Runs one command line (without the program name). Results go to `out`,
// diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pspkit::cli
