#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace nestad::cli {

// Run the command line given args (program name excluded), writing results
// to out and diagnostics to err. Exit codes: 0 on success (NaN/Infinity
// results included), 2 on parse or usage errors, 3 on unbound variables.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace nestad::cli
