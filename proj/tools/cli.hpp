// cli.hpp: afc_sim command-line front end

#pragma once

#include <ostream>

namespace afc::cli {

/// Parses argv, runs one subcommand and writes its files. Returns 0 on
/// success, 2 on configuration errors and 3 on numerical failures; errors
/// are reported on `err` as a single JSON line.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace afc::cli
