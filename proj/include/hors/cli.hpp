#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hors::cli {

/// Version of the structured (JSON) output schema.
inline constexpr int kFormatVersion = 1;

/// Runs the `hors` command line with `args` (program name excluded).
/// Returns 0 on success, 1 on domain errors and 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hors::cli
