#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gupdirac {

/// Command-line entry point. Subcommands: classify, levels, wavefunction, qpt, figure1, verify.
/// Returns 0 on success, 1 for physics/numerics errors (and for verify with any FAIL report),
/// 2 for usage errors. Artifacts go to `out` unless --output names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace gupdirac
