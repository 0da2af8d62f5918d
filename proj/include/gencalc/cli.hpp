#pragma once

#include <iosfwd>

namespace gencalc {

/// Entry point of the gencalc tool. Writes a JSON document to out.
/// Returns 0 on success, 2 for an invalid command line or configuration and
/// 1 for a numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gencalc
