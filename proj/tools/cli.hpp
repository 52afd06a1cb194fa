#pragma once

#include <iosfwd>

namespace hamcap::cli {

/// Runs one `hamcap` command. Returns 0 on success, 1 when a verification
/// fails and 2 on bad flags or invalid inputs.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace hamcap::cli
