#pragma once

#include <ostream>

namespace marlx::tools {

/// Quick oracle suites: analytic-vs-numeric gradients, incremental-vs-direct
/// matrix inverses, and the environment reward tables. Prints pass counts;
/// returns 0 when everything passes.
int run_selftest(std::ostream& out);

}  // namespace marlx::tools
