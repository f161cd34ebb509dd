#pragma once

#include <string>
#include <vector>

namespace nfisac::cli {

/// Entry point behind the executable. Exit codes: 0 success, 2 configuration
/// or usage error, 3 when every realization failed.
int run_main(const std::vector<std::string>& args);

}  // namespace nfisac::cli
