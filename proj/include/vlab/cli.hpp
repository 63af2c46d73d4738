#pragma once

#include <string>
#include <vector>

namespace vlab {

/// Command-line front door. Subcommands: simulate, rescale, validate,
/// certify, datacheck, report. Exit codes: 0 completed, 2 hypotheses-not-met
/// across all requested certifiers, 3 input error.
int run_cli(const std::vector<std::string>& args);

}  // namespace vlab
