#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace thetafix {

/// Exit codes: 0 success / certified / converged, 1 negative verdict, 2 input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitInput = 2;

/// Entry point of the `thetafix` executable; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thetafix
