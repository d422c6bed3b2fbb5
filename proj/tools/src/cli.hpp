//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TFSAM_TOOLS_CLI_HPP_
#define TFSAM_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace tfsam::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kIoError = 2,
  kLimitExceeded = 3,
};

// Runs one command line (args[0] is the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace tfsam::cli

#endif  // TFSAM_TOOLS_CLI_HPP_
