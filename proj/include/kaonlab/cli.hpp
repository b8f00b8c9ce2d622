#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kaonlab::cli {

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 1;
inline constexpr int kRuntimeFailure = 2;

/// Runs one subcommand: rates, asymmetry, golden-rule, spectral, generate, fit, study.
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace kaonlab::cli
