#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svmscreen::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kUsageError = 2,
  kVerifyFailed = 3,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "0.5xMAX" -> 0.5 * lambda_max; plain numbers pass through. Throws
// std::invalid_argument on anything else.
double resolve_lambda(const std::string& text, double lambda_max);
bool is_lambda_spec(const std::string& text);

}  // namespace svmscreen::cli
