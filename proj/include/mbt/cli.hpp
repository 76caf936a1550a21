#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mbt::cli {

/// Stable process exit codes, one per error class.
enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kUsage = 2,
  kParse = 3,
  kStructural = 4,
  kNumeric = 5,
  kOptimization = 6,
  kCapacity = 7,
  kIteration = 8,
  kIo = 9,
  kValidation = 10,
};

/// Runs one command line (without the program name). Artifacts go under
/// --out; a manifest.json beside them replays the run.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace mbt::cli
