#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "helssvr/cli/config.hpp"

namespace helssvr::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitPartialFailure = 1,
  kExitConfigError = 2,
  kExitDataError = 3,
};

int cmd_train(const Config& cfg, std::ostream& out, std::ostream& err);
int cmd_predict(const Config& cfg, std::ostream& out, std::ostream& err);
int cmd_synth(const Config& cfg, std::ostream& out, std::ostream& err);
int cmd_bench(const Config& cfg, std::ostream& out, std::ostream& err);
int cmd_rank(const Config& cfg, std::ostream& out, std::ostream& err);

/// Parses argv, assembles the Config (flag > --config file > default) and runs
/// the selected command, mapping exceptions to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace helssvr::cli
