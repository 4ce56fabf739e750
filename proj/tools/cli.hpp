#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace treespectra::cli {

struct RunConfig {
  std::string command;
  std::string model_path;
  std::optional<std::string> gamma;
  std::optional<double> energy;
  std::string v = "o";
  std::string w = "o";
  std::vector<std::string> rays;
  std::optional<int> depth;
  std::string band = "full";
  int panels = 64;
  int nodes = 16;
  int points = 101;
  std::string function = "one";
  std::optional<double> tol;
  int threads = 1;
  std::string format = "structured";
  std::uint64_t seed = 0;
  std::size_t samples = 50;
};

enum ExitStatus : int { kOk = 0, kToleranceFailure = 1, kUsageError = 2 };

// Runs one command.  Results go to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (CLI11) into a RunConfig and runs it.
int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace treespectra::cli
