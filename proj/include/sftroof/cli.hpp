#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sftroof/error.hpp"

namespace sftroof::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kParseError = 2,
  kEmptyShiftExit = 3,
  kZeroEntropyExit = 4,
  kInternalError = 5,
};

struct RunConfig {
  std::filesystem::path input;
  std::optional<double> c;
  double alpha = 0.5;
  std::size_t n_max = 60;
  std::size_t r_max = 200;
  std::size_t m_max = 200;
  double tol = 1e-10;
  bool oracle = false;
  std::filesystem::path out = "sftroof-out";

  // Checks everything except the c bound, which needs the alphabet size.
  void validate() const;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

int exit_code_for(ErrorKind kind);

int cmd_entropy(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_report(const RunConfig& config, std::ostream& out);
// Echoes (n, k, lhs, rhs) for every admissible pair.
int cmd_lemma(const std::vector<double>& values, const std::filesystem::path& out_dir,
              std::ostream& out);

// Parses argv and dispatches; errors go to err.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace sftroof::cli
