#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "freeevt/numerics.hpp"

namespace freeevt::cli {

enum class Command { Law, Convolve, Bound, Validate, Table };
enum class Family { Gumbel, Frechet, Weibull, Custom };
enum class Format { Csv, Json };

struct CliConfig {
  Command command = Command::Law;
  Family family = Family::Gumbel;
  std::optional<double> gamma;
  std::optional<int> n;
  std::optional<int> n_max;
  bool free_calculus = true;  // law/convolve: Psi_gamma vs Phi_gamma
  std::vector<double> x;      // law: evaluation points
  std::optional<std::string> input_path;
  std::optional<std::string> input2_path;
  std::optional<double> a;  // custom norming
  std::optional<double> b;
  std::optional<std::string> output_path;
  Format format = Format::Csv;
  numerics::Tolerance tol;
};

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInvalidConfig = 1;
inline constexpr int kParseError = 2;
inline constexpr int kHypothesisViolation = 3;
inline constexpr int kNumericFailure = 4;

// Name of the environment variable holding the default abs/rel tolerance.
inline constexpr const char* kToleranceEnv = "FREEEVT_TOL";

// Runs one command. Results go to config.output_path or `out`, diagnostics
// to `err`.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (command-line errors give kInvalidConfig) and runs.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace freeevt::cli
