// Command-line front end: roots | sweep | phase-diagram | turning-point |
// sp-closure | rabi-compare.
#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "optodicke/solver.hpp"

namespace optodicke::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitSolverError = 3;

/// Environment variable that overrides the configured worker count.
inline constexpr const char* kWorkersEnv = "OPTODICKE_WORKERS";

enum class Format { Csv, Json };

/// Inclusive grid `min:max:count`.
struct Range {
  double min{0};
  double max{0};
  int count{1};

  std::vector<double> values() const;
};

/// Invalid configuration; `key` is the offending key path (e.g. "solver.tol_root").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct RunConfig {
  ModelParams<double> params;  // defaults omega = omega_a = 1, omega_b = 10, N = 1
  SolverConfig solver;
  std::optional<Range> g_range;
  std::optional<Range> zeta_range;
  int n_max{300};
  double width_tol{1e-3};
  std::string output;           // empty: standard output
  std::string boundary_output;  // phase-diagram boundary samples
  Format format{Format::Csv};
  int workers{1};

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Accepts a number or a "min:max:count" string.
std::variant<double, Range> parse_scalar_or_range(const std::string& text);

RunConfig config_from_json(const nlohmann::json& doc);

/// Reads a JSON config file; unknown keys and invalid values throw ConfigError.
RunConfig load_config(const std::string& path);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Arguments without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optodicke::cli
