#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flola/sampler.hpp"
#include "flola/testbed.hpp"

namespace flola::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Everything `flola run` needs; run.json stores exactly this under "flags".
struct RunOptions {
  std::string function = "peaks";
  std::size_t dim = 2;
  std::size_t budget = 120;
  double noise_lambda = 0.0;
  std::uint64_t seed = 0;
  std::size_t neighbors = 0;   // 0 -> 2d
  std::size_t mc_points = 0;   // 0 -> max(1000, 100 n)
  std::string initial = "default";
  std::size_t initial_size = 0;  // latin_hypercube; 0 -> 5d
  std::string scoring = "hybrid";
  std::vector<double> lower;  // empty -> function default
  std::vector<double> upper;
  std::vector<double> params;  // linear coefficients or quadratic matrix
};

nlohmann::json options_to_json(const RunOptions& o);
RunOptions options_from_json(const nlohmann::json& j);

/// Sampler configuration implied by the options (bounds and defaults resolved).
SamplerConfig make_config(const RunOptions& o);
FunctionSpec make_function(const RunOptions& o);

/// Runs the command line `flola <args...>` and returns its exit status.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flola::cli
