#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flola/design.hpp"
#include "flola/error.hpp"
#include "flola/sampler.hpp"

// JSON form of SamplerConfig and RunState. The layout is documented in
// docs/state-format.md; new keys may be added, existing ones keep their meaning.

namespace flola::io {

using nlohmann::json;

inline constexpr const char* kStateFormat = "flola-run-state";
inline constexpr int kStateSchemaVersion = 1;

inline std::string scheme_name(InitialScheme::Kind kind) {
  return kind == InitialScheme::Kind::corners_center ? "corners_center" : "latin_hypercube";
}

inline std::string scoring_name(ScoringMode mode) {
  return mode == ScoringMode::hybrid ? "hybrid" : "voronoi_only";
}

inline ScoringMode parse_scoring(const std::string& s) {
  if (s == "hybrid") return ScoringMode::hybrid;
  if (s == "voronoi_only" || s == "voronoi") return ScoringMode::voronoi_only;
  throw ConfigurationError("unknown scoring mode '" + s + "'");
}

inline json config_to_json(const SamplerConfig& c) {
  return {
      {"lower", c.space.lower()},
      {"upper", c.space.upper()},
      {"budget", c.budget},
      {"noise_lambda", c.noise_lambda},
      {"max_neighbors", c.max_neighbors},
      {"mc_points", c.mc_points},
      {"initial", {{"scheme", scheme_name(c.initial.kind)}, {"size", c.initial.point_count(c.space.dim())}}},
      {"scoring", scoring_name(c.scoring)},
  };
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw DataError(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& ex) {
    throw DataError(std::string("bad value for '") + key + "': " + ex.what());
  }
}

inline SamplerConfig config_from_json(const json& j, std::uint64_t seed) {
  SamplerConfig c(DesignSpace(required<std::vector<double>>(j, "lower"),
                              required<std::vector<double>>(j, "upper")));
  c.seed = seed;
  c.budget = required<std::size_t>(j, "budget");
  c.noise_lambda = required<double>(j, "noise_lambda");
  c.max_neighbors = required<std::size_t>(j, "max_neighbors");
  c.mc_points = required<std::size_t>(j, "mc_points");
  c.scoring = parse_scoring(required<std::string>(j, "scoring"));
  const json& init = j.at("initial");
  const auto scheme = required<std::string>(init, "scheme");
  if (scheme == "corners_center")
    c.initial = InitialScheme::corners_center();
  else if (scheme == "latin_hypercube")
    c.initial = InitialScheme::latin_hypercube(required<std::size_t>(init, "size"));
  else
    throw DataError("unknown initial scheme '" + scheme + "'");
  return c;
}

inline json point_to_json(const EvaluatedPoint& p) {
  return {{"x", p.coords}, {"y", p.response}, {"iteration", p.iteration}};
}

inline json state_to_json(const RunState& s) {
  json design = json::array();
  for (const auto& p : s.design.points()) design.push_back(point_to_json(p));
  return {
      {"format", kStateFormat},
      {"schema_version", kStateSchemaVersion},
      {"master_seed", s.config.seed},
      {"config", config_to_json(s.config)},
      {"iteration", s.iteration},
      {"rng", {{"scheme", "splitmix64(master, stream, counter)"}, {"next_pool_counter", s.iteration + 1}}},
      {"initial_points", s.initial_points},
      {"design", design},
      {"pending", s.pending ? json(*s.pending) : json(nullptr)},
  };
}

/// Rebuilds a state; every stored point is re-validated on the way in.
inline RunState state_from_json(const json& j) {
  if (required<std::string>(j, "format") != kStateFormat) throw DataError("not a run-state document");
  if (required<int>(j, "schema_version") > kStateSchemaVersion)
    throw DataError("run-state schema is newer than this build understands");
  RunState s(config_from_json(j.at("config"), required<std::uint64_t>(j, "master_seed")));
  s.iteration = required<std::size_t>(j, "iteration");
  s.initial_points = required<std::vector<Point>>(j, "initial_points");
  for (const auto& p : j.at("design"))
    s.design.append({required<Point>(p, "x"), required<double>(p, "y"), required<std::size_t>(p, "iteration")});
  if (j.contains("pending") && !j.at("pending").is_null()) s.pending = j.at("pending").get<Point>();
  return s;
}

inline json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw DataError("'" + path + "' is not valid JSON: " + ex.what());
  }
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw DataError("failed writing '" + path + "'");
}

inline RunState load_state(const std::string& path) { return state_from_json(read_json(path)); }
inline void save_state(const std::string& path, const RunState& s) { write_json(path, state_to_json(s)); }

}  // namespace flola::io
