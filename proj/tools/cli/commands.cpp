#include "cli/commands.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "flola/csv.hpp"
#include "flola/noise.hpp"
#include "flola/state_io.hpp"

namespace flola::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kStateFile = "state.json";
constexpr const char* kRunFile = "run.json";
constexpr const char* kSamplesFile = "samples.csv";
constexpr const char* kProposedFile = "proposed.csv";
constexpr const char* kObservedFile = "observed.csv";
constexpr const char* kLockFile = ".flola.lock";

class LockedError : public Error {
 public:
  using Error::Error;
};

/// Exclusive claim on a run directory for the lifetime of the object.
class RunDirLock {
 public:
  explicit RunDirLock(const fs::path& dir) : path_(dir / kLockFile) {
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
      if (errno == EEXIST)
        throw LockedError("run directory '" + dir.string() + "' is in use (remove " + path_.string() +
                          " if no other flola process is running)");
      throw DataError("cannot create lock file " + path_.string() + ": " + std::strerror(errno));
    }
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
    ::close(fd);
  }
  ~RunDirLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  RunDirLock(const RunDirLock&) = delete;
  RunDirLock& operator=(const RunDirLock&) = delete;

 private:
  fs::path path_;
};

std::string version_string() {
  return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
}

void write_samples(const fs::path& path, const Design& design) {
  csv::Table t;
  t.header = csv::coordinate_header(design.dim());
  t.header.push_back("y");
  t.header.push_back("iteration");
  for (const auto& p : design.points()) {
    std::vector<double> row = p.coords;
    row.push_back(p.response);
    row.push_back(static_cast<double>(p.iteration));
    t.rows.push_back(std::move(row));
  }
  csv::write(path.string(), t);
}

void write_scores(const fs::path& dir, const ScoreTable& s) {
  csv::Table t;
  t.header = {"index", "v", "e", "h"};
  for (std::size_t i = 0; i < s.h.size(); ++i)
    t.rows.push_back({static_cast<double>(i), s.v[i], s.e[i], s.h[i]});
  csv::write((dir / ("scores_" + std::to_string(s.iteration) + ".csv")).string(), t);
}

void write_point(const fs::path& path, const Point& x) {
  csv::write(path.string(), {csv::coordinate_header(x.size()), {x}});
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& cell : csv::split(text))
    if (!cell.empty()) out.push_back(csv::parse_double(cell));
  return out;
}

std::string format_list(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += csv::format_double(xs[i]);
  }
  return s;
}

/// Registers the sampler flags shared by `run` and `init`.
void add_sampler_flags(CLI::App* cmd, RunOptions& o, std::string& lower, std::string& upper) {
  cmd->add_option("--dim", o.dim, "Input dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--budget", o.budget, "Total number of evaluations N");
  cmd->add_option("--noise-lambda", o.noise_lambda, "Output noise variance lambda")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--neighbors", o.neighbors, "Neighborhood size cap t_max (0 = 2d)");
  cmd->add_option("--mc-points", o.mc_points, "Monte-Carlo pool size (0 = max(1000, 100 n))");
  cmd->add_option("--initial", o.initial, "Initial design: default, corners_center, latin_hypercube")
      ->check(CLI::IsMember({"default", "corners_center", "latin_hypercube"}));
  cmd->add_option("--initial-size", o.initial_size, "Latin hypercube size (0 = 5d)");
  cmd->add_option("--scoring", o.scoring, "hybrid or voronoi_only")
      ->check(CLI::IsMember({"hybrid", "voronoi_only"}));
  cmd->add_option("--lower", lower, "Comma-separated lower bounds");
  cmd->add_option("--upper", upper, "Comma-separated upper bounds");
}

void apply_bounds(RunOptions& o, const std::string& lower, const std::string& upper) {
  if (!lower.empty()) o.lower = parse_list(lower);
  if (!upper.empty()) o.upper = parse_list(upper);
}

void print_design_summary(std::ostream& out, const Design& d) {
  out << "design: " << d.size() << " points in " << d.dim() << " dimensions\n";
}

Proposal pending_proposal(const RunState& state) {
  if (!state.pending) throw UsageError("no pending proposal");
  return {*state.pending, state.in_initial_phase() ? 0 : state.iteration + 1, std::nullopt};
}

// ---------------------------------------------------------------------------

int cmd_run(const RunOptions& opts, const fs::path& out_dir, std::ostream& out) {
  const SamplerConfig cfg = make_config(opts);
  auto evaluator = make_evaluator(make_function(opts), opts.noise_lambda, opts.seed);
  RunState state = start_run(cfg);

  fs::create_directories(out_dir);
  RunDirLock lock(out_dir);

  json meta = {
      {"format", "flola-run"},
      {"schema_version", 1},
      {"tool", {{"name", "flola"}, {"version", FLOLA_VERSION}, {"eigen", version_string()}}},
      {"master_seed", opts.seed},
      {"noise_seed", opts.seed},
      {"flags", options_to_json(opts)},
      {"config", io::config_to_json(cfg)},
  };

  auto flush = [&](const char* status) {
    write_samples(out_dir / kSamplesFile, state.design);
    io::save_state((out_dir / kStateFile).string(), state);
    meta["status"] = status;
    meta["evaluations"] = state.design.size();
    meta["adaptive_iterations"] = state.iteration;
    io::write_json((out_dir / kRunFile).string(), meta);
  };

  try {
    while (!state.done()) {
      StepResult r = step(state, evaluator);
      if (r.proposal.scores) write_scores(out_dir, *r.proposal.scores);
    }
  } catch (const EvaluationError& e) {
    flush("failed");
    throw;
  }
  flush("complete");
  print_design_summary(out, state.design);
  out << "wrote " << (out_dir / kSamplesFile).string() << "\n";
  return kExitOk;
}

int cmd_init(const RunOptions& opts, const fs::path& dir, std::ostream& out) {
  RunOptions o = opts;
  if (o.lower.empty()) o.lower.assign(o.dim, 0.0);
  if (o.upper.empty()) o.upper.assign(o.dim, 1.0);
  RunState state = start_run(make_config(o));
  fs::create_directories(dir);
  RunDirLock lock(dir);
  if (fs::exists(dir / kStateFile)) throw UsageError("'" + dir.string() + "' already holds a run state");
  io::save_state((dir / kStateFile).string(), state);
  write_samples(dir / kSamplesFile, state.design);
  out << "initialized " << (dir / kStateFile).string() << " (budget " << state.config.budget
      << ", initial design " << state.initial_points.size() << " points)\n";
  return kExitOk;
}

int cmd_ask(const fs::path& dir, std::ostream& out) {
  RunDirLock lock(dir);
  RunState state = io::load_state((dir / kStateFile).string());
  if (!state.pending) {
    Proposal p = next_proposal(state);
    if (p.scores) write_scores(dir, *p.scores);
    state.pending = p.point;
    io::save_state((dir / kStateFile).string(), state);
  }
  write_point(dir / kProposedFile, *state.pending);
  out << "proposed " << format_list(*state.pending) << "\n";
  return kExitOk;
}

int cmd_tell(const fs::path& dir, const fs::path& observed, std::ostream& out, std::ostream& err) {
  RunDirLock lock(dir);
  RunState state = io::load_state((dir / kStateFile).string());
  if (!state.pending) {
    err << "error: no pending proposal; run `flola ask` first\n";
    return kExitRuntime;
  }
  const Point& x = *state.pending;
  const std::size_t d = state.config.space.dim();
  const csv::Table t = csv::read(observed.string());

  std::vector<std::string> header = csv::coordinate_header(d);
  header.push_back("y");
  if (t.header != header) {
    err << "error: " << observed.string() << " header is '" << csv::join(t.header) << "', expected '"
        << csv::join(header) << "'\n";
    return kExitRuntime;
  }
  if (t.rows.size() != 1) {
    err << "error: " << observed.string() << " has " << t.rows.size()
        << " response rows, expected 1 (pending proposal " << format_list(x) << ")\n";
    return kExitRuntime;
  }
  const Point seen(t.rows[0].begin(), t.rows[0].begin() + static_cast<std::ptrdiff_t>(d));
  const Point seen_unit = state.config.space.normalize(seen);
  const Point want_unit = state.config.space.normalize(x);
  if (distance(seen_unit, want_unit) > kDuplicateThreshold) {
    err << "error: observed point does not match the pending proposal\n"
        << "  pending:  " << format_list(x) << "\n"
        << "  observed: " << format_list(seen) << "\n";
    return kExitRuntime;
  }
  commit(state, pending_proposal(state), t.rows[0][d]);
  io::save_state((dir / kStateFile).string(), state);
  write_samples(dir / kSamplesFile, state.design);
  out << "recorded evaluation " << state.design.size() << " of " << state.config.budget << "\n";
  return kExitOk;
}

int cmd_noise_report(std::size_t t_max, const std::vector<double>& lambdas, std::size_t draws,
                     std::uint64_t seed, const fs::path& csv_path, std::ostream& out) {
  if (t_max == 0) throw UsageError("--t-max must be at least 1");
  csv::Table table;
  table.header = {"T", "lambda", "formula_mean", "formula_variance", "mc_mean", "mc_mean_se",
                  "mc_variance", "mc_variance_se", "linearity_mean"};

  char line[256];
  std::snprintf(line, sizeof line, "%3s %8s %12s %12s %12s %10s %12s %10s %12s\n", "T", "lambda", "formula_E[X]",
                "formula_Var", "mc_mean", "mc_se", "mc_var", "mc_var_se", "T*E[zeta]");
  out << line;
  std::uint64_t row = 0;
  for (std::size_t t = 1; t <= t_max; ++t) {
    for (double lambda : lambdas) {
      const double pm = expected_noise_sum_formula(t, lambda);
      const double pv = variance_noise_sum_formula(t, lambda);
      const auto mc = simulate_noise_sum(t, lambda, draws, derive_seed(seed, Stream::noise_report, row++));
      const double lin = static_cast<double>(t) * zeta_stats(lambda).mean;
      table.rows.push_back({static_cast<double>(t), lambda, pm, pv, mc.mean, mc.mean_stderr, mc.variance,
                            mc.variance_stderr, lin});
      std::snprintf(line, sizeof line, "%3zu %8.4g %12.6f %12.6f %12.6f %10.2e %12.6f %10.2e %12.6f\n", t,
                    lambda, pm, pv, mc.mean, mc.mean_stderr, mc.variance, mc.variance_stderr, lin);
      out << line;
    }
  }
  out << "formula_* columns evaluate the printed closed forms; mc_* columns simulate\n"
         "X = sum_i |eps_i - eps_r| directly. The two disagree; see the README.\n";
  if (!csv_path.empty()) {
    if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());
    csv::write(csv_path.string(), table);
    out << "wrote " << csv_path.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------

json options_to_json(const RunOptions& o) {
  return {
      {"function", o.function}, {"dim", o.dim},           {"budget", o.budget},
      {"noise_lambda", o.noise_lambda}, {"seed", o.seed}, {"neighbors", o.neighbors},
      {"mc_points", o.mc_points}, {"initial", o.initial}, {"initial_size", o.initial_size},
      {"scoring", o.scoring},   {"lower", o.lower},       {"upper", o.upper},
      {"params", o.params},
  };
}

RunOptions options_from_json(const json& j) {
  RunOptions o;
  o.function = io::required<std::string>(j, "function");
  o.dim = io::required<std::size_t>(j, "dim");
  o.budget = io::required<std::size_t>(j, "budget");
  o.noise_lambda = io::required<double>(j, "noise_lambda");
  o.seed = io::required<std::uint64_t>(j, "seed");
  o.neighbors = io::required<std::size_t>(j, "neighbors");
  o.mc_points = io::required<std::size_t>(j, "mc_points");
  o.initial = io::required<std::string>(j, "initial");
  o.initial_size = io::required<std::size_t>(j, "initial_size");
  o.scoring = io::required<std::string>(j, "scoring");
  o.lower = io::required<std::vector<double>>(j, "lower");
  o.upper = io::required<std::vector<double>>(j, "upper");
  o.params = io::required<std::vector<double>>(j, "params");
  return o;
}

SamplerConfig make_config(const RunOptions& o) {
  const auto kind = parse_function_kind(o.function);
  if (kind == FunctionSpec::Kind::peaks && o.dim != 2)
    throw ConfigurationError("peaks is two-dimensional; use --dim 2");
  if (o.dim == 0) throw ConfigurationError("--dim must be at least 1");

  std::vector<double> lower = o.lower;
  std::vector<double> upper = o.upper;
  if (lower.empty()) lower.assign(o.dim, kind == FunctionSpec::Kind::peaks ? -3.0 : 0.0);
  if (upper.empty()) upper.assign(o.dim, kind == FunctionSpec::Kind::peaks ? 3.0 : 1.0);
  if (lower.size() != o.dim || upper.size() != o.dim)
    throw ConfigurationError("--lower/--upper need exactly --dim values");

  SamplerConfig cfg(DesignSpace(std::move(lower), std::move(upper)));
  cfg.budget = o.budget;
  cfg.noise_lambda = o.noise_lambda;
  cfg.seed = o.seed;
  cfg.max_neighbors = o.neighbors;
  cfg.mc_points = o.mc_points;
  cfg.scoring = io::parse_scoring(o.scoring);
  if (o.initial == "corners_center")
    cfg.initial = InitialScheme::corners_center();
  else if (o.initial == "latin_hypercube")
    cfg.initial = InitialScheme::latin_hypercube(o.initial_size == 0 ? 5 * o.dim : o.initial_size);
  else if (o.initial != "default")
    throw ConfigurationError("unknown initial design '" + o.initial + "'");
  check_lambda(o.noise_lambda);
  return cfg;
}

FunctionSpec make_function(const RunOptions& o) {
  switch (parse_function_kind(o.function)) {
    case FunctionSpec::Kind::peaks:
      return FunctionSpec::make_peaks();
    case FunctionSpec::Kind::linear: {
      std::vector<double> c = o.params;
      if (c.empty()) {
        c.push_back(1.0);
        for (std::size_t k = 0; k < o.dim; ++k) c.push_back(static_cast<double>(k + 1));
      }
      if (c.size() != o.dim + 1) throw ConfigurationError("linear needs --params with d + 1 values");
      return FunctionSpec::linear(std::move(c));
    }
    case FunctionSpec::Kind::quadratic: {
      std::vector<double> q = o.params;
      if (q.empty()) {
        q.assign(o.dim * o.dim, 0.0);
        for (std::size_t k = 0; k < o.dim; ++k) q[k * o.dim + k] = 1.0;
      }
      if (q.size() != o.dim * o.dim) throw ConfigurationError("quadratic needs --params with d*d values");
      return FunctionSpec::quadratic(std::move(q));
    }
  }
  throw ConfigurationError("unknown function");
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"flola: sequential design with Voronoi exploration and local-linear exploitation"};
  app.name("flola");
  app.require_subcommand(1);
  app.set_version_flag("--version", FLOLA_VERSION);

  RunOptions opts;
  std::string lower, upper, params, from, out_dir;
  auto* run = app.add_subcommand("run", "Sample a built-in test function up to the budget");
  run->add_option("--function", opts.function, "peaks, linear or quadratic")
      ->check(CLI::IsMember({"peaks", "linear", "quadratic"}));
  add_sampler_flags(run, opts, lower, upper);
  run->add_option("--params", params, "Comma-separated linear coefficients or quadratic matrix");
  run->add_option("--from", from, "Replay the flags stored in a run.json")->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();

  RunOptions init_opts;
  init_opts.function = "linear";
  std::string init_lower, init_upper, init_dir;
  auto* init = app.add_subcommand("init", "Create a run directory for ask/tell with an external evaluator");
  add_sampler_flags(init, init_opts, init_lower, init_upper);
  init->add_option("--run-dir", init_dir, "Run directory")->required();

  std::string ask_dir;
  auto* ask = app.add_subcommand("ask", "Write the next point to evaluate into proposed.csv");
  ask->add_option("--run-dir", ask_dir, "Run directory")->required()->check(CLI::ExistingDirectory);

  std::string tell_dir, observed;
  auto* tell = app.add_subcommand("tell", "Record the response in observed.csv and advance the run");
  tell->add_option("--run-dir", tell_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
  tell->add_option("--observed", observed, "Response file (default: <run-dir>/observed.csv)");

  std::size_t t_max = 4;
  std::string lambda_list = "0,0.5,1,2";
  std::size_t draws = 100000;
  std::uint64_t report_seed = 1;
  std::string report_csv = "noise_report.csv";
  auto* report = app.add_subcommand("noise-report", "Printed noise-sum formulas next to Monte-Carlo estimates");
  report->add_option("--t-max", t_max, "Largest neighborhood size T")->check(CLI::PositiveNumber);
  report->add_option("--lambda-list", lambda_list, "Comma-separated noise variances");
  report->add_option("--draws", draws, "Monte-Carlo draws per row")->check(CLI::PositiveNumber);
  report->add_option("--seed", report_seed, "Seed");
  report->add_option("--csv", report_csv, "CSV output path (empty to skip)");

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("flola");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) {
      if (!from.empty()) {
        const json meta = io::read_json(from);
        if (!meta.contains("flags")) throw DataError("'" + from + "' has no flags section");
        opts = options_from_json(meta.at("flags"));
      } else {
        apply_bounds(opts, lower, upper);
        if (!params.empty()) opts.params = parse_list(params);
      }
      return cmd_run(opts, out_dir, out);
    }
    if (*init) {
      apply_bounds(init_opts, init_lower, init_upper);
      if (!init_opts.lower.empty()) init_opts.dim = init_opts.lower.size();
      return cmd_init(init_opts, init_dir, out);
    }
    if (*ask) return cmd_ask(ask_dir, out);
    if (*tell) return cmd_tell(tell_dir, observed.empty() ? fs::path(tell_dir) / kObservedFile : fs::path(observed),
                               out, err);
    if (*report) return cmd_noise_report(t_max, parse_list(lambda_list), draws, report_seed, report_csv, out);
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EvaluationError& e) {
    err << "evaluation failed at " << format_list(e.point()) << ": " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace flola::cli
