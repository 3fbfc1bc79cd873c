#pragma once

// Named scenarios behind the command-line tool. Parameters arrive as strings keyed by their
// flag name (angles in degrees) and are resolved against each scenario's key list.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qfoundry/report.hpp"
#include "qfoundry/rng.hpp"

namespace qfoundry::cli {

enum class Format { Json, Csv };

struct ParamSpec {
  std::string key;
  std::string default_value;
  std::string help;
  bool scannable = false;
};

struct ScenarioSpec {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
};

const std::vector<ScenarioSpec>& scenario_specs();
/// Throws ValidationError for an unknown scenario name.
const ScenarioSpec& scenario_spec(const std::string& name);

/// Inclusive lo:hi:step range in the parameter's own units.
struct Scan {
  std::string key;
  double lo;
  double hi;
  double step;

  /// Parses "lo:hi:step"; throws ValidationError naming `key` on malformed input.
  static Scan parse(const std::string& key, const std::string& text);
  std::vector<double> values() const;
};

struct ScenarioConfig {
  std::string scenario;
  std::map<std::string, std::string> params;
  std::optional<Scan> scan;
  std::uint64_t seed = rng::kDefaultSeed;
  Format format = Format::Json;
  std::string output;  ///< empty writes to the given stream
  int jobs = 0;
};

struct Evaluation {
  report::ResultTable table;
  report::Meta meta;
};

/// Throws ValidationError (bad or unknown parameter), ModelInconsistent, ResolutionError or
/// TruncationOverflow. Messages name the offending parameter.
Evaluation evaluate(const ScenarioConfig& config);

/// Evaluates and writes the table. Returns 0 on success, 2 on invalid input, 3 when the
/// Leggett model does not exist for the requested settings, 1 on I/O failure.
int run(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qfoundry::cli
