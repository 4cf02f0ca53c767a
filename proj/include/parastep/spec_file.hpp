#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "parastep/classify.hpp"

namespace parastep {

/// Settings of a command-line run; a spec file may carry them in "run".
struct RunConfig {
  HPoint z0{0.0, 1.0};
  std::size_t n = 100000;
  double tol = kDefaultEvalTol;
  double eps_beta = kDefaultEpsBeta;
  double zero_threshold = 1e-3;
  /// Plateau window of the empirical verdict; 0 means n / 10.
  std::size_t window = 0;
  std::string output = "parastep";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws SpecError unless n >= 1, tol > 0 and the thresholds are positive.
void check_run_config(const RunConfig& c);

struct MapSpecFile {
  double beta = 0.0;
  MeasureSpec measure;
  RunConfig run;

  friend bool operator==(const MapSpecFile&, const MapSpecFile&) = default;
};

/// Real-valued field: a JSON number or a constant expression such as "pi/4".
/// Infinite ends are accepted only when `allow_infinite`.
double real_field(const nlohmann::json& j, const std::string& path, bool allow_infinite = false);

/// Throws SpecError naming the offending field, e.g. "measure[2].support[1]".
MapSpecFile map_spec_from_json(const nlohmann::json& j, const NumericOptions& opts = {});
MapSpecFile load_map_spec(const std::filesystem::path& file, const NumericOptions& opts = {});

nlohmann::json to_json(const MapSpecFile& s);
nlohmann::json to_json(const RunConfig& c);
nlohmann::json to_json(const Component& c);

nlohmann::json to_json(const Classification& c);
nlohmann::json to_json(const EmpiricalVerdict& v);
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const PommerenkeEstimate& p);

}  // namespace parastep
