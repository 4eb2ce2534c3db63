#pragma once

#include <map>
#include <string>
#include <vector>

#include "nivfunc/harness.hpp"
#include "nivfunc/scenario.hpp"

namespace nivfunc {

/// key = value lines, '#' comments, blank lines ignored. Unknown keys are
/// rejected later, with the line number, when the map is turned into a
/// Scenario. Throws ConfigError with "path:line:" prefixes.
struct ConfigMap {
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;   // 0 for --set overrides
  std::string source;

  void set(const std::string& key, const std::string& value, int line);
};

ConfigMap parse_config_file(const std::string& path);
ConfigMap parse_config_text(const std::string& text, const std::string& source_name);

/// Applies repeatable "key=value" command-line overrides.
void apply_overrides(ConfigMap& cfg, const std::vector<std::string>& overrides);

/// Validates keys and builds the scenario. A `scenario` key loads a preset
/// first; every other key overrides one field. Throws ConfigError.
Scenario scenario_from_config(const ConfigMap& cfg);

/// Canonical flat key=value rendering; parsing it back reproduces the
/// scenario exactly (closure property used by the summary echo).
std::string canonical_config_text(const Scenario& scenario);

/// Records CSV with the fixed header
///   n,rep,seed,m,alpha,estimate,truth,sq_error,truncated,inv_norm
/// and %.17g floating-point fields.
std::string records_csv(const std::vector<ExperimentRecord>& records);

/// Summary JSON: scenario echo, per-n table, fit (or fit error), theoretical
/// rate, verdicts.
std::string summary_json(const Scenario& scenario, const std::vector<SummaryRow>& table,
                         const RateFit* fit, const std::string& fit_error);

/// Tuning/rate table CSV over the scenario grid:
///   n,k_star,delta_star,implied_triangle,alpha_theorem,alpha_remark,
///   alpha_corollary,theoretical_rate
std::string rates_csv(const Scenario& scenario);

std::string bounds_json(const Scenario& scenario, const DeviationReport& deviation,
                        const BiasReport& bias);

std::string hard_instance_json(const Scenario& scenario, long n, const HardInstance& inst);

void write_file(const std::string& path, const std::string& content);

}  // namespace nivfunc
