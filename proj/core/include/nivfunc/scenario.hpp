#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nivfunc/basis.hpp"
#include "nivfunc/dgp.hpp"
#include "nivfunc/rates.hpp"

namespace nivfunc {

/// Invalid or inconsistent experiment configuration (maps to CLI exit 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural-function coefficients scale * j^(-exponent); scale == 0 means
/// "calibrate so the b-weighted norm stays within rho for any truncation".
struct StructuralSpec {
  double exponent = 3.0;
  double scale = 0.0;
};

struct RepresenterSpec {
  enum class Kind { Smooth, Indicator };
  Kind kind = Kind::Smooth;
  double exponent = 2.0;  // smooth family
  double scale = 0.0;     // 0 => calibrate against tau
  double lo = 0.0;        // indicator family
  double hi = 0.5;
};

/// Full experiment configuration. All randomness downstream is a pure
/// function of master_seed.
struct Scenario {
  std::string name = "unnamed";
  WeightConfig weights;
  double sigma = 0.5;
  int J = 25;            // spectrum truncation of the joint model
  double margin = 0.1;   // density lower bound
  StructuralSpec structural;
  RepresenterSpec representer;
  std::vector<long> n_grid = {1000, 2000, 4000, 8000, 16000};
  int reps = 500;
  std::uint64_t master_seed = 0;
  bool seed_set = false;  // master_seed must be given explicitly
  ThresholdMode threshold_mode = ThresholdMode::Theorem;
  double eta = 2.0;       // moment constant for the deviation bound
  int bounds_m = 2;       // fixed dimension of the deviation check
  bool median_of_means = false;

  /// Checks every module precondition this configuration will hit,
  /// including ellipsoid membership of the generated coefficients and
  /// k*(n) <= J across the grid. Throws ConfigError.
  void validate() const;

  JointModel build_model() const;
  /// Structural coefficients, truncated at J.
  CoefVector structural_coefs() const;
  /// Representer coefficients, truncated at J.
  CoefVector representer_coefs() const;
};

/// Named built-in scenarios (also shipped as config files under configs/):
/// poly-rate, poly-parametric, exp-rate, bernstein.
std::optional<Scenario> scenario_preset(const std::string& name);
std::vector<std::string> scenario_preset_names();

}  // namespace nivfunc
