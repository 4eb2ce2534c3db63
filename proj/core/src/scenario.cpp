#include "nivfunc/scenario.hpp"

#include <cmath>

namespace nivfunc {

void Scenario::validate() const {
  try {
    weights.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario '") + name + "': " + e.what());
  }
  auto fail = [&](const std::string& what) {
    throw ConfigError("scenario '" + name + "': " + what);
  };

  if (!seed_set) fail("master_seed must be set explicitly (no wall-clock fallback)");
  if (sigma < 0.0) fail("sigma must be >= 0");
  if (J < 1) fail("J must be >= 1");
  if (!(margin > 0.0 && margin < 1.0)) fail("margin must lie in (0,1)");
  if (reps < 1) fail("reps must be >= 1");
  if (eta < 1.0) fail("eta must be >= 1");
  if (bounds_m < 1) fail("bounds_m must be >= 1");
  if (n_grid.empty()) fail("n_grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) fail("every n must be >= 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) fail("n_grid must be strictly increasing");
  }
  if (structural.exponent <= 0.5) fail("phi_exponent must exceed 1/2");
  if (structural.scale < 0.0) fail("phi_scale must be >= 0 (0 = auto)");
  if (structural.scale == 0.0 && structural.exponent <= weights.p + 0.5)
    fail("phi_exponent must exceed p + 1/2 for automatic calibration");
  if (representer.kind == RepresenterSpec::Kind::Smooth) {
    if (representer.exponent <= 0.5) fail("rep_exponent must exceed 1/2");
    if (representer.scale < 0.0) fail("rep_scale must be >= 0 (0 = auto)");
    if (representer.scale == 0.0 && representer.exponent <= weights.s + 0.5)
      fail("rep_exponent must exceed s + 1/2 for automatic calibration");
  } else {
    if (!(representer.lo >= 0.0 && representer.lo < representer.hi && representer.hi <= 1.0))
      fail("indicator interval must satisfy 0 <= lo < hi <= 1");
  }

  if (bounds_m > J) fail("bounds_m exceeds J");

  // Ellipsoid membership of the coefficients actually used.
  const CoefVector phi = structural_coefs();
  const double phi_norm = weighted_norm_sq(phi, WeightSeq::B, weights);
  if (phi_norm > weights.rho * (1.0 + 1e-12))
    fail("structural coefficients violate the rho ellipsoid: |phi|_b^2 = " +
         std::to_string(phi_norm));
  const CoefVector h = representer_coefs();
  const double h_norm = weighted_norm_sq(h, WeightSeq::H, weights);
  if (h_norm > weights.tau * (1.0 + 1e-12))
    fail("representer coefficients violate the tau ellipsoid: |h|_h^2 = " +
         std::to_string(h_norm));
}

JointModel Scenario::build_model() const { return build_joint(weights, J, margin); }

CoefVector Scenario::structural_coefs() const {
  const double scale = structural.scale > 0.0
                           ? structural.scale
                           : calibrated_scale(structural.exponent, weights.p, weights.rho);
  return smooth_coefs(structural.exponent, scale, J);
}

CoefVector Scenario::representer_coefs() const {
  if (representer.kind == RepresenterSpec::Kind::Indicator)
    return indicator_representer(representer.lo, representer.hi, J);
  const double scale = representer.scale > 0.0
                           ? representer.scale
                           : calibrated_scale(representer.exponent, weights.s, weights.tau);
  return smooth_coefs(representer.exponent, scale, J);
}

namespace {

Scenario base_scenario() {
  Scenario sc;
  sc.seed_set = true;
  sc.master_seed = 271828;
  return sc;
}

}  // namespace

std::optional<Scenario> scenario_preset(const std::string& name) {
  if (name == "poly-rate") {
    Scenario sc = base_scenario();
    sc.name = name;
    sc.weights = {.p = 2.0, .s = 1.0, .a = 3.0, .kind = DecayKind::Polynomial,
                  .rho = 2.25, .tau = 1.0, .d = 1.0, .D = 1.0, .triangle = 1.0};
    sc.sigma = 0.5;
    sc.J = 32;
    sc.margin = 0.1;
    sc.structural = {.exponent = 2.55, .scale = 0.0};
    sc.representer = {.kind = RepresenterSpec::Kind::Smooth, .exponent = 1.55, .scale = 0.0};
    sc.n_grid = {1000, 2000, 4000, 8000, 16000};
    sc.reps = 500;
    sc.threshold_mode = ThresholdMode::Remark;
    return sc;
  }
  if (name == "poly-parametric") {
    Scenario sc = base_scenario();
    sc.name = name;
    sc.weights = {.p = 2.0, .s = 3.0, .a = 1.0, .kind = DecayKind::Polynomial,
                  .rho = 1.0, .tau = 1.0, .d = 9.0, .D = 9.0, .triangle = 1.0};
    sc.sigma = 0.5;
    sc.J = 5;
    sc.margin = 0.1;
    sc.structural = {.exponent = 2.75, .scale = 0.0};
    sc.representer = {.kind = RepresenterSpec::Kind::Smooth, .exponent = 3.75, .scale = 0.0};
    sc.n_grid = {1000, 2000, 4000, 8000, 16000};
    sc.reps = 500;
    sc.threshold_mode = ThresholdMode::Remark;
    return sc;
  }
  if (name == "exp-rate") {
    Scenario sc = base_scenario();
    sc.name = name;
    sc.weights = {.p = 1.0, .s = 1.0, .a = 1.0, .kind = DecayKind::Exponential,
                  .rho = 1.0, .tau = 1.0, .d = 1.0, .D = 1.0, .triangle = 1.0};
    sc.sigma = 0.5;
    sc.J = 6;
    sc.margin = 0.1;
    sc.structural = {.exponent = 1.75, .scale = 0.0};
    sc.representer = {.kind = RepresenterSpec::Kind::Smooth, .exponent = 3.0, .scale = 0.0};
    sc.n_grid = {1000, 10000, 100000};
    sc.reps = 300;
    sc.threshold_mode = ThresholdMode::Remark;
    return sc;
  }
  if (name == "bernstein") {
    Scenario sc = base_scenario();
    sc.name = name;
    sc.weights = {.p = 1.0, .s = 1.0, .a = 1.0, .kind = DecayKind::Polynomial,
                  .rho = 1.0, .tau = 1.0, .d = 1.2, .D = 1.2, .triangle = 1.0};
    sc.sigma = 0.5;
    sc.J = 2;
    sc.margin = 0.05;
    sc.structural = {.exponent = 2.0, .scale = 0.0};
    sc.representer = {.kind = RepresenterSpec::Kind::Smooth, .exponent = 2.0, .scale = 0.0};
    sc.n_grid = {1000, 10000};
    sc.reps = 500;
    sc.threshold_mode = ThresholdMode::Theorem;
    return sc;
  }
  return std::nullopt;
}

std::vector<std::string> scenario_preset_names() {
  return {"poly-rate", "poly-parametric", "exp-rate", "bernstein"};
}

}  // namespace nivfunc
