#include "nivfunc/io.hpp"

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nivfunc {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

[[noreturn]] void config_fail(const ConfigMap& cfg, const std::string& key,
                              const std::string& what) {
  const auto it = cfg.lines.find(key);
  const std::string where =
      (it != cfg.lines.end() && it->second > 0)
          ? cfg.source + ":" + std::to_string(it->second) + ": "
          : (it != cfg.lines.end() ? cfg.source + " (command-line override): " : cfg.source + ": ");
  throw ConfigError(where + what);
}

double parse_double(const ConfigMap& cfg, const std::string& key, const std::string& raw) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    config_fail(cfg, key, "key '" + key + "' expects a number, got '" + raw + "'");
  }
}

long parse_long(const ConfigMap& cfg, const std::string& key, const std::string& raw) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    config_fail(cfg, key, "key '" + key + "' expects an integer, got '" + raw + "'");
  }
}

std::uint64_t parse_u64(const ConfigMap& cfg, const std::string& key, const std::string& raw) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    config_fail(cfg, key, "key '" + key + "' expects an unsigned integer, got '" + raw + "'");
  }
}

bool parse_bool(const ConfigMap& cfg, const std::string& key, const std::string& raw) {
  if (raw == "0" || raw == "false") return false;
  if (raw == "1" || raw == "true") return true;
  config_fail(cfg, key, "key '" + key + "' expects 0/1/true/false, got '" + raw + "'");
}

std::vector<long> parse_grid(const ConfigMap& cfg, const std::string& key, const std::string& raw) {
  std::vector<long> grid;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    grid.push_back(parse_long(cfg, key, item));
  }
  if (grid.empty()) config_fail(cfg, key, "key '" + key + "' expects a comma-separated list");
  return grid;
}

}  // namespace

void ConfigMap::set(const std::string& key, const std::string& value, int line) {
  values[key] = value;
  lines[key] = line;
}

ConfigMap parse_config_text(const std::string& text, const std::string& source_name) {
  ConfigMap cfg;
  cfg.source = source_name;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source_name + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(source_name + ":" + std::to_string(lineno) + ": empty key");
    cfg.set(key, value, lineno);
  }
  return cfg;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_overrides(ConfigMap& cfg, const std::vector<std::string>& overrides) {
  for (const auto& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + ov + "'");
    cfg.set(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)), 0);
  }
}

Scenario scenario_from_config(const ConfigMap& cfg) {
  Scenario sc;
  const auto preset_it = cfg.values.find("scenario");
  if (preset_it != cfg.values.end()) {
    auto preset = scenario_preset(preset_it->second);
    if (!preset) config_fail(cfg, "scenario", "unknown scenario preset '" + preset_it->second + "'");
    sc = *preset;
  }
  // Reproducibility first: the seed always comes from the configuration,
  // never from a preset default or the wall clock.
  sc.seed_set = false;

  for (const auto& [key, raw] : cfg.values) {
    if (key == "scenario") continue;
    if (key == "name") sc.name = raw;
    else if (key == "kind") {
      if (raw == "polynomial") sc.weights.kind = DecayKind::Polynomial;
      else if (raw == "exponential") sc.weights.kind = DecayKind::Exponential;
      else config_fail(cfg, key, "kind must be 'polynomial' or 'exponential'");
    }
    else if (key == "p") sc.weights.p = parse_double(cfg, key, raw);
    else if (key == "s") sc.weights.s = parse_double(cfg, key, raw);
    else if (key == "a") sc.weights.a = parse_double(cfg, key, raw);
    else if (key == "rho") sc.weights.rho = parse_double(cfg, key, raw);
    else if (key == "tau") sc.weights.tau = parse_double(cfg, key, raw);
    else if (key == "d") sc.weights.d = parse_double(cfg, key, raw);
    else if (key == "D") sc.weights.D = parse_double(cfg, key, raw);
    else if (key == "triangle") sc.weights.triangle = parse_double(cfg, key, raw);
    else if (key == "sigma") sc.sigma = parse_double(cfg, key, raw);
    else if (key == "J") sc.J = static_cast<int>(parse_long(cfg, key, raw));
    else if (key == "margin") sc.margin = parse_double(cfg, key, raw);
    else if (key == "phi_exponent") sc.structural.exponent = parse_double(cfg, key, raw);
    else if (key == "phi_scale") sc.structural.scale = parse_double(cfg, key, raw);
    else if (key == "rep_kind") {
      if (raw == "smooth") sc.representer.kind = RepresenterSpec::Kind::Smooth;
      else if (raw == "indicator") sc.representer.kind = RepresenterSpec::Kind::Indicator;
      else config_fail(cfg, key, "rep_kind must be 'smooth' or 'indicator'");
    }
    else if (key == "rep_exponent") sc.representer.exponent = parse_double(cfg, key, raw);
    else if (key == "rep_scale") sc.representer.scale = parse_double(cfg, key, raw);
    else if (key == "rep_lo") sc.representer.lo = parse_double(cfg, key, raw);
    else if (key == "rep_hi") sc.representer.hi = parse_double(cfg, key, raw);
    else if (key == "n_grid") sc.n_grid = parse_grid(cfg, key, raw);
    else if (key == "reps") sc.reps = static_cast<int>(parse_long(cfg, key, raw));
    else if (key == "master_seed") {
      sc.master_seed = parse_u64(cfg, key, raw);
      sc.seed_set = true;
    }
    else if (key == "threshold_mode") {
      auto mode = threshold_mode_from_string(raw);
      if (!mode) config_fail(cfg, key, "threshold_mode must be theorem, remark or corollary");
      sc.threshold_mode = *mode;
    }
    else if (key == "eta") sc.eta = parse_double(cfg, key, raw);
    else if (key == "bounds_m") sc.bounds_m = static_cast<int>(parse_long(cfg, key, raw));
    else if (key == "median_of_means") sc.median_of_means = parse_bool(cfg, key, raw);
    else config_fail(cfg, key, "unknown key '" + key + "'");
  }

  if (!sc.seed_set)
    throw ConfigError(cfg.source + ": missing required key 'master_seed'");
  sc.validate();
  return sc;
}

std::string canonical_config_text(const Scenario& sc) {
  std::ostringstream out;
  out << "name = " << sc.name << "\n";
  out << "kind = " << (sc.weights.kind == DecayKind::Polynomial ? "polynomial" : "exponential")
      << "\n";
  out << "p = " << fmt17(sc.weights.p) << "\n";
  out << "s = " << fmt17(sc.weights.s) << "\n";
  out << "a = " << fmt17(sc.weights.a) << "\n";
  out << "rho = " << fmt17(sc.weights.rho) << "\n";
  out << "tau = " << fmt17(sc.weights.tau) << "\n";
  out << "d = " << fmt17(sc.weights.d) << "\n";
  out << "D = " << fmt17(sc.weights.D) << "\n";
  out << "triangle = " << fmt17(sc.weights.triangle) << "\n";
  out << "sigma = " << fmt17(sc.sigma) << "\n";
  out << "J = " << sc.J << "\n";
  out << "margin = " << fmt17(sc.margin) << "\n";
  out << "phi_exponent = " << fmt17(sc.structural.exponent) << "\n";
  out << "phi_scale = " << fmt17(sc.structural.scale) << "\n";
  out << "rep_kind = "
      << (sc.representer.kind == RepresenterSpec::Kind::Smooth ? "smooth" : "indicator") << "\n";
  out << "rep_exponent = " << fmt17(sc.representer.exponent) << "\n";
  out << "rep_scale = " << fmt17(sc.representer.scale) << "\n";
  out << "rep_lo = " << fmt17(sc.representer.lo) << "\n";
  out << "rep_hi = " << fmt17(sc.representer.hi) << "\n";
  out << "n_grid = ";
  for (std::size_t i = 0; i < sc.n_grid.size(); ++i)
    out << (i ? "," : "") << sc.n_grid[i];
  out << "\n";
  out << "reps = " << sc.reps << "\n";
  out << "master_seed = " << sc.master_seed << "\n";
  out << "threshold_mode = " << to_string(sc.threshold_mode) << "\n";
  out << "eta = " << fmt17(sc.eta) << "\n";
  out << "bounds_m = " << sc.bounds_m << "\n";
  out << "median_of_means = " << (sc.median_of_means ? 1 : 0) << "\n";
  return out.str();
}

std::string records_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = "n,rep,seed,m,alpha,estimate,truth,sq_error,truncated,inv_norm\n";
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%ld,%d,%" PRIu64 ",%d,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n",
                  r.n, r.rep, r.seed, r.m, r.alpha, r.estimate, r.truth, r.sq_error,
                  r.truncated ? 1 : 0, r.inv_norm);
    out += buf;
  }
  return out;
}

namespace {

ordered_json scenario_echo(const Scenario& sc) {
  ordered_json j;
  j["name"] = sc.name;
  j["kind"] = sc.weights.kind == DecayKind::Polynomial ? "polynomial" : "exponential";
  j["p"] = sc.weights.p;
  j["s"] = sc.weights.s;
  j["a"] = sc.weights.a;
  j["rho"] = sc.weights.rho;
  j["tau"] = sc.weights.tau;
  j["d"] = sc.weights.d;
  j["D"] = sc.weights.D;
  j["triangle"] = sc.weights.triangle;
  j["sigma"] = sc.sigma;
  j["J"] = sc.J;
  j["margin"] = sc.margin;
  j["phi_exponent"] = sc.structural.exponent;
  j["phi_scale"] = sc.structural.scale;
  j["rep_kind"] = sc.representer.kind == RepresenterSpec::Kind::Smooth ? "smooth" : "indicator";
  j["rep_exponent"] = sc.representer.exponent;
  j["rep_scale"] = sc.representer.scale;
  j["rep_lo"] = sc.representer.lo;
  j["rep_hi"] = sc.representer.hi;
  j["n_grid"] = sc.n_grid;
  j["reps"] = sc.reps;
  j["master_seed"] = sc.master_seed;
  j["threshold_mode"] = to_string(sc.threshold_mode);
  j["eta"] = sc.eta;
  j["bounds_m"] = sc.bounds_m;
  j["median_of_means"] = sc.median_of_means;
  return j;
}

}  // namespace

std::string summary_json(const Scenario& sc, const std::vector<SummaryRow>& table,
                         const RateFit* fit, const std::string& fit_error) {
  ordered_json j;
  j["schema_version"] = "1";
  j["command"] = "simulate";
  j["scenario"] = scenario_echo(sc);
  j["config_text"] = canonical_config_text(sc);

  ordered_json per_n = ordered_json::array();
  for (const auto& row : table) {
    ordered_json r;
    r["n"] = row.n;
    r["reps"] = row.reps;
    r["mse"] = row.mse;
    r["mc_se"] = row.mc_se;
    r["truncation_rate"] = row.truncation_rate;
    per_n.push_back(r);
  }
  j["per_n"] = per_n;

  if (fit) {
    ordered_json f;
    f["slope"] = fit->slope;
    f["intercept"] = fit->intercept;
    f["r_squared"] = fit->r_squared;
    f["n_grid"] = fit->n_grid;
    f["excluded_n"] = fit->excluded_n;
    j["fit"] = f;
  } else {
    j["fit"] = ordered_json{{"error", fit_error}};
  }

  ordered_json theory;
  const bool poly = sc.weights.kind == DecayKind::Polynomial;
  theory["kind"] = poly ? "polynomial" : "exponential";
  if (poly) {
    theory["exponent"] =
        -std::min((sc.weights.p + sc.weights.s) / (sc.weights.p + sc.weights.a), 1.0);
  } else {
    theory["log_rate"] =
        "(log n)^(-" + fmt17((sc.weights.p + sc.weights.s) / sc.weights.a) + ")";
  }
  ordered_json curve = ordered_json::array();
  for (long n : sc.n_grid)
    curve.push_back(ordered_json{{"n", n}, {"value", theoretical_rate(n, sc.weights)}});
  theory["rate"] = curve;
  j["theory"] = theory;

  ordered_json verdicts;
  if (poly && fit) {
    const double expo = theory["exponent"].get<double>();
    verdicts["theoretical_exponent"] = expo;
    verdicts["slope_within_0p2"] = std::abs(fit->slope - expo) <= 0.2;
    verdicts["r_squared_ge_0p9"] = fit->r_squared >= 0.9;
  } else if (!poly) {
    bool monotone = true;
    for (std::size_t i = 1; i < table.size(); ++i) {
      const double slack =
          2.0 * std::sqrt(table[i].mc_se * table[i].mc_se + table[i - 1].mc_se * table[i - 1].mc_se);
      if (table[i].mse > table[i - 1].mse + slack) monotone = false;
    }
    verdicts["mse_nonincreasing_2se"] = monotone;
  }
  j["verdicts"] = verdicts;
  return j.dump(2) + "\n";
}

std::string rates_csv(const Scenario& sc) {
  std::string out =
      "n,k_star,delta_star,implied_triangle,alpha_theorem,alpha_remark,alpha_corollary,"
      "theoretical_rate\n";
  char buf[512];
  for (long n : sc.n_grid) {
    const int k = select_dimension(n, sc.weights);
    std::snprintf(buf, sizeof(buf), "%ld,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", n, k,
                  delta_star(k, sc.weights), implied_triangle(n, k, sc.weights),
                  threshold_alpha(n, k, sc.weights, ThresholdMode::Theorem),
                  threshold_alpha(n, k, sc.weights, ThresholdMode::Remark),
                  threshold_alpha(n, k, sc.weights, ThresholdMode::Corollary),
                  theoretical_rate(n, sc.weights));
    out += buf;
  }
  return out;
}

std::string bounds_json(const Scenario& sc, const DeviationReport& deviation,
                        const BiasReport& bias) {
  ordered_json j;
  j["schema_version"] = "1";
  j["command"] = "bounds";
  j["scenario"] = scenario_echo(sc);

  ordered_json dev;
  dev["m"] = deviation.rows.empty() ? sc.bounds_m : deviation.rows.front().m;
  ordered_json rows = ordered_json::array();
  for (const auto& r : deviation.rows) {
    rows.push_back(ordered_json{{"n", r.n},
                                {"reps", r.reps},
                                {"frequency", r.frequency},
                                {"bound", r.bound},
                                {"se", r.se},
                                {"pass", r.pass}});
  }
  dev["rows"] = rows;
  dev["pass"] = deviation.pass;
  j["deviation"] = dev;

  ordered_json bj;
  bj["lambda_hat"] = bias.lambda_hat;
  ordered_json brows = ordered_json::array();
  for (const auto& r : bias.rows) {
    brows.push_back(ordered_json{{"m", r.m},
                                 {"proj_r0", r.proj_r0},
                                 {"proj_r_half", r.proj_r_half},
                                 {"proj_r1", r.proj_r1},
                                 {"proj_bound", r.proj_bound},
                                 {"func_bias", r.func_bias},
                                 {"func_bound", r.func_bound},
                                 {"pass", r.pass}});
  }
  bj["rows"] = brows;
  bj["pass"] = bias.pass;
  j["bias"] = bj;

  j["pass"] = deviation.pass && bias.pass;
  return j.dump(2) + "\n";
}

std::string hard_instance_json(const Scenario& sc, long n, const HardInstance& inst) {
  ordered_json j;
  j["schema_version"] = "1";
  j["command"] = "hard-instance";
  j["scenario"] = scenario_echo(sc);
  j["n"] = n;
  j["k_star"] = inst.k_star;
  j["xi"] = inst.xi;
  j["phi_coef"] = inst.phi_coef;
  j["h_coef"] = inst.h_coef;
  j["phi_sq"] = inst.phi_sq;
  j["h_sq"] = inst.h_sq;
  j["sigma4_bound"] = inst.sigma4_bound;
  ordered_json ineqs = ordered_json::array();
  for (const auto& q : inst.inequalities(n, sc.weights))
    ineqs.push_back(ordered_json{{"lhs", q.lhs}, {"rhs", q.rhs}, {"holds", q.holds}});
  j["inequalities"] = ineqs;
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path + ": cannot open output file for writing");
  out << content;
  if (!out) throw ConfigError(path + ": write failed");
}

}  // namespace nivfunc
