#pragma once

// Experiment configs and the batch commands behind the `apsym` tool.
//
// Every command is a pure function of (config, workers): it returns CSV and
// JSON text plus an exit code, and writes nothing itself. Outputs never
// depend on the worker count.
//
// Config keys (all optional unless a command needs them):
//   spec | preset.almost_mathieu{lambda, alpha, theta, label}
//   hull{model, depth, generator | tail_bound}
//   point{phases[] | residue}
//   params{epsilons[], B, n_max, samples, points, window, N, m_max, orbit_tol,
//          equidist_N, cross_check_points, eigenvectors, dump_samples}
//   seed, workers, out, format, command
//
// Exit codes: 0 ok, 1 runtime/numerical failure, 2 config or hypothesis
// violation, 3 a theorem bound empirically breached.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "apsym/apfunc.hpp"
#include "apsym/errors.hpp"
#include "apsym/generator.hpp"
#include "apsym/hull.hpp"
#include "apsym/io.hpp"
#include "apsym/schrodinger.hpp"
#include "apsym/symmetry.hpp"
#include "apsym/trig_spec.hpp"
#include "apsym/version.hpp"

namespace apsym {

enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitConfig = 2, kExitViolation = 3 };

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate", "measure-ur", "js-scan", "thm1",
                                              "thm2",     "thm3",       "spectrum", "equidist"};
  return names;
}

/// Keys that control execution only; excluded from the echo so outputs are
/// identical across worker counts and output locations.
inline const std::vector<std::string>& execution_only_keys() {
  static const std::vector<std::string> keys{"workers", "out", "format"};
  return keys;
}

struct Params {
  std::vector<double> epsilons{0.05, 0.1, 0.2, 0.5};
  double B = 1.0;
  std::int64_t n_max = 10;
  std::int64_t samples = 100'000;
  std::int64_t points = 100;
  std::int64_t window = 100'000;
  std::int64_t N = 30;
  std::int64_t m_max = 1000;
  double orbit_tol = 1e-2;
  std::int64_t equidist_N = 10'000;
  std::int64_t cross_check_points = 20;
  bool eigenvectors = false;
  bool dump_samples = false;
};

/// Parsed, validated experiment. `raw` keeps the input for the echo.
struct ExperimentConfig {
  json raw;
  std::optional<TrigSpec> spec;
  std::optional<HullModel> hull;
  std::optional<CoefficientGenerator> generator;
  std::optional<HullPoint> point;
  std::optional<Residue> residue;
  Params params;
  std::uint64_t seed = 0;
  unsigned workers = 1;

  json echo() const {
    json e = raw;
    for (const auto& k : execution_only_keys()) e.erase(k);
    return e;
  }
};

/// Collected configuration problems, each with its field path.
struct Diagnostics {
  std::vector<std::string> errors;
  bool hypothesis_violation = false;
  bool ok() const { return errors.empty(); }
};

namespace detail {

inline void read_int(const json& p, const char* key, std::int64_t& dst, bool positive, Diagnostics& d) {
  if (!p.contains(key)) return;
  const json& v = p.at(key);
  if (!v.is_number_integer()) {
    d.errors.push_back(std::string("params.") + key + ": expected an integer");
    return;
  }
  dst = v.get<std::int64_t>();
  if (positive ? dst < 1 : dst < 0) {
    d.errors.push_back(std::string("params.") + key + (positive ? ": must be >= 1" : ": must be >= 0"));
  }
}

}  // namespace detail

/// Parse a config; structural problems go to `diag` instead of throwing.
inline ExperimentConfig parse_config(const json& raw, Diagnostics& diag) {
  ExperimentConfig cfg;
  cfg.raw = raw;
  if (!raw.is_object()) {
    diag.errors.push_back("config: expected a JSON object");
    return cfg;
  }
  try {
    if (raw.contains("spec") && raw.contains("preset")) {
      diag.errors.push_back("config: give either spec or preset, not both");
    } else if (raw.contains("spec")) {
      cfg.spec = spec_from_json(raw.at("spec"));
    } else if (raw.contains("preset")) {
      const json& pre = raw.at("preset");
      if (!pre.contains("almost_mathieu")) throw ValidationError("preset: only almost_mathieu is known");
      const json& am = pre.at("almost_mathieu");
      auto [spec, g] = almost_mathieu_preset(detail::require_number(am, "lambda", "preset.almost_mathieu"),
                                             detail::require_number(am, "alpha", "preset.almost_mathieu"),
                                             am.value("theta", 0.0), am.value("label", std::string{}));
      cfg.spec = std::move(spec);
      cfg.point = std::move(g);
    }
  } catch (const Error& e) {
    diag.errors.push_back(e.what());
  }

  if (raw.contains("params")) {
    const json& p = raw.at("params");
    if (!p.is_object()) {
      diag.errors.push_back("params: expected an object");
    } else {
      Params& P = cfg.params;
      if (p.contains("epsilons")) {
        const json& e = p.at("epsilons");
        if (!e.is_array() || e.empty()) {
          diag.errors.push_back("params.epsilons: expected a non-empty array");
        } else {
          P.epsilons.clear();
          for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i].is_number() || !(e[i].get<double>() >= 0.0)) {
              diag.errors.push_back("params.epsilons[" + std::to_string(i) + "]: must be a number >= 0");
            } else {
              P.epsilons.push_back(e[i].get<double>());
            }
          }
        }
      }
      if (p.contains("B")) {
        if (!p.at("B").is_number() || !(p.at("B").get<double>() > 0.0)) {
          diag.errors.push_back("params.B: must be a number > 0");
        } else {
          P.B = p.at("B").get<double>();
        }
      }
      if (p.contains("orbit_tol")) {
        if (!p.at("orbit_tol").is_number() || !(p.at("orbit_tol").get<double>() > 0.0)) {
          diag.errors.push_back("params.orbit_tol: must be a number > 0");
        } else {
          P.orbit_tol = p.at("orbit_tol").get<double>();
        }
      }
      detail::read_int(p, "n_max", P.n_max, false, diag);
      detail::read_int(p, "samples", P.samples, true, diag);
      detail::read_int(p, "points", P.points, true, diag);
      detail::read_int(p, "window", P.window, true, diag);
      detail::read_int(p, "N", P.N, true, diag);
      detail::read_int(p, "m_max", P.m_max, false, diag);
      detail::read_int(p, "equidist_N", P.equidist_N, true, diag);
      detail::read_int(p, "cross_check_points", P.cross_check_points, false, diag);
      P.eigenvectors = p.value("eigenvectors", false);
      P.dump_samples = p.value("dump_samples", false);
    }
  }

  if (raw.contains("seed")) {
    if (!raw.at("seed").is_number_integer() || (!raw.at("seed").is_number_unsigned() && raw.at("seed").get<std::int64_t>() < 0)) {
      diag.errors.push_back("seed: expected a non-negative integer");
    } else {
      cfg.seed = raw.at("seed").get<std::uint64_t>();
    }
  }
  if (raw.contains("workers")) {
    if (!raw.at("workers").is_number_integer() || raw.at("workers").get<std::int64_t>() < 1) {
      diag.errors.push_back("workers: must be an integer >= 1");
    } else {
      cfg.workers = static_cast<unsigned>(raw.at("workers").get<std::int64_t>());
    }
  }

  try {
    if (raw.contains("hull")) {
      const json& h = raw.at("hull");
      const std::string model = detail::require(h, "model", "hull").get<std::string>();
      if (model == "torus") {
        if (!cfg.spec) throw ValidationError("hull: torus model needs a spec or preset");
        cfg.hull = TorusHull(*cfg.spec);
      } else if (model == "profinite") {
        if (h.contains("generator")) {
          cfg.generator = generator_from_json(h.at("generator"));
          const std::int64_t depth = detail::require_integer(h, "depth", "hull");
          if (depth < 1) throw ValidationError("hull.depth: must be >= 1");
          ProfiniteHull ph(*cfg.generator, depth);
          if (cfg.spec) diag.errors.push_back("hull: a generator-backed profinite hull derives its own spec; drop spec");
          cfg.spec = ph.spec();
          cfg.hull = std::move(ph);
        } else {
          if (!cfg.spec) throw ValidationError("hull: profinite model needs a generator or a spec");
          const double tail = detail::require_number(h, "tail_bound", "hull");
          if (!(tail >= 0.0)) throw ValidationError("hull.tail_bound: must be >= 0");
          std::int64_t depth = 0;
          cfg.generator = generator_from_profinite_spec(*cfg.spec, tail, depth);
          if (h.contains("depth") && h.at("depth") != depth) {
            throw ValidationError("hull.depth: disagrees with the number of spec terms");
          }
          cfg.hull = ProfiniteHull(*cfg.generator, depth);
        }
      } else {
        throw ValidationError("hull.model: expected torus or profinite");
      }
    } else if (cfg.spec && cfg.spec->spec_class() == SpecClass::quasi_periodic && !cfg.spec->empty() &&
               cfg.spec->assertions().rationally_independent) {
      cfg.hull = TorusHull(*cfg.spec);
    }
  } catch (const Error& e) {
    diag.errors.push_back(e.what());
  } catch (const json::exception& e) {
    diag.errors.push_back(std::string("hull: ") + e.what());
  }

  try {
    if (raw.contains("point")) {
      const json& pt = raw.at("point");
      if (pt.contains("residue")) {
        const auto* ph = cfg.hull ? std::get_if<ProfiniteHull>(&*cfg.hull) : nullptr;
        if (!ph) throw ValidationError("point.residue: needs a profinite hull");
        cfg.residue = ph->reduce(detail::require_integer(pt, "residue", "point"));
        cfg.point = ph->point(*cfg.residue);
      } else {
        const json& ph = detail::require(pt, "phases", "point");
        if (!ph.is_array()) throw ValidationError("point.phases: expected an array");
        cfg.point = HullPoint::from_turns(ph.get<std::vector<double>>());
        if (cfg.spec) check_dimension(*cfg.spec, *cfg.point);
      }
    }
  } catch (const Error& e) {
    diag.errors.push_back(std::string("point: ") + e.what());
  } catch (const json::exception& e) {
    diag.errors.push_back(std::string("point: ") + e.what());
  }
  return cfg;
}

/// Command-specific requirements, including theorem hypotheses.
inline void validate_for_command(const ExperimentConfig& cfg, const std::string& command, Diagnostics& diag) {
  auto need = [&](bool cond, const std::string& msg) {
    if (!cond) diag.errors.push_back(msg);
  };
  auto hypothesis = [&](bool cond, const std::string& msg) {
    if (!cond) {
      diag.errors.push_back(msg);
      diag.hypothesis_violation = true;
    }
  };
  bool known = false;
  for (const auto& c : command_names()) known = known || c == command;
  if (!known) {
    diag.errors.push_back("command: unknown command '" + command + "'");
    return;
  }
  if (command == "validate") return;
  need(cfg.spec.has_value(), "spec: required by " + command);
  if (!cfg.spec) return;
  const bool non_lp = classify(*cfg.spec) == Periodicity::non_limit_periodic;

  if (command == "measure-ur" || command == "thm1" || command == "thm2") {
    need(cfg.hull.has_value(), "hull: " + command + " needs a torus or profinite hull model");
  }
  if (command == "thm1" || command == "thm2") {
    hypothesis(non_lp, "spec: " + command + " requires an almost periodic but not limit periodic function (class " +
                           std::string(to_string(cfg.spec->spec_class())) + ")");
  }
  if (command == "thm3") {
    const bool profinite = cfg.hull && std::holds_alternative<ProfiniteHull>(*cfg.hull);
    hypothesis(profinite && cfg.generator.has_value(), "hull: thm3 requires a profinite hull with coefficients 1/k");
  }
  if (command == "js-scan") {
    need(cfg.point.has_value() || cfg.hull.has_value(), "point: js-scan needs a point or a hull to sample from");
  }
  if (command == "spectrum" && cfg.point) {
    need(cfg.point->size() == cfg.spec->size(), "point.phases: dimension mismatch");
  }
}

struct CommandResult {
  int exit_code = kExitOk;
  std::map<std::string, std::string> files;  // file name -> contents
  json summary;
  std::vector<std::string> messages;
};

namespace detail {

inline json base_summary(const ExperimentConfig& cfg, const std::string& command) {
  json s;
  s["tool"] = kToolName;
  s["version"] = kVersion;
  s["command"] = command;
  s["config_echo"] = cfg.echo();
  return s;
}

inline void finish(CommandResult& r, const std::string& command, const std::string& format, const std::string& csv) {
  if (format == "csv" || format == "both") r.files[command + ".csv"] = csv;
  if (format == "json" || format == "both") r.files[command + ".json"] = r.summary.dump(2) + "\n";
}

inline std::optional<double> single_frequency_lambda(const TrigSpec& spec) {
  if (spec.size() == 1 && spec.spec_class() == SpecClass::quasi_periodic) return std::fabs(spec.terms()[0].amp);
  return std::nullopt;
}

inline CommandResult measure_ur_like(const ExperimentConfig& cfg, const std::string& command, const std::string& format,
                                     unsigned workers) {
  CommandResult r;
  r.summary = base_summary(cfg, command);
  const HullModel& hull = *cfg.hull;
  const TrigSpec& spec = hull_spec(hull);
  const auto n = static_cast<std::uint64_t>(cfg.params.samples);
  std::optional<double> C;
  if (classify(spec) == Periodicity::non_limit_periodic) C = theorem1_bound(spec);
  const auto lambda = single_frequency_lambda(spec);

  CsvWriter csv({"epsilon", "estimate", "half_width", "bound", "exact_single_freq", "violation_flag"});
  json results = json::array();
  bool violation = false;
  bool exact_ok = true;
  for (double eps : cfg.params.epsilons) {
    const MeasureEstimate e = measure_ur_mc(hull, eps, n, cfg.seed, workers);
    const double bound = C ? *C * eps : 0.0;
    const double exact = lambda ? measure_ur_exact_single_freq(*lambda, eps) : 0.0;
    const bool v = C && e.value - 3.0 * e.half_width_95 > bound;
    violation = violation || v;
    json row{{"epsilon", eps}, {"estimate", e.value}, {"half_width", e.half_width_95}, {"hits", e.hits},
             {"n_samples", e.n_samples}, {"violation", v}};
    if (C) row["bound"] = bound;
    if (eps > 0.0) row["ratio_estimate_over_epsilon"] = e.value / eps;
    if (lambda) {
      row["exact_single_freq"] = exact;
      const bool agree = std::fabs(e.value - exact) <= 3.0 * e.half_width_95 || e.value == exact;
      row["exact_within_3_half_width"] = agree;
      exact_ok = exact_ok && agree;
    }
    results.push_back(row);
    csv.row({cell(eps), cell(e.value), cell(e.half_width_95), C ? cell(bound) : "", lambda ? cell(exact) : "",
             cell(v)});
  }
  r.summary["results"] = results;
  if (C) r.summary["theorem1_constant"] = *C;
  r.summary["spec_class"] = to_string(spec.spec_class());
  r.summary["rationally_independent_asserted"] = spec.assertions().rationally_independent;

  bool cross_ok = true;
  if (command == "thm1" && cfg.params.cross_check_points > 0 && spec.spec_class() == SpecClass::quasi_periodic) {
    json cc = json::array();
    // separate stream family from the estimator samples
    const std::uint64_t cc_seed = splitmix64(cfg.seed ^ 0x7468'6d31ULL);
    const auto m = static_cast<std::uint64_t>(cfg.params.cross_check_points);
    std::vector<std::pair<double, double>> d(m);
    parallel_for(m, workers, [&](std::uint64_t i) {
      const HullPoint g = haar_sample(hull, cc_seed, i);
      d[i] = {reflection_distance(spec, g), sup_distance_windowed(spec, reflect(spec, g), g, cfg.params.window)};
    });
    double worst = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) {
      worst = std::max(worst, std::fabs(d[i].first - d[i].second));
      cc.push_back(json{{"closed", d[i].first}, {"windowed", d[i].second}});
    }
    cross_ok = worst <= 1e-3;
    r.summary["closed_vs_windowed"] = json{{"window", cfg.params.window}, {"points", cc}, {"max_abs_diff", worst},
                                           {"tolerance", 1e-3}, {"ok", cross_ok}};
  }
  const bool pass = !violation && exact_ok && cross_ok;
  r.summary["verdict"] = pass ? "pass" : "violation";
  if (!pass) r.exit_code = kExitViolation;
  finish(r, command, format, csv.str());
  if (cfg.params.dump_samples) r.files["samples.csv"] = samples_csv(hull, cfg.seed, n);
  return r;
}

inline HullPoint scan_point(const ExperimentConfig& cfg) {
  if (cfg.point) return *cfg.point;
  return haar_sample(*cfg.hull, cfg.seed, 0);
}

}  // namespace detail

inline CommandResult cmd_validate(const ExperimentConfig& cfg, const Diagnostics& diag, const std::string& target) {
  CommandResult r;
  r.summary = detail::base_summary(cfg, "validate");
  r.summary["target_command"] = target;
  r.summary["errors"] = diag.errors;
  r.summary["valid"] = diag.ok();
  if (cfg.spec) {
    r.summary["spec_class"] = to_string(cfg.spec->spec_class());
    r.summary["periodicity"] = to_string(classify(*cfg.spec));
  }
  r.summary["verdict"] = diag.ok() ? "valid" : "invalid";
  r.exit_code = diag.ok() ? kExitOk : kExitConfig;
  r.files["validate.json"] = r.summary.dump(2) + "\n";
  r.messages = diag.errors;
  return r;
}

inline CommandResult cmd_measure_ur(const ExperimentConfig& cfg, const std::string& format = "both", unsigned workers = 1) {
  return detail::measure_ur_like(cfg, "measure-ur", format, workers);
}

inline CommandResult cmd_thm1(const ExperimentConfig& cfg, const std::string& format = "both", unsigned workers = 1) {
  return detail::measure_ur_like(cfg, "thm1", format, workers);
}

inline CommandResult cmd_js_scan(const ExperimentConfig& cfg, const std::string& format = "both", unsigned = 1) {
  CommandResult r;
  r.summary = detail::base_summary(cfg, "js-scan");
  const TrigSpec& spec = *cfg.spec;
  const HullPoint g = detail::scan_point(cfg);
  CsvWriter csv({"n", "js_distance", "threshold", "hit"});
  json hits = json::array();
  for (std::int64_t n = 0; n <= cfg.params.n_max; ++n) {
    const double d = js_distance(spec, g, n, cfg.params.window);
    const double t = std::exp(-cfg.params.B * static_cast<double>(n));
    const bool hit = d <= t;
    if (hit) hits.push_back(n);
    csv.row({cell(n), cell(d), cell(t), cell(hit)});
  }
  r.summary["point"] = g.values();
  r.summary["point_source"] = cfg.point ? "config" : "haar_sample_0";
  r.summary["hits"] = hits;
  if (cfg.hull) {
    // nearest translate T^m f of the base function to the scanned point
    std::optional<std::int64_t> m;
    if (const auto* t = std::get_if<TorusHull>(&*cfg.hull)) {
      m = orbit_approximate(*t, g, cfg.params.orbit_tol, cfg.params.m_max);
    } else {
      const auto& ph = std::get<ProfiniteHull>(*cfg.hull);
      // levels with underflowed coefficients carry no phase, so prefer the configured residue
      m = orbit_approximate(ph, cfg.residue ? *cfg.residue : ph.residue_of(g), cfg.params.orbit_tol);
    }
    json orbit{{"tol", cfg.params.orbit_tol}, {"m_max", cfg.params.m_max}};
    orbit["m"] = m ? json(*m) : json(nullptr);
    r.summary["orbit"] = orbit;
  }
  r.summary["verdict"] = "ok";
  detail::finish(r, "js-scan", format, csv.str());
  return r;
}

inline CommandResult cmd_thm2(const ExperimentConfig& cfg, const std::string& format = "both", unsigned workers = 1) {
  CommandResult r;
  r.summary = detail::base_summary(cfg, "thm2");
  const BorelCantelliReport rep = borel_cantelli_report(*cfg.hull, cfg.params.B, cfg.params.n_max,
                                                        static_cast<std::uint64_t>(cfg.params.samples), cfg.seed,
                                                        workers);
  CsvWriter csv({"n", "estimate", "half_width", "bound", "violation_flag"});
  json rows = json::array();
  for (const auto& row : rep.rows) {
    csv.row({cell(row.n), cell(row.estimate.value), cell(row.estimate.half_width_95), cell(row.bound),
             cell(row.violation)});
    rows.push_back(json{{"n", row.n},
                        {"estimate", row.estimate.value},
                        {"half_width", row.estimate.half_width_95},
                        {"bound", row.bound},
                        {"partial_sum_estimate", row.partial_sum_estimate},
                        {"partial_sum_half_width", row.partial_sum_half_width},
                        {"partial_sum_bound", row.partial_sum_bound},
                        {"union_tail_estimate", row.union_tail_estimate},
                        {"union_tail_bound", row.union_tail_bound},
                        {"violation", row.violation}});
  }
  r.summary["results"] = rows;
  r.summary["theorem1_constant"] = rep.C;
  r.summary["B"] = rep.B;
  r.summary["series_limit"] = rep.series_limit;
  r.summary["partial_sums_ok"] = rep.partial_sums_ok;
  const bool pass = !rep.any_violation && rep.partial_sums_ok;
  r.summary["verdict"] = pass ? "pass" : "violation";
  if (!pass) r.exit_code = kExitViolation;
  detail::finish(r, "thm2", format, csv.str());
  return r;
}

inline CommandResult cmd_thm3(const ExperimentConfig& cfg, const std::string& format = "both", unsigned workers = 1) {
  CommandResult r;
  r.summary = detail::base_summary(cfg, "thm3");
  const auto& hull = std::get<ProfiniteHull>(*cfg.hull);
  const Theorem3Report rep = verify_theorem3(hull, *cfg.generator, cfg.params.B,
                                             static_cast<std::uint64_t>(cfg.params.points), cfg.seed, workers);
  json decay = json::array();
  for (const auto& row : rep.decay.rows) {
    decay.push_back(json{{"m", row.m}, {"log_value", format_double(row.log_value)}, {"below_one", row.below_one}});
  }
  r.summary["decay_condition"] = json{{"rows", decay}, {"witnesses", rep.decay.witnesses}, {"verdict", rep.decay.verdict}};
  r.summary["modulus"] = hull.modulus();
  r.summary["depth"] = hull.depth();
  r.summary["log_tail_bound"] = format_double(hull.log_tail_bound());

  CsvWriter csv({"sample_id", "residue", "depth_m", "center_r", "achieved_distance", "log_upper", "log_threshold",
                 "valid", "oracle_distance", "oracle_valid"});
  for (const auto& e : rep.entries) {
    const auto& c = e.certificate;
    csv.row({cell(e.sample_id), cell(e.residue.value), cell(c.depth_m), cell(c.center_r), cell(c.achieved_distance),
             cell(c.log_upper), cell(c.log_threshold), cell(c.valid), cell(e.oracle_distance), cell(e.oracle_valid)});
  }
  r.summary["certificates"] = rep.entries.size();
  r.summary["valid_certificates"] = rep.valid;
  r.summary["hit_rate"] = rep.hit_rate;
  r.summary["oracle_window"] = rep.oracle_window;
  if (!rep.precondition_ok) {
    r.summary["verdict"] = "precondition_failed";
    r.exit_code = kExitConfig;
    r.messages.push_back("decay condition has no witness depth <= hull depth");
  } else {
    const bool pass = rep.valid == rep.entries.size();
    r.summary["verdict"] = pass ? "pass" : "violation";
    if (!pass) r.exit_code = kExitViolation;
  }
  detail::finish(r, "thm3", format, csv.str());
  return r;
}

inline CommandResult cmd_spectrum(const ExperimentConfig& cfg, const std::string& format = "both", unsigned = 1) {
  CommandResult r;
  r.summary = detail::base_summary(cfg, "spectrum");
  const TrigSpec& spec = *cfg.spec;
  const HullPoint g = cfg.point ? *cfg.point : HullPoint::zeros(spec.size());
  const TruncatedOperator op = truncate(spec, g, cfg.params.N);
  const EigenSystem es = eigen(op);
  CsvWriter csv({"index", "eigenvalue"});
  for (std::size_t i = 0; i < es.values.size(); ++i) csv.row({cell(static_cast<std::uint64_t>(i)), cell(es.values[i])});
  r.summary["boundary"] = "dirichlet";
  r.summary["sites"] = op.dim();
  const bool enclosed = spectral_enclosure_holds(spec, es.values);
  r.summary["enclosure"] = json{{"radius", 2.0 + spec.amplitude_sum()}, {"holds", enclosed}};
  bool even = true;
  for (const auto& p : g.phases) even = even && (-p == p);
  bool parity_ok = true;
  if (even) {
    const ParityReport pr = parity_check(spec, g, cfg.params.N);
    parity_ok = pr.ok;
    r.summary["parity"] = json{{"commutator_norm", pr.commutator_norm}, {"checked", pr.checked},
                               {"skipped_near_degenerate", pr.skipped}, {"even", pr.even}, {"odd", pr.odd},
                               {"max_parity_defect", pr.max_parity_defect}, {"ok", pr.ok}};
  } else {
    r.summary["parity"] = "not applicable: potential is not even";
  }
  const bool pass = enclosed && parity_ok;
  r.summary["verdict"] = pass ? "pass" : "violation";
  if (!pass) r.exit_code = kExitViolation;
  detail::finish(r, "spectrum", format, csv.str());
  if (cfg.params.eigenvectors) {
    CsvWriter ev({"index", "site", "component"});
    for (std::size_t i = 0; i < es.vectors.size(); ++i) {
      for (std::size_t s = 0; s < es.vectors[i].size(); ++s) {
        ev.row({cell(static_cast<std::uint64_t>(i)), cell(static_cast<std::int64_t>(s) - op.half_size),
                cell(es.vectors[i][s])});
      }
    }
    r.files["eigenvectors.csv"] = ev.str();
  }
  return r;
}

inline CommandResult cmd_equidist(const ExperimentConfig& cfg, const std::string& format = "both", unsigned = 1) {
  CommandResult r;
  r.summary = detail::base_summary(cfg, "equidist");
  const TrigSpec& spec = *cfg.spec;
  CsvWriter csv({"term", "label", "value_turns", "weyl_sum"});
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const auto& t = spec.terms()[k];
    if (t.freq.is_rational()) continue;
    const double w = equidistribution_check(TrigSpec({t}), cfg.params.equidist_N);
    csv.row({cell(static_cast<std::uint64_t>(k)), t.freq.label(), cell(t.freq.value_turns()), cell(w)});
  }
  r.summary["N"] = cfg.params.equidist_N;
  r.summary["max_weyl_sum"] = equidistribution_check(spec, cfg.params.equidist_N);
  r.summary["verdict"] = "ok";
  detail::finish(r, "equidist", format, csv.str());
  return r;
}

/// Validate then dispatch. `format` is csv, json or both.
inline CommandResult run_command(const std::string& command, const json& raw, const std::string& format = "both",
                                 unsigned workers = 1) {
  Diagnostics diag;
  ExperimentConfig cfg = parse_config(raw, diag);
  if (command == "validate") {
    const std::string target = raw.is_object() ? raw.value("command", std::string("validate")) : "validate";
    validate_for_command(cfg, target, diag);
    return cmd_validate(cfg, diag, target);
  }
  validate_for_command(cfg, command, diag);
  if (!diag.ok()) {
    CommandResult r = cmd_validate(cfg, diag, command);
    r.files.clear();
    return r;
  }
  try {
    if (command == "measure-ur") return cmd_measure_ur(cfg, format, workers);
    if (command == "thm1") return cmd_thm1(cfg, format, workers);
    if (command == "js-scan") return cmd_js_scan(cfg, format, workers);
    if (command == "thm2") return cmd_thm2(cfg, format, workers);
    if (command == "thm3") return cmd_thm3(cfg, format, workers);
    if (command == "spectrum") return cmd_spectrum(cfg, format, workers);
    return cmd_equidist(cfg, format, workers);
  } catch (const HypothesisViolation& e) {
    CommandResult r;
    r.exit_code = kExitConfig;
    r.messages.push_back(e.what());
    return r;
  } catch (const ValidationError& e) {
    CommandResult r;
    r.exit_code = kExitConfig;
    r.messages.push_back(e.what());
    return r;
  } catch (const Error& e) {
    CommandResult r;
    r.exit_code = kExitRuntime;
    r.messages.push_back(e.what());
    return r;
  }
}

}  // namespace apsym
