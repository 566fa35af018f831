// apsym: batch experiments on reflection symmetries of almost periodic hulls.
//
// Usage:
//   apsym <command> --config PATH [--seed U64] [--samples N] [--workers K]
//                   [--out DIR] [--format csv|json|both]
//
// Commands: validate, measure-ur, js-scan, thm1, thm2, thm3, spectrum, equidist.
// Flags override the corresponding config entries.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "apsym/experiment.hpp"

namespace {

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  unsigned workers = 0;
  std::string out;
  std::string format;
  std::string target;
  bool dump_samples = false;
  bool eigenvectors = false;
};

bool given(const CLI::App& sub, const std::string& name) {
  const auto* opt = sub.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

int run(const std::string& command, const Flags& f, CLI::App& sub) {
  using apsym::json;
  json raw = json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) {
      std::cerr << "apsym: cannot open config " << f.config << "\n";
      return apsym::kExitConfig;
    }
    try {
      raw = json::parse(in);
    } catch (const json::parse_error& e) {
      std::cerr << "apsym: " << f.config << ": " << e.what() << "\n";
      return apsym::kExitConfig;
    }
  }
  if (!raw.is_object()) {
    std::cerr << "apsym: config must be a JSON object\n";
    return apsym::kExitConfig;
  }
  // flags win over the config file
  if (given(sub, "--seed")) raw["seed"] = f.seed;
  if (given(sub, "--samples")) {
    raw["params"][command == "thm3" ? "points" : "samples"] = f.samples;
  }
  if (given(sub, "--for")) raw["command"] = f.target;
  if (f.dump_samples) raw["params"]["dump_samples"] = true;
  if (f.eigenvectors) raw["params"]["eigenvectors"] = true;

  unsigned workers = 1;
  if (given(sub, "--workers")) {
    workers = f.workers;
  } else if (raw.contains("workers") && raw["workers"].is_number_integer() && raw["workers"].get<std::int64_t>() > 0) {
    workers = raw["workers"].get<unsigned>();
  }
  std::string out = given(sub, "--out") ? f.out : raw.value("out", std::string("."));
  std::string format = given(sub, "--format") ? f.format : raw.value("format", std::string("both"));
  if (format != "csv" && format != "json" && format != "both") {
    std::cerr << "apsym: --format must be csv, json or both\n";
    return apsym::kExitConfig;
  }

  apsym::CommandResult res;
  try {
    res = apsym::run_command(command, raw, format, workers == 0 ? 1 : workers);
  } catch (const std::exception& e) {
    std::cerr << "apsym: " << e.what() << "\n";
    return apsym::kExitRuntime;
  }
  for (const auto& m : res.messages) std::cerr << "apsym: " << m << "\n";

  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) {
    std::cerr << "apsym: cannot create " << out << ": " << ec.message() << "\n";
    return apsym::kExitRuntime;
  }
  for (const auto& [name, contents] : res.files) {
    const auto path = std::filesystem::path(out) / name;
    std::ofstream o(path, std::ios::binary);
    o << contents;
    if (!o) {
      std::cerr << "apsym: failed writing " << path << "\n";
      return apsym::kExitRuntime;
    }
  }
  if (res.summary.contains("verdict")) {
    std::cout << command << ": " << res.summary["verdict"].get<std::string>() << "\n";
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflection symmetries of almost periodic functions: Haar-measure experiments"};
  app.set_version_flag("--version", std::string(apsym::kToolName) + " " + apsym::kVersion);
  app.require_subcommand(1);

  Flags flags;
  for (const auto& name : apsym::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config, "experiment config (JSON)");
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--samples", flags.samples, "Haar samples (points for thm3)")->check(CLI::PositiveNumber);
    sub->add_option("--workers", flags.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--format", flags.format, "csv, json or both");
    if (name == "validate") sub->add_option("--for", flags.target, "command whose requirements to check");
    if (name == "measure-ur" || name == "thm1") sub->add_flag("--dump-samples", flags.dump_samples, "write samples.csv");
    if (name == "spectrum") sub->add_flag("--eigenvectors", flags.eigenvectors, "write eigenvectors.csv");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : apsym::kExitConfig;
  }
  for (auto* sub : app.get_subcommands()) return run(sub->get_name(), flags, *sub);
  return apsym::kExitConfig;
}
