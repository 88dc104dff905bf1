// verifier run --config cfg.json --suite theta --suite canonical --out report.json
//              --samples-out samples.csv --seed 7

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "thetalab/verifier.hpp"

using namespace thetalab;

int main(int argc, char** argv) {
  CLI::App app{"Checks theta-function surfaces, their canonical maps and the exact identity ledger"};
  app.require_subcommand(1);
  CLI::App* run = app.add_subcommand("run", "Run verification suites");

  std::string config_path, out_path, samples_path;
  std::vector<std::string> suites;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  run->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  run->add_option("--suite", suites, "theta, models, canonical, legendre, symbolic, bidouble or all");
  run->add_option("--out", out_path, "JSON report path");
  run->add_option("--samples-out", samples_path, "CSV of sampled surface points");
  run->add_option("--seed", seed, "64-bit seed");
  run->add_option("--samples", samples, "number of random surface points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ConfigInvalid: " << e.what() << '\n';
    return 2;
  }

  verifier::RunConfig cfg;
  try {
    cfg = config_path.empty() ? verifier::RunConfig::defaults() : verifier::RunConfig::load(config_path);
    if (!suites.empty()) cfg.suites = suites;
    if (seed) cfg.seed = *seed;
    if (samples) cfg.samples = *samples;
    cfg.validate();
    const auto chosen = cfg.expanded_suites();
    if (!samples_path.empty() && std::find(chosen.begin(), chosen.end(), "canonical") == chosen.end()) {
      throw Error(ErrorKind::ConfigInvalid, "--samples-out needs the canonical suite");
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  const verifier::Report report = verifier::run(cfg);
  for (const auto& c : report.checks) {
    std::printf("%-8s %-10s %-52s %.3g\n", verifier::to_string(c.status).c_str(), c.suite.c_str(),
                c.check.c_str(), c.max_error);
  }
  std::printf("pass %d  fail %d  finding %d\n", report.count(verifier::Status::pass),
              report.count(verifier::Status::fail), report.count(verifier::Status::finding));
  try {
    if (!out_path.empty()) verifier::write_report_json(report, out_path);
    if (!samples_path.empty()) verifier::write_samples_csv(report, samples_path);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  return report.any_failed() ? 1 : 0;
}
