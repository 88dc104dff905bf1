#pragma once

// Run configuration, check registry and reporting for the verifier.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thetalab/canonical.hpp"

namespace thetalab::verifier {

inline const std::vector<std::string> kSuiteOrder{"theta", "models", "canonical", "legendre",
                                                  "symbolic", "bidouble"};

struct RunConfig {
  CMatrix tau;
  std::array<cplx, 3> coeffs;
  cplx deformed_tau12{0.15, 0.05};
  std::map<std::string, double> tolerances;
  int samples = 200;
  std::uint64_t seed = 1;
  std::vector<std::string> suites{"all"};

  static RunConfig defaults();
  static const std::map<std::string, double>& default_tolerances();

  /// Missing fields keep their defaults; ConfigInvalid on any malformed field.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  /// tau symmetric with positive definite imaginary part, coefficients nonzero,
  /// samples positive, suites known, tolerances known and positive.
  void validate() const;
  double tol(const std::string& name) const;
  /// "all" expanded into kSuiteOrder; duplicates dropped, registry order kept.
  std::vector<std::string> expanded_suites() const;

  SurfaceSpec surface() const;
  SurfaceSpec deformed_surface() const;
};

enum class Status { pass, fail, finding };
std::string to_string(Status s);

struct CheckResult {
  std::string suite;
  std::string check;
  Status status = Status::fail;
  double max_error = 0.0;
  long long count = 0;
  std::string details;
  std::string anchor;  // the statement being checked, in words

  nlohmann::json to_json() const;
};

struct SampleRow {
  std::string kind;  // "sample" or "census"
  TorusPoint point;
  CVector coords;  // normalised canonical coordinates
  std::array<double, 4> sigma{};
};

struct Report {
  RunConfig config;
  std::vector<CheckResult> checks;
  std::vector<SampleRow> samples;
  std::map<std::string, double> seconds;  // wall time per suite

  bool any_failed() const;
  int count(Status s) const;
  /// Everything except timings, which live under "timing".
  nlohmann::json to_json() const;
};

/// Worker count: VERIFIER_THREADS if set and positive, else hardware concurrency.
int thread_cap();

/// Runs the configured suites in registry order. Engine errors inside a
/// check become failed checks.
Report run(const RunConfig& config);

/// Fixed header, %.17g numbers, LF line endings. IoError if the file cannot be written.
void write_samples_csv(const Report& report, const std::filesystem::path& path);
void write_report_json(const Report& report, const std::filesystem::path& path);

}  // namespace thetalab::verifier
