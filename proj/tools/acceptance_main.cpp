// Prints one PASS/FAIL line per acceptance criterion.
// usage: acceptance <path to verifier executable> [scratch dir]

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "thetalab/verifier.hpp"

using namespace thetalab;
using verifier::CheckResult;
using verifier::Status;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<bool(const CheckResult&)> selects;
};

bool starts(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int shell(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <verifier> [scratch dir]\n";
    return 2;
  }
  const std::string exe = argv[1];
  const std::filesystem::path dir =
      argc > 2 ? std::filesystem::path(argv[2]) : std::filesystem::temp_directory_path() / "thetalab-acceptance";
  std::filesystem::create_directories(dir);

  const verifier::Report report = verifier::run(verifier::RunConfig::defaults());

  const auto in = [](std::string suite, std::vector<std::string> prefixes) {
    return [suite, prefixes](const CheckResult& c) {
      if (c.suite != suite) return false;
      for (const auto& p : prefixes) {
        if (starts(c.check, p)) return true;
      }
      return false;
    };
  };
  const std::vector<Criterion> criteria{
      {1, "theta functional equation", in("theta", {"functional equation"})},
      {2, "odd vanishing and even gradients", in("theta", {"odd characteristic", "even gradient"})},
      {3, "derivative fidelity", in("theta", {"gradient vs", "hessian vs"})},
      {4, "base points", in("models", {"base points"})},
      {5, "invariants of a (1,2,2) divisor", in("models", {"numerical invariants"})},
      {6, "Legendre relations and eta vanishing",
       in("legendre", {"Legendre relations on", "x' floor", "eta vanishes", "eta floor"})},
      {7, "v3 identity as printed", in("models", {"v3(z,-z) = -2 theta0^2"})},
      {8, "symbolic minor ledger", in("symbolic", {"minor ", "ledger runtime"})},
      {9, "rank dichotomy and census of 24 points", in("canonical", {"rank ", "census count"})},
      {10, "involution factorisation", in("canonical", {"involution", "deformed involution"})},
      {11, "affine and analytic agreement", in("legendre", {"basis alignment", "surface relation"})},
      {12, "bidouble certificates", in("bidouble", {"diagonal invariance", "swap antisymmetry", "psi is group",
                                                     "coordinate lines"})},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    int n = 0;
    std::string why;
    bool ok = true;
    for (const auto& c : report.checks) {
      if (!cr.selects(c)) continue;
      ++n;
      if (c.status != Status::pass) {
        ok = false;
        why += (why.empty() ? "" : "; ") + c.check + " [" + verifier::to_string(c.status) + "]";
      }
    }
    if (n == 0) {
      ok = false;
      why = "no checks ran";
    }
    failed += ok ? 0 : 1;
    std::printf("%s criterion %d: %s (%d checks)%s%s\n", ok ? "PASS" : "FAIL", cr.id, cr.title.c_str(), n,
                why.empty() ? "" : " -- ", why.c_str());
  }

  // Determinism and the command-line contract.
  std::string why;
  const std::string base = "\"" + exe + "\" run --suite theta --suite canonical --samples 30 --seed 11";
  const auto p = [&](const std::string& f) { return "\"" + (dir / f).string() + "\""; };
  const int r1 = shell(base + " --out " + p("r1.json") + " --samples-out " + p("s1.csv") + " > /dev/null");
  const int r2 = shell("VERIFIER_THREADS=1 " + base + " --out " + p("r2.json") + " --samples-out " + p("s2.csv") +
                       " > /dev/null");
  if (r1 != 0 || r2 != 0) why += "theta/canonical run exited " + std::to_string(r1) + "/" + std::to_string(r2) + "; ";
  const std::string csv1 = slurp(dir / "s1.csv");
  if (csv1.empty() || csv1 != slurp(dir / "s2.csv")) why += "CSV differs between runs; ";
  auto j1 = nlohmann::json::parse(slurp(dir / "r1.json"), nullptr, false);
  auto j2 = nlohmann::json::parse(slurp(dir / "r2.json"), nullptr, false);
  if (j1.is_discarded() || j2.is_discarded()) {
    why += "report is not JSON; ";
  } else {
    j1.erase("timing");
    j2.erase("timing");
    if (j1 != j2) why += "reports differ; ";
  }
  std::size_t rows = 0;
  for (char ch : csv1) rows += ch == '\n' ? 1 : 0;
  if (csv1.find('\r') != std::string::npos) why += "CSV has CR line endings; ";
  if (rows < 31) why += "CSV has " + std::to_string(rows) + " lines; ";
  {
    std::ofstream bad(dir / "bad.json");
    bad << R"({"tau": [[[0,1],[0.2,0],[0,0]], [[0,0],[0,1.3],[0,0]], [[0,0],[0,0],[0,0.7]]]})";
  }
  const int rc_bad = shell("\"" + exe + "\" run --config " + p("bad.json") + " > /dev/null 2> " + p("bad.err"));
  std::size_t err_lines = 0;
  for (char ch : slurp(dir / "bad.err")) err_lines += ch == '\n' ? 1 : 0;
  if (rc_bad != 2 || err_lines != 1) why += "malformed tau gave exit " + std::to_string(rc_bad) + "; ";
  const int rc_sym = shell("\"" + exe + "\" run --suite symbolic > /dev/null");
  const bool sym_fails = std::any_of(report.checks.begin(), report.checks.end(), [](const CheckResult& c) {
    return c.suite == "symbolic" && c.status == Status::fail;
  });
  if (rc_sym != (sym_fails ? 1 : 0)) why += "symbolic suite exit code " + std::to_string(rc_sym) + "; ";
  const bool ok13 = why.empty();
  failed += ok13 ? 0 : 1;
  std::printf("%s criterion 13: determinism and interface%s%s\n", ok13 ? "PASS" : "FAIL", ok13 ? "" : " -- ",
              why.c_str());

  std::printf("%d of 13 criteria met\n", 13 - failed);
  return failed == 0 ? 0 : 1;
}
