#include "thetalab/verifier.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "thetalab/bidouble.hpp"
#include "thetalab/legendre.hpp"

namespace thetalab::verifier {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); }

cplx parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    invalid(where + " must be a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

const std::map<std::string, double>& RunConfig::default_tolerances() {
  static const std::map<std::string, double> tols{
      {"functional_equation", 1e-9}, {"odd_vanishing", 1e-12}, {"even_gradient", 1e-10},
      {"derivative", 1e-6},          {"base_point", 1e-9},     {"legendre", 1e-9},
      {"torsion_floor", 1e-3},       {"v3", 1e-9},             {"rank_floor", 1e-4},
      {"degenerate", 1e-7},          {"involution", 1e-8},     {"alignment", 1e-6},
      {"surface_relation", 1e-9},    {"bitangent", 1e-8},      {"chart", 1e-8},
      {"ledger_seconds", 30.0},
  };
  return tols;
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.tau = CMatrix::Zero(3, 3);
  c.tau(0, 0) = {0.0, 1.0};
  c.tau(1, 1) = {0.0, 1.3};
  c.tau(2, 2) = {0.0, 0.7};
  c.coeffs = {cplx{0.9, 0.1}, cplx{1.1, -0.2}, cplx{0.8, 0.3}};
  c.tolerances = default_tolerances();
  return c;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c = defaults();
  if (!j.is_object()) invalid("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "tau") {
      if (!value.is_array() || value.size() != 3) invalid("tau must be a 3x3 matrix");
      for (std::size_t r = 0; r < 3; ++r) {
        if (!value[r].is_array() || value[r].size() != 3) invalid("tau must be a 3x3 matrix");
        for (std::size_t k = 0; k < 3; ++k) {
          c.tau(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
              parse_complex(value[r][k], "tau entry");
        }
      }
    } else if (key == "coeffs") {
      if (!value.is_object()) invalid("coeffs must be an object with b, c, d");
      const std::array<const char*, 3> names{"b", "c", "d"};
      for (std::size_t i = 0; i < 3; ++i) {
        if (!value.contains(names[i])) invalid(std::string("coeffs.") + names[i] + " missing");
        c.coeffs[i] = parse_complex(value[names[i]], std::string("coeffs.") + names[i]);
      }
    } else if (key == "deformed_tau12") {
      c.deformed_tau12 = parse_complex(value, "deformed_tau12");
    } else if (key == "tolerances") {
      if (!value.is_object()) invalid("tolerances must be an object");
      for (const auto& [name, tol] : value.items()) {
        if (!tol.is_number()) invalid("tolerance " + name + " must be a number");
        c.tolerances[name] = tol.get<double>();
      }
    } else if (key == "samples") {
      if (!value.is_number_integer()) invalid("samples must be an integer");
      const long long s = value.get<long long>();
      if (s <= 0 || s > 1000000) invalid("samples must be positive");
      c.samples = static_cast<int>(s);
    } else if (key == "seed") {
      if (!value.is_number_integer() || (!value.is_number_unsigned() && value.get<long long>() < 0)) {
        invalid("seed must be an unsigned integer");
      }
      c.seed = value.get<std::uint64_t>();
    } else if (key == "suites") {
      if (!value.is_array()) invalid("suites must be a list");
      c.suites.clear();
      for (const auto& s : value) {
        if (!s.is_string()) invalid("suite names must be strings");
        c.suites.push_back(s.get<std::string>());
      }
    } else {
      invalid("unknown config field '" + key + "'");
    }
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    invalid("config is not valid JSON: " + std::string(e.what()));
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  json t = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int k = 0; k < 3; ++k) row.push_back(complex_json(tau(r, k)));
    t.push_back(row);
  }
  return json{{"tau", t},
              {"coeffs", {{"b", complex_json(coeffs[0])}, {"c", complex_json(coeffs[1])}, {"d", complex_json(coeffs[2])}}},
              {"deformed_tau12", complex_json(deformed_tau12)},
              {"tolerances", tolerances},
              {"samples", samples},
              {"seed", seed},
              {"suites", suites}};
}

void RunConfig::validate() const {
  if (tau.rows() != 3 || tau.cols() != 3) invalid("tau must be 3x3");
  if (!tau.allFinite()) invalid("tau has non-finite entries");
  for (int r = 0; r < 3; ++r) {
    for (int k = r + 1; k < 3; ++k) {
      if (tau(r, k) != tau(k, r)) invalid("tau is not symmetric");
    }
  }
  try {
    PeriodMatrix check(tau);
  } catch (const Error& e) {
    invalid(std::string("tau rejected: ") + e.what());
  }
  for (cplx c : coeffs) {
    if (c == cplx{0.0, 0.0} || !std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      invalid("coefficients b, c, d must be finite and nonzero");
    }
  }
  if (samples <= 0) invalid("samples must be positive");
  if (suites.empty()) invalid("no suites requested");
  for (const auto& s : suites) {
    if (s != "all" && std::find(kSuiteOrder.begin(), kSuiteOrder.end(), s) == kSuiteOrder.end()) {
      invalid("unknown suite '" + s + "'");
    }
  }
  for (const auto& [name, value] : tolerances) {
    if (!default_tolerances().count(name)) invalid("unknown tolerance '" + name + "'");
    if (!(value > 0.0) || !std::isfinite(value)) invalid("tolerance '" + name + "' must be positive");
  }
}

double RunConfig::tol(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it != tolerances.end()) return it->second;
  return default_tolerances().at(name);
}

std::vector<std::string> RunConfig::expanded_suites() const {
  std::vector<std::string> out;
  for (const auto& name : kSuiteOrder) {
    for (const auto& s : suites) {
      if (s == name || s == "all") {
        out.push_back(name);
        break;
      }
    }
  }
  return out;
}

SurfaceSpec RunConfig::surface() const { return SurfaceSpec(PeriodMatrix(tau), coeffs); }

SurfaceSpec RunConfig::deformed_surface() const {
  CMatrix m = CMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) m(i, i) = tau(i, i);
  m(0, 1) = m(1, 0) = deformed_tau12;
  return SurfaceSpec(PeriodMatrix(m), coeffs);
}

// ---------------------------------------------------------------------------
// Results

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::finding: return "finding";
  }
  return "?";
}

json CheckResult::to_json() const {
  return json{{"suite", suite},   {"check", check},     {"status", verifier::to_string(status)},
              {"max_error", max_error}, {"count", count}, {"details", details},
              {"anchor", anchor}};
}

bool Report::any_failed() const { return count(Status::fail) > 0; }

int Report::count(Status s) const {
  int n = 0;
  for (const auto& c : checks) n += c.status == s ? 1 : 0;
  return n;
}

json Report::to_json() const {
  json checks_json = json::array();
  for (const auto& c : checks) checks_json.push_back(c.to_json());
  return json{{"config", config.to_json()},
              {"checks", checks_json},
              {"summary",
               {{"pass", count(Status::pass)}, {"fail", count(Status::fail)}, {"finding", count(Status::finding)}}},
              {"timing", seconds}};
}

int thread_cap() {
  if (const char* env = std::getenv("VERIFIER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// Check helpers

namespace {

struct Ctx {
  const RunConfig& cfg;
  std::string suite;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Check comparing an error against a tolerance.
CheckResult bounded(const Ctx& ctx, std::string name, double err, double tol, long long count,
                    std::string anchor, std::string details = "") {
  CheckResult r{ctx.suite, std::move(name), Status::pass, err, count, std::move(details), std::move(anchor)};
  r.status = err < tol && std::isfinite(err) ? Status::pass : Status::fail;
  if (r.details.empty()) r.details = "max error " + fmt(err) + " against " + fmt(tol);
  return r;
}

// Lower-bound check; max_error is the shortfall below the floor.
CheckResult floored(const Ctx& ctx, std::string name, double value, double floor, long long count,
                    std::string anchor) {
  CheckResult r{ctx.suite, std::move(name), Status::pass, std::max(0.0, floor - value), count,
                "minimum " + fmt(value) + " against floor " + fmt(floor), std::move(anchor)};
  r.status = value > floor ? Status::pass : Status::fail;
  return r;
}

CheckResult exact(const Ctx& ctx, std::string name, bool ok, long long count, std::string anchor,
                  std::string details) {
  return CheckResult{ctx.suite, std::move(name), ok ? Status::pass : Status::fail, ok ? 0.0 : 1.0,
                     count, std::move(details), std::move(anchor)};
}

using Task = std::function<std::vector<CheckResult>()>;

// Runs the tasks on up to thread_cap() workers; results keep task order.
std::vector<CheckResult> run_tasks(const Ctx& ctx, const std::vector<std::pair<std::string, Task>>& tasks) {
  std::vector<std::vector<CheckResult>> out(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        out[i] = tasks[i].second();
      } catch (const std::exception& e) {
        out[i] = {CheckResult{ctx.suite, tasks[i].first, Status::fail, 0.0, 0,
                              std::string("error: ") + e.what(), ""}};
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(thread_cap()), tasks.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<CheckResult> flat;
  for (auto& v : out) flat.insert(flat.end(), v.begin(), v.end());
  return flat;
}

std::uint64_t task_seed(const RunConfig& cfg, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char ch : name) h = (h ^ ch) * 1099511628211ull;
  return derive_seed(cfg.seed, h);
}

CVector random_z(std::mt19937_64& rng, int g) {
  std::uniform_real_distribution<double> re(0.0, 2.0), im(-0.5, 0.5);
  CVector z(g);
  for (int i = 0; i < g; ++i) z(i) = {re(rng), im(rng)};
  return z;
}

PeriodMatrix leading_block(const CMatrix& tau, int g) { return PeriodMatrix(tau.topLeftCorner(g, g)); }

// ---------------------------------------------------------------------------
// theta

std::vector<CheckResult> theta_suite(const Ctx& ctx) {
  const RunConfig& cfg = ctx.cfg;
  std::vector<std::pair<std::string, Task>> tasks;

  tasks.emplace_back("functional equation", [&] {
    std::vector<CheckResult> out;
    for (int g = 1; g <= 3; ++g) {
      std::mt19937_64 rng(task_seed(cfg, "functional equation " + std::to_string(g)));
      const PeriodMatrix tau = leading_block(cfg.tau, g);
      double worst = 0.0;
      long long n = 0;
      for (int gen = 0; gen < 2 * g; ++gen) {
        const CVector lam = gen < g ? CVector(tau.entries().col(gen)) : CVector(2.0 * CVector::Unit(g, gen - g));
        for (int k = 0; k < 100; ++k) {
          const CVector z = random_z(rng, g);
          std::vector<int> a2(static_cast<std::size_t>(g));
          for (auto& a : a2) a = static_cast<int>(rng() & 1u);
          const auto chi = ThetaCharacteristic::even(a2);
          const cplx shifted = theta_value(z + lam, tau, chi);
          const cplx expected = automorphy_factor(lam, z, tau) * theta_value(z, tau, chi);
          worst = std::max(worst, std::abs(shifted - expected) / gaussian_scale(z + lam, tau));
          ++n;
        }
      }
      out.push_back(bounded(ctx, "functional equation g=" + std::to_string(g), worst,
                            cfg.tol("functional_equation"), n,
                            "theta(z + lambda) = factor of automorphy * theta(z)"));
    }
    return out;
  });

  tasks.emplace_back("odd characteristic at 0", [&] {
    double worst = 0.0;
    for (cplx t : {cplx{0.0, 1.0}, cfg.tau(0, 0), cfg.tau(1, 1), cfg.tau(2, 2)}) {
      const std::array<int, 1> h{1};
      const auto chi = ThetaCharacteristic::halves(h, h);
      worst = std::max(worst, std::abs(theta_value(CVector::Zero(1), PeriodMatrix::scalar(t), chi)));
    }
    return std::vector<CheckResult>{bounded(ctx, "odd characteristic at 0", worst, cfg.tol("odd_vanishing"), 4,
                                            "theta[1/2,1/2](0) = 0")};
  });

  tasks.emplace_back("even gradient at 0", [&] {
    const PeriodMatrix tau(cfg.tau);
    double worst = 0.0;
    for (int code = 0; code < 8; ++code) {
      const std::array<int, 3> a2{code & 1, (code >> 1) & 1, (code >> 2) & 1};
      const ThetaJet j = theta_jet(CVector::Zero(3), tau, ThetaCharacteristic::even(a2));
      worst = std::max(worst, j.gradient.cwiseAbs().maxCoeff());
    }
    return std::vector<CheckResult>{bounded(ctx, "even gradient at 0", worst, cfg.tol("even_gradient"), 8,
                                            "gradients of even sections vanish at the origin")};
  });

  tasks.emplace_back("derivative fidelity", [&] {
    const PeriodMatrix tau(cfg.tau);
    std::mt19937_64 rng(task_seed(cfg, "derivative fidelity"));
    const double h = 1e-5;
    double grad_err = 0.0, hess_err = 0.0;
    for (int k = 0; k < 100; ++k) {
      const CVector z = random_z(rng, 3);
      const std::array<int, 3> a2{static_cast<int>(rng() & 1u), static_cast<int>(rng() & 1u),
                                  static_cast<int>(rng() & 1u)};
      const auto chi = ThetaCharacteristic::even(a2);
      const ThetaJet j = theta_jet(z, tau, chi);
      const double s = gaussian_scale(z, tau);
      for (int i = 0; i < 3; ++i) {
        const CVector e = h * CVector::Unit(3, i);
        const ThetaJet p = theta_jet(z + e, tau, chi), m = theta_jet(z - e, tau, chi);
        grad_err = std::max(grad_err, std::abs((p.value - m.value) / (2 * h) - j.gradient(i)) / s);
        for (int l = 0; l < 3; ++l) {
          hess_err = std::max(hess_err, std::abs((p.gradient(l) - m.gradient(l)) / (2 * h) - j.hessian(i, l)) / s);
        }
      }
    }
    return std::vector<CheckResult>{
        bounded(ctx, "gradient vs finite differences", grad_err, cfg.tol("derivative"), 100,
                "analytic gradient of theta"),
        bounded(ctx, "hessian vs finite differences", hess_err, cfg.tol("derivative"), 100,
                "analytic second derivatives of theta")};
  });
  return run_tasks(ctx, tasks);
}

// ---------------------------------------------------------------------------
// models

std::vector<CheckResult> models_suite(const Ctx& ctx) {
  const RunConfig& cfg = ctx.cfg;
  std::vector<std::pair<std::string, Task>> tasks;

  tasks.emplace_back("base points", [&] {
    std::mt19937_64 rng(task_seed(cfg, "base points"));
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    double worst = 0.0;
    int min_count = 1 << 30;
    int max_count = 0;
    for (int t = 0; t < 5; ++t) {
      std::array<cplx, 3> c;
      for (auto& x : c) x = {u(rng), u(rng)};
      const SurfaceSpec spec(PeriodMatrix(cfg.tau), c);
      const auto pts = base_points(spec);
      for (const auto& p : pts) {
        const double s = membership_scale(spec, p.z);
        for (const auto& j : basis_jets(spec, p.z)) worst = std::max(worst, std::abs(j.value) / s);
      }
      int distinct = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        bool fresh = true;
        for (std::size_t k = 0; k < i; ++k) fresh = fresh && abelian_distance(pts[i].z, pts[k].z, spec.tau) > 1e-6;
        distinct += fresh ? 1 : 0;
      }
      min_count = std::min(min_count, distinct);
      max_count = std::max(max_count, distinct);
    }
    auto r = bounded(ctx, "base points", worst, cfg.tol("base_point"), 5,
                     "the 16 base points annihilate all four basis sections");
    r.details += "; distinct points per triple " + std::to_string(min_count) + ".." + std::to_string(max_count);
    if (min_count != 16 || max_count != 16) r.status = Status::fail;
    return std::vector<CheckResult>{r};
  });

  tasks.emplace_back("deformed base points", [&] {
    const SurfaceSpec spec = cfg.deformed_surface();
    const auto pts = base_points_continued(spec);
    double worst = 0.0;
    for (const auto& p : pts) {
      const double s = membership_scale(spec, p.z);
      for (const auto& j : basis_jets(spec, p.z)) worst = std::max(worst, std::abs(j.value) / s);
    }
    return std::vector<CheckResult>{bounded(ctx, "deformed base points", worst, cfg.tol("base_point"),
                                            static_cast<long long>(pts.size()),
                                            "base points persist for non-diagonal tau")};
  });

  tasks.emplace_back("numerical invariants", [&] {
    const std::array<int, 3> type{1, 2, 2};
    const NumericalInvariants inv = numerical_invariants(type);
    const bool ok = inv == NumericalInvariants{6, 3, 24};
    return std::vector<CheckResult>{exact(ctx, "numerical invariants (1,2,2)", ok, 1, "p_g = 6, q = 3, K^2 = 24",
                                          "got (" + std::to_string(inv.p_g) + ", " + std::to_string(inv.q) +
                                              ", " + std::to_string(inv.k_power) + ")")};
  });

  tasks.emplace_back("pencil decomposition", [&] {
    const SurfaceSpec spec = cfg.surface();
    std::mt19937_64 rng(task_seed(cfg, "pencil decomposition"));
    double worst = 0.0;
    for (int axis = 1; axis <= 3; ++axis) {
      const PencilSections pencil(spec, axis);
      for (int k = 0; k < 20; ++k) {
        const CVector z = random_z(rng, 3);
        const auto [i, j] = pencil.block();
        CVector zij(2);
        zij << z(i - 1), z(j - 1);
        const cplx zk = z(axis - 1);
        const cplx rebuilt = pencil.f(zij).value * pencil.fibre_theta(0, zk).value +
                             pencil.g(zij).value * pencil.fibre_theta(1, zk).value;
        worst = std::max(worst, std::abs(rebuilt - surface_f(spec, z).value) / membership_scale(spec, z));
      }
    }
    return std::vector<CheckResult>{bounded(ctx, "pencil decomposition", worst, cfg.tol("base_point"), 60,
                                            "f = f^(ij) theta_0^(k) + g^(ij) theta_1^(k)")};
  });

  tasks.emplace_back("v3 identity", [&] {
    std::mt19937_64 rng(task_seed(cfg, "v3 identity"));
    double printed = 0.0, single = 0.0;
    for (int k = 0; k < 100; ++k) {
      const cplx t = cfg.tau(k % 3, k % 3);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const cplx z = 2.0 * u(rng) + t * u(rng);
      const cplx v3 = rho_v3(z, -z, t).v3;
      const cplx th0 = elliptic_theta(0, z, t).value, th1 = elliptic_theta(1, z, t).value;
      const cplx eta = eta_section(z, t);
      const cplx a = -2.0 * th0 * th0 * th1 * th1 * eta;
      const cplx b = -2.0 * th0 * th1 * eta;
      printed = std::max(printed, std::abs(v3 - a) / std::max(std::abs(v3), std::abs(a)));
      single = std::max(single, std::abs(v3 - b) / std::max(std::abs(v3), std::abs(b)));
    }
    return std::vector<CheckResult>{
        bounded(ctx, "v3(z,-z) = -2 theta0^2 theta1^2 eta", printed, cfg.tol("v3"), 100,
                "v3(z,-z) = -2 theta0(z)^2 theta1(z)^2 eta(z)"),
        bounded(ctx, "v3(z,-z) = -2 theta0 theta1 eta", single, cfg.tol("v3"), 100,
                "degree-consistent form of the v3 identity")};
  });
  return run_tasks(ctx, tasks);
}

// ---------------------------------------------------------------------------
// canonical

std::vector<CheckResult> canonical_suite(const Ctx& ctx, std::vector<SampleRow>& rows) {
  const RunConfig& cfg = ctx.cfg;
  std::vector<SampleRow> sample_rows, census_rows;
  std::vector<std::pair<std::string, Task>> tasks;

  tasks.emplace_back("rank at base points", [&] {
    const SurfaceSpec spec = cfg.surface();
    double low = 1e300;
    const auto pts = base_points(spec);
    for (const auto& p : pts) low = std::min(low, diff_rank_matrix(spec, p).ratio());
    return std::vector<CheckResult>{floored(ctx, "rank 4 at base points", low, cfg.tol("rank_floor"),
                                            static_cast<long long>(pts.size()),
                                            "the differential matrix has rank 4 at every base point")};
  });

  tasks.emplace_back("rank at random points", [&] {
    const SurfaceSpec spec = cfg.surface();
    const std::uint64_t base = task_seed(cfg, "surface samples");
    double low = 1e300;
    for (int k = 0; k < cfg.samples; ++k) {
      const TorusPoint p = sample_surface_point(spec, derive_seed(base, static_cast<std::uint64_t>(k)));
      const RankReport rep = diff_rank_matrix(spec, p);
      low = std::min(low, rep.ratio());
      sample_rows.push_back({"sample", p, canonical_image(spec, p).coords, rep.singular_values});
    }
    return std::vector<CheckResult>{floored(ctx, "rank 4 at random surface points", low, cfg.tol("rank_floor"),
                                            cfg.samples, "the canonical map is an immersion at general points")};
  });

  tasks.emplace_back("degeneracy census", [&] {
    const SurfaceSpec spec = cfg.surface();
    const CensusResult census = rank_census(spec);
    double worst = 0.0;
    std::ostringstream spectra;
    for (const auto& rep : census.reports) {
      worst = std::max(worst, rep.ratio());
      spectra << " [";
      for (std::size_t i = 0; i < 4; ++i) spectra << (i ? "," : "") << fmt(rep.singular_values[i]);
      spectra << "]";
      census_rows.push_back({"census", rep.point, canonical_image(spec, rep.point).coords, rep.singular_values});
    }
    std::vector<CheckResult> out;
    out.push_back(bounded(ctx, "rank drops at census points", worst, cfg.tol("degenerate"), census.total,
                          "sigma4/sigma1 vanishes at the degeneracy points"));
    CheckResult count{ctx.suite, "census count", Status::pass, 0.0, census.total, "",
                      "the differential drops rank at 24 points"};
    count.details = "total " + std::to_string(census.total) + ", classes under z -> -z " +
                    std::to_string(census.sign_classes) + "; block zeros per axis " +
                    std::to_string(census.axes[0].block_zero_count) + "," +
                    std::to_string(census.axes[1].block_zero_count) + "," +
                    std::to_string(census.axes[2].block_zero_count) + "; spectra" + spectra.str();
    if (census.total != 24) count.status = Status::finding;
    out.push_back(count);
    return out;
  });

  tasks.emplace_back("involution on W_j", [&] {
    const SurfaceSpec spec = cfg.surface();
    std::vector<CheckResult> out;
    for (int j = 1; j <= 3; ++j) {
      const std::uint64_t base = task_seed(cfg, "W" + std::to_string(j));
      double worst = 0.0;
      for (int k = 0; k < 50; ++k) {
        const TorusPoint p = sample_W(spec, j, derive_seed(base, static_cast<std::uint64_t>(k)));
        const TorusPoint q{apply_involution(p.z, {j}), 0.0};
        worst = std::max(worst, chordal_distance(canonical_image(spec, p), canonical_image(spec, q)));
      }
      out.push_back(bounded(ctx, "involution on W" + std::to_string(j), worst, cfg.tol("involution"), 50,
                            "the canonical map factors through iota_j on W_j"));
    }
    return out;
  });

  tasks.emplace_back("deformed involutions", [&] {
    const SurfaceSpec spec = cfg.deformed_surface();
    const std::uint64_t base = task_seed(cfg, "deformed W3");
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const TorusPoint p = sample_W(spec, 3, derive_seed(base, static_cast<std::uint64_t>(k)));
      const TorusPoint q{apply_involution(p.z, {3}), 0.0};
      worst = std::max(worst, chordal_distance(canonical_image(spec, p), canonical_image(spec, q)));
    }
    const auto roots = W_pair_roots(spec, 1, 2, 3, task_seed(cfg, "deformed W12"));
    double pair_worst = 0.0;
    for (const auto& p : roots) {
      const TorusPoint q{apply_involution(p.z, {1, 2}), 0.0};
      pair_worst = std::max(pair_worst, chordal_distance(canonical_image(spec, p), canonical_image(spec, q)));
    }
    auto pair = bounded(ctx, "deformed involution on W1 and W2", pair_worst, cfg.tol("involution"),
                        static_cast<long long>(roots.size()),
                        "iota_1 iota_2 identifies canonical images on W_1 and W_2");
    if (roots.empty()) {
      pair.status = Status::fail;
      pair.details = "no roots found";
    }
    return std::vector<CheckResult>{bounded(ctx, "deformed involution on W3", worst, cfg.tol("involution"), 50,
                                            "the canonical map factors through iota_3 on W_3"),
                                    pair};
  });

  auto out = run_tasks(ctx, tasks);
  rows.insert(rows.end(), sample_rows.begin(), sample_rows.end());
  rows.insert(rows.end(), census_rows.begin(), census_rows.end());
  return out;
}

// ---------------------------------------------------------------------------
// legendre

std::vector<CheckResult> legendre_suite(const Ctx& ctx) {
  const RunConfig& cfg = ctx.cfg;
  std::vector<std::pair<std::string, Task>> tasks;

  tasks.emplace_back("relations", [&] {
    std::vector<CheckResult> out;
    for (int i = 0; i < 3; ++i) {
      const LegendreModel model(cfg.tau(i, i));
      const std::string axis = std::to_string(i + 1);
      const std::uint64_t seed = task_seed(cfg, "legendre " + axis);
      double worst = 0.0;
      std::string worst_name;
      double floor = 0.0;
      for (const auto& r : legendre_relations(model, LegendreNormalization::TwoTau, 100, seed, cfg.tol("legendre"))) {
        if (r.name.find("floor") != std::string::npos) {
          floor = r.max_error;
        } else if (r.max_error >= worst) {
          worst = r.max_error;
          worst_name = r.name;
        }
      }
      auto rel = bounded(ctx, "Legendre relations on <2,tau" + axis + axis + ">", worst, cfg.tol("legendre"), 100,
                         "periodicity, sign flip, reflection, special values and vanishing derivative on 2-torsion");
      rel.details += "; worst relation: " + worst_name;
      out.push_back(rel);
      out.push_back(floored(ctx, "x' floor off 2-torsion, axis " + axis, floor, cfg.tol("torsion_floor"), 100,
                            "x' vanishes only on the 2-torsion"));

      std::string failed;
      double alt = 0.0;
      for (const auto& r : legendre_relations(model, LegendreNormalization::UnitRescaled, 100, seed, cfg.tol("legendre"))) {
        if (r.name.find("floor") != std::string::npos) continue;
        alt = std::max(alt, r.max_error);
        if (!r.passed) failed += (failed.empty() ? "" : "; ") + r.name;
      }
      CheckResult lit{ctx.suite, "Legendre relations with x(2z) on <1,tau" + axis + axis + ">",
                      failed.empty() ? Status::pass : Status::finding, alt, 100,
                      failed.empty() ? "all relations hold" : "fails: " + failed,
                      "literal unit-period normalisation of the Legendre relations"};
      out.push_back(lit);
    }
    return out;
  });

  tasks.emplace_back("eta vanishing", [&] {
    std::vector<CheckResult> out;
    for (int i = 0; i < 3; ++i) {
      const cplx t = cfg.tau(i, i);
      const std::string axis = std::to_string(i + 1);
      double on = 0.0;
      for (cplx p : {cplx{0.0}, cplx{1.0}, t / 2.0, 1.0 + t / 2.0}) {
        const double s = gaussian_scale(CVector::Constant(1, p), PeriodMatrix::scalar(t));
        on = std::max(on, std::abs(eta_section(p, t)) / (s * s));
      }
      std::mt19937_64 rng(task_seed(cfg, "eta " + axis));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double off = 1e300;
      int n = 0;
      while (n < 100) {
        const cplx z = 2.0 * u(rng) + t * u(rng);
        double dist = 1e300;
        for (int a = -1; a <= 2; ++a) {
          for (int b = -1; b <= 2; ++b) {
            for (cplx p : {cplx{0.0}, cplx{1.0}, t / 2.0, 1.0 + t / 2.0}) {
              dist = std::min(dist, std::abs(z - p - 2.0 * double(a) - t * double(b)));
            }
          }
        }
        if (dist < 0.1) continue;
        const double s = gaussian_scale(CVector::Constant(1, z), PeriodMatrix::scalar(t));
        off = std::min(off, std::abs(eta_section(z, t)) / (s * s));
        ++n;
      }
      out.push_back(bounded(ctx, "eta vanishes on 2-torsion, axis " + axis, on, cfg.tol("legendre"), 4,
                            "eta vanishes on the 2-torsion"));
      out.push_back(floored(ctx, "eta floor off 2-torsion, axis " + axis, off, cfg.tol("torsion_floor"), 100,
                            "eta vanishes only on the 2-torsion"));
    }
    return out;
  });

  tasks.emplace_back("affine model", [&] {
    const SurfaceSpec spec = cfg.surface();
    const auto samples = affine_samples(spec, 28, task_seed(cfg, "affine samples"));
    double chart = 0.0;
    for (const auto& s : samples) {
      for (int i = 0; i < 3; ++i) {
        const AffineChart c(LegendreModel(cfg.tau(i, i)));
        chart = std::max(chart, c.curve_residual(s.xy[static_cast<std::size_t>(i)]));
      }
    }
    std::vector<CheckResult> out;
    out.push_back(bounded(ctx, "affine points on Legendre curves", chart, cfg.tol("chart"),
                          static_cast<long long>(samples.size()), "y^2 = (x^2 - 1)(x^2 - a^2)"));
    try {
      const AlignmentResult a = basis_alignment(spec, samples, 8, cfg.tol("alignment"));
      auto r = bounded(ctx, "basis alignment", a.validation_error, cfg.tol("alignment"), a.validation_count,
                       "affine and analytic canonical maps agree up to a fixed linear change of basis");
      r.details += "; fit error " + fmt(a.fit_error) + ", condition number " + fmt(a.condition_number);
      if (a.validation_count < 20) r.status = Status::fail;
      out.push_back(r);
      out.push_back(bounded(ctx, "surface relation", a.max_surface_relation, cfg.tol("surface_relation"),
                            static_cast<long long>(samples.size()), "1 + b x2 x3 + c x1 x3 + d x1 x2 = 0"));
    } catch (const Error& e) {
      out.push_back(CheckResult{ctx.suite, "basis alignment", Status::fail, 0.0, 0, e.what(), ""});
    }
    return out;
  });
  return run_tasks(ctx, tasks);
}

// ---------------------------------------------------------------------------
// symbolic

std::vector<CheckResult> symbolic_suite(const Ctx& ctx, double& ledger_seconds) {
  const RunConfig& cfg = ctx.cfg;
  std::vector<CheckResult> out;
  const IdentityLedger ledger = verify_identity_ledger(cfg.seed, 5);
  ledger_seconds = ledger.seconds;
  bool substitution = true;
  for (const auto& r : ledger.records) {
    substitution = substitution && r.substitution_matches_expansion;
    CheckResult c{ctx.suite, "minor " + r.name, r.holds ? Status::pass : Status::fail,
                  static_cast<double>(r.residual.term_count()), 1, "", "claimed = " + r.claimed.to_string()};
    if (r.holds) {
      c.details = "holds exactly";
    } else {
      c.details = std::string(r.sign_flip ? "holds up to sign; " : "") + "computed = " + r.computed.to_string() +
                  "; residual = " + r.residual.to_string();
    }
    out.push_back(c);
  }
  out.push_back(exact(ctx, "expansion agrees with rational substitution", substitution,
                      static_cast<long long>(ledger.records.size()) * 5, "exact minors",
                      "Laplace expansion vs Gaussian elimination at random rational points"));
  out.push_back(exact(ctx, "ledger runtime", ledger.seconds < cfg.tol("ledger_seconds"), 1,
                      "the ledger is cheap to certify", "under " + fmt(cfg.tol("ledger_seconds")) + " s"));

  const PolyMatrix n = build_phi_matrix_N();
  const PolyMatrix j = phi_jacobian();
  const std::array<std::size_t, 9> perm{0, 1, 2, 5, 4, 3, 6, 7, 8};
  bool same = true;
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < 9; ++c) same = same && n[r][c] == j[r][perm[c]];
  }
  out.push_back(exact(ctx, "N equals the Jacobian of the affine map", same, 54, "matrix N",
                      "entrywise, columns 4..6 holding x2x3, x1x3, x1x2"));

  const auto chart = chart_change_check();
  const auto& g3 = chart.back();
  out.push_back(exact(ctx, "chart change maps g3 to h3", g3.cleared == g3.displayed, 1,
                      "(v, w) = (1/x3, y3/x3^2) carries the third curve to its chart at infinity",
                      "v^" + std::to_string(g3.v_power) + " g3 = " + g3.cleared.to_string()));
  std::ostringstream ratios;
  bool common = true;
  std::optional<mpq_class> first;
  for (std::size_t i = 0; i + 1 < chart.size(); ++i) {
    const auto& c = chart[i];
    ratios << (i ? ", " : "") << (c.ratio ? c.ratio->get_str() : "none");
    if (!c.ratio) {
      common = false;
    } else if (!first) {
      first = c.ratio;
    } else {
      common = common && *first == *c.ratio;
    }
  }
  out.push_back(CheckResult{ctx.suite, "chart change of the canonical components",
                            common ? Status::pass : Status::finding, 0.0,
                            static_cast<long long>(chart.size() - 1),
                            "displayed / cleared at a surface point: " + ratios.str(),
                            "the map at infinity is the affine map in the new chart"});
  return out;
}

// ---------------------------------------------------------------------------
// bidouble

std::vector<CheckResult> bidouble_suite(const Ctx& ctx) {
  using namespace thetalab::bidouble;
  const RunConfig& cfg = ctx.cfg;
  const QuarticModel model = QuarticModel::sample();
  std::vector<CheckResult> out;

  const CertificateReport rep = invariance_certificates(model);
  out.push_back(exact(ctx, "diagonal invariance of the six sections", rep.diagonal_identities == 24, 24,
                      "sections are invariant under the diagonal group action", "24 exact identities"));
  out.push_back(exact(ctx, "swap antisymmetry of the six sections", rep.swap_identities == 6, 6,
                      "sections change sign when the factors are swapped", "6 exact identities"));
  out.push_back(exact(ctx, "psi is group invariant", rep.psi_invariant, 4, "psi(g P) = psi(P)", "exact"));
  out.push_back(exact(ctx, "quartic image identity", rep.quartic_identity, 1,
                      "q(psi)^2 - xyzt vanishes on the curve", "q(x)^2 - xyzt = r2 (r2 + 2 XYZT)"));
  std::ostringstream audit;
  bool eta_all = true;
  for (const auto& a : rep.audits) {
    if (a.action.find("factor") == std::string::npos || a.action.rfind("id", 0) == 0) continue;
    if (a.section.rfind("eta", 0) == 0) {
      eta_all = eta_all && a.behaviour == Behaviour::invariant;
    } else {
      audit << a.section << " " << a.action << ": " << to_string(a.behaviour) << "; ";
    }
  }
  out.push_back(CheckResult{ctx.suite, "single-factor action audit", Status::finding, 0.0, 18,
                            std::string(eta_all ? "eta sections invariant under every single-factor action; " : "") +
                                audit.str(),
                            "which sections need the diagonal action"});

  double worst = 0.0, image = 0.0;
  int rank2 = 0;
  for (int k = 0; k < 50; ++k) {
    const Point p = sample_curve_point(model, task_seed(cfg, "curve " + std::to_string(k)));
    const Residuals r = curve_residuals(model, p);
    const double n2 = p.squaredNorm();
    worst = std::max({worst, std::abs(r.r1) / n2, std::abs(r.r2) / (n2 * n2)});
    rank2 += residual_jacobian_rank(model, p) == 2 ? 1 : 0;
    const Point x = psi_cover(p);
    const double xn = x.norm();
    image = std::max({image, std::abs(x.sum()) / xn,
                      std::abs(model.q(x) * model.q(x) - x(0) * x(1) * x(2) * x(3)) / std::pow(xn, 4)});
  }
  out.push_back(bounded(ctx, "sampled curve points", worst, 1e-12, 50, "complete intersection equations"));
  out.push_back(exact(ctx, "curve smooth at samples", rank2 == 50, 50, "Jacobian of the two equations has rank 2",
                      std::to_string(rank2) + " of 50 points with rank 2"));
  out.push_back(bounded(ctx, "psi image on the quartic", image, 1e-10, 50, "x+y+z+t = 0 and q^2 = xyzt"));

  double pairing = 0.0;
  bool all = true;
  for (const auto& line : bitangency_probe(model, cfg.tol("bitangent"))) {
    pairing = std::max(pairing, line.pairing_error);
    all = all && line.passed;
  }
  auto bit = bounded(ctx, "coordinate lines are bitangent", pairing, cfg.tol("bitangent"), 4,
                     "the four coordinate lines are bitangent to the quartic");
  if (!all) bit.status = Status::fail;
  out.push_back(bit);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Report run(const RunConfig& config) {
  config.validate();
  Report report;
  report.config = config;
  for (const auto& suite : config.expanded_suites()) {
    const auto t0 = std::chrono::steady_clock::now();
    const Ctx ctx{config, suite};
    std::vector<CheckResult> res;
    try {
      if (suite == "theta") res = theta_suite(ctx);
      if (suite == "models") res = models_suite(ctx);
      if (suite == "canonical") res = canonical_suite(ctx, report.samples);
      if (suite == "legendre") res = legendre_suite(ctx);
      if (suite == "symbolic") {
        double secs = 0.0;
        res = symbolic_suite(ctx, secs);
        report.seconds["symbolic ledger"] = secs;
      }
      if (suite == "bidouble") res = bidouble_suite(ctx);
    } catch (const std::exception& e) {
      res.push_back(CheckResult{suite, "suite", Status::fail, 0.0, 0, std::string("error: ") + e.what(), ""});
    }
    report.checks.insert(report.checks.end(), res.begin(), res.end());
    report.seconds[suite] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return report;
}

void write_samples_csv(const Report& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << "kind,z1re,z1im,z2re,z2im,z3re,z3im,residual";
  for (int i = 1; i <= 6; ++i) out << ",c" << i << "re,c" << i << "im";
  out << ",sigma1,sigma2,sigma3,sigma4\n";
  char buf[40];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  };
  for (const auto& row : report.samples) {
    out << row.kind;
    for (int i = 0; i < 3; ++i) {
      num(row.point.z(i).real());
      num(row.point.z(i).imag());
    }
    num(row.point.residual);
    for (int i = 0; i < 6; ++i) {
      num(row.coords(i).real());
      num(row.coords(i).imag());
    }
    for (double s : row.sigma) num(s);
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

void write_report_json(const Report& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << report.to_json().dump(2) << '\n';
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace thetalab::verifier
