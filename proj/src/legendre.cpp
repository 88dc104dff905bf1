#include "thetalab/legendre.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace thetalab {

namespace {

cplx theta_h(int h, cplx z, cplx tau, const TruncationPolicy& policy) {
  return elliptic_theta(h, z, tau, policy).value;
}

}  // namespace

LegendreModel::LegendreModel(cplx tau_in, TruncationPolicy policy_in)
    : tau(tau_in), policy(policy_in) {
  if (!(tau.imag() > 0.0)) throw Error(ErrorKind::NonPositiveDefinite, "Im(tau) must be positive");
  theta0_null = theta_h(0, 0.0, tau, policy);
  theta1_null = theta_h(1, 0.0, tau, policy);
  // theta_1(tau/2) and theta_0(tau/2) are theta_0(0) and theta_1(0) up to the
  // same exponential factor, so x(tau/2) = (theta_0(0) / theta_1(0))^2.
  const cplx r = theta0_null / theta1_null;
  a_param = r * r;
  for (cplx bad : {cplx{0.0, 0.0}, cplx{1.0, 0.0}, cplx{-1.0, 0.0}}) {
    if (std::abs(a_param - bad) < 1e-12) {
      throw Error(ErrorKind::InvalidArgument, "branch values of x are not distinct");
    }
  }
}

cplx legendre_x(const LegendreModel& model, cplx z) {
  const ScalarJet t0 = elliptic_theta(0, z, model.tau, model.policy);
  const double scale = gaussian_scale(CVector::Constant(1, z), PeriodMatrix::scalar(model.tau));
  if (std::abs(t0.value) < 1e-12 * scale) throw Error(ErrorKind::PoleAtZ, "theta_0 vanishes at z");
  const ScalarJet t1 = elliptic_theta(1, z, model.tau, model.policy);
  return model.theta0_null * t1.value / (model.theta1_null * t0.value);
}

cplx legendre_dx(const LegendreModel& model, cplx z) {
  const ScalarJet t0 = elliptic_theta(0, z, model.tau, model.policy);
  const double scale = gaussian_scale(CVector::Constant(1, z), PeriodMatrix::scalar(model.tau));
  if (std::abs(t0.value) < 1e-12 * scale) throw Error(ErrorKind::PoleAtZ, "theta_0 vanishes at z");
  const ScalarJet t1 = elliptic_theta(1, z, model.tau, model.policy);
  const cplx eta = t0.value * t1.d1 - t1.value * t0.d1;
  return model.theta0_null / model.theta1_null * eta / (t0.value * t0.value);
}

// ---------------------------------------------------------------------------
// Affine chart

AffineChart::AffineChart(LegendreModel model, cplx z_ref) : model_(std::move(model)) {
  const cplx x = legendre_x(model_, z_ref);
  const cplx dx = legendre_dx(model_, z_ref);
  const cplx a2 = model_.a_param * model_.a_param;
  const cplx p = (x * x - 1.0) * (x * x - a2);
  if (std::abs(dx) < 1e-12) throw Error(ErrorKind::CalibrationFailed, "x' vanishes at the reference point");
  kappa_ = std::sqrt(p) / dx;
}

double AffineChart::curve_residual(const AffinePoint& p) const {
  const cplx a2 = model_.a_param * model_.a_param;
  const cplx x2 = p.x * p.x;
  const cplx r = p.y * p.y - (x2 - 1.0) * (x2 - a2);
  return std::abs(r) / std::max(1.0, std::norm(x2));
}

AffinePoint AffineChart::operator()(cplx z) const {
  const AffinePoint p{legendre_x(model_, z), kappa_ * legendre_dx(model_, z)};
  if (curve_residual(p) > 1e-8) {
    throw Error(ErrorKind::CalibrationFailed, "affine point is off the Legendre curve");
  }
  return p;
}

AffinePoint analytic_to_affine(const AffineChart& chart, cplx z) { return chart(z); }

// ---------------------------------------------------------------------------
// Relations

namespace {

struct Normalisation {
  double scale;   // L(z) = x(scale z)
  cplx period1;
  cplx half1;
  cplx period2;
  cplx half2;
};

Normalisation normalisation(LegendreNormalization norm, cplx tau) {
  if (norm == LegendreNormalization::TwoTau) return {1.0, 2.0, 1.0, tau, tau / 2.0};
  return {2.0, 1.0, 0.5, tau, tau / 2.0};
}

double rel(cplx got, cplx want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace

std::vector<RelationCheck> legendre_relations(const LegendreModel& model,
                                              LegendreNormalization norm, int samples,
                                              std::uint64_t seed, double tol) {
  const Normalisation n = normalisation(norm, model.tau);
  const auto L = [&](cplx z) { return legendre_x(model, n.scale * z); };
  const auto dL = [&](cplx z) { return n.scale * legendre_dx(model, n.scale * z); };
  const cplx a = model.a_param;

  std::vector<RelationCheck> out;
  const auto record = [&](const std::string& name, double err) {
    for (auto& r : out) {
      if (r.name == name) {
        r.max_error = std::max(r.max_error, err);
        r.passed = r.max_error < tol;
        return;
      }
    }
    out.push_back(RelationCheck{name, err, err < tol});
  };

  const std::array<cplx, 4> torsion{0.0, n.half1, n.half2, n.half1 + n.half2};
  record("L(0) = 1", rel(L(torsion[0]), 1.0));
  record("L(half1) = -1", rel(L(torsion[1]), -1.0));
  record("L(half2) = a", rel(L(torsion[2]), a));
  record("L(half1 + half2) = -a", rel(L(torsion[3]), -a));
  for (cplx t : torsion) record("L' = 0 on 2-torsion", std::abs(dL(t)));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int done = 0;
  int attempts = 0;
  double floor = 1e300;
  while (done < samples && attempts < 100 * samples) {
    ++attempts;
    const cplx z = n.period1 * u(rng) + n.period2 * u(rng);
    try {
      const cplx lz = L(z);
      if (std::abs(lz) > 1e6 || std::abs(lz) < 1e-6) continue;
      const std::array<std::pair<const char*, cplx>, 5> shifted{{
          {"L(z + period1) = L(z)", L(z + n.period1)},
          {"L(z + period2) = L(z)", L(z + n.period2)},
          {"L(z + half1) = -L(z)", L(z + n.half1)},
          {"L(-z) = L(z)", L(-z)},
          {"L(z + half2) = a / L(z)", L(z + n.half2)},
      }};
      const std::array<cplx, 5> expected{lz, lz, -lz, lz, a / lz};
      for (std::size_t i = 0; i < shifted.size(); ++i) {
        record(shifted[i].first, rel(shifted[i].second, expected[i]));
      }
      double dist = 1e300;
      for (int k1 = -1; k1 <= 2; ++k1) {
        for (int k2 = -1; k2 <= 2; ++k2) {
          for (cplx t : torsion) {
            dist = std::min(dist, std::abs(z - t - double(k1) * n.period1 - double(k2) * n.period2));
          }
        }
      }
      if (dist > 0.1) floor = std::min(floor, std::abs(dL(z)));
      ++done;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PoleAtZ) throw;
    }
  }
  out.push_back(RelationCheck{"|L'| floor away from 2-torsion", floor, floor > 1e-3});
  return out;
}

// ---------------------------------------------------------------------------
// Symbolic matrices

namespace {

MultiPoly V(Var v, unsigned p = 1) { return MultiPoly::var(v, p); }

const std::array<Var, 3> kX{Var::x1, Var::x2, Var::x3};
const std::array<Var, 3> kY{Var::y1, Var::y2, Var::y3};
const std::array<Var, 3> kE{Var::e1, Var::e2, Var::e3};

// 2 x (e^2 - 2 x^2 + 1), the x-derivative of g as printed.
MultiPoly dg(Var x, Var e) { return 2 * V(x) * (V(e, 2) - 2 * V(x, 2) + 1); }

}  // namespace

MultiPoly legendre_curve(int i) {
  const auto k = static_cast<std::size_t>(i - 1);
  return V(kY[k], 2) - (V(kX[k], 2) - 1) * (V(kX[k], 2) - V(kE[k], 2));
}

std::vector<MultiPoly> phi_components() {
  const MultiPoly b = V(Var::b), c = V(Var::c), d = V(Var::d);
  const MultiPoly x1 = V(Var::x1), x2 = V(Var::x2), x3 = V(Var::x3);
  const MultiPoly y1 = V(Var::y1), y2 = V(Var::y2), y3 = V(Var::y3);
  return {(b * x2 + c * x1) * y3, (b * x3 + d * x1) * y2, (d * x2 + c * x3) * y1,
          x1 * x2,                x1 * x3,                x2 * x3,
          legendre_curve(1),      legendre_curve(2),      legendre_curve(3)};
}

PolyMatrix build_phi_matrix_N() {
  const MultiPoly b = V(Var::b), c = V(Var::c), d = V(Var::d);
  const MultiPoly x1 = V(Var::x1), x2 = V(Var::x2), x3 = V(Var::x3);
  const MultiPoly y1 = V(Var::y1), y2 = V(Var::y2), y3 = V(Var::y3);
  const MultiPoly O;
  return {
      {c * y3, d * y2, O, O, x3, x2, dg(Var::x1, Var::e1), O, O},
      {b * y3, O, d * y1, x3, O, x1, O, dg(Var::x2, Var::e2), O},
      {O, b * y2, c * y1, x2, x1, O, O, O, dg(Var::x3, Var::e3)},
      {O, O, d * x2 + c * x3, O, O, O, 2 * y1, O, O},
      {O, d * x1 + b * x3, O, O, O, O, O, 2 * y2, O},
      {c * x1 + b * x2, O, O, O, O, O, O, O, 2 * y3},
  };
}

PolyMatrix phi_jacobian() {
  const auto comps = phi_components();
  const std::array<Var, 6> vars{Var::x1, Var::x2, Var::x3, Var::y1, Var::y2, Var::y3};
  PolyMatrix out(6);
  for (std::size_t r = 0; r < 6; ++r) {
    for (const auto& comp : comps) out[r].push_back(comp.derivative(vars[r]));
  }
  return out;
}

PolyMatrix build_phi_inf_matrix_M() {
  const MultiPoly b = V(Var::b), c = V(Var::c), d = V(Var::d);
  const MultiPoly x1 = V(Var::x1), x2 = V(Var::x2);
  const MultiPoly y1 = V(Var::y1), y2 = V(Var::y2);
  const MultiPoly O;
  const MultiPoly one(1);
  return {
      {d * x2 * (x1 * x2 + 1), b * x2 * y2, c * y1 * x2, O, x2, x1, O, O, O, O},
      {d * x2.pow(2), O, O, O, O, one, O, dg(Var::x1, Var::e1), O, O},
      {2 * d * x1 * x2 + 1, b * y2, c * y1, O, one, O, O, O, dg(Var::x2, Var::e2), O},
      {O, d * x1 * x2 * y2, d * y1 * x2.pow(2), one, O, O, x1 * x2, O, O, O},
      {O, O, c * x2, O, O, O, O, 2 * y1, O, O},
      {O, b * x2, O, O, O, O, O, O, 2 * y2, O},
      {d * x1 * x2 * (x2 + 1), O, O, O, O, O, O, O, O, MultiPoly(2)},
  };
}

PolyMatrix substitute_boundary(const PolyMatrix& n) {
  PolyMatrix out = n;
  for (auto& row : out) {
    for (auto& e : row) e = e.substitute(Var::x3, MultiPoly()).substitute(Var::y3, V(Var::delta3));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ledger

int IdentityLedger::certified() const {
  int n = 0;
  for (const auto& r : records) n += r.holds ? 1 : 0;
  return n;
}

namespace {

struct Claim {
  std::string name;
  int matrix;  // 0 = N, 1 = boundary N, 2 = M
  std::vector<int> columns;
  MultiPoly rhs;
};

std::vector<Claim> claims() {
  const MultiPoly b = V(Var::b), c = V(Var::c), d = V(Var::d);
  const MultiPoly x1 = V(Var::x1), x2 = V(Var::x2), x3 = V(Var::x3);
  const MultiPoly y1 = V(Var::y1), y2 = V(Var::y2), y3 = V(Var::y3);
  const MultiPoly e1 = V(Var::e1), e2 = V(Var::e2);
  const MultiPoly xxx = x1 * x2 * x3;
  return {
      {"N[1,2,4,5,6,7]", 0, {1, 2, 4, 5, 6, 7}, 4 * xxx * y1 * (c * x1 + b * x2) * (d * x1 + b * x3)},
      {"N[1,3,4,5,6,8]", 0, {1, 3, 4, 5, 6, 8}, 4 * xxx * y2 * (c * x1 + b * x2) * (d * x2 + c * x3)},
      {"N[2,3,4,5,6,9]", 0, {2, 3, 4, 5, 6, 9}, 4 * xxx * y3 * (d * x1 + b * x3) * (d * x2 + c * x3)},
      {"N[1,4,5,6,7,8]", 0, {1, 4, 5, 6, 7, 8}, -8 * xxx * y1 * y3 * (c * x1 + b * x2)},
      {"N[2,4,5,6,7,9]", 0, {2, 4, 5, 6, 7, 9}, 8 * xxx * y1 * y3 * (d * x1 + b * x3)},
      {"N[3,4,5,6,8,9]", 0, {3, 4, 5, 6, 8, 9}, -8 * xxx * y2 * y3 * (d * x2 + c * x3)},
      {"N0[1,4,6,7,8,9]", 1, {1, 4, 6, 7, 8, 9}, -8 * c * y1.pow(2) * y2 * (c * x1 - b * x2)},
      {"N0[2,4,6,7,8,9]", 1, {2, 4, 6, 7, 8, 9}, 8 * d * x1 * y1 * x2 * (x2.pow(2) - e2.pow(4))},
      {"N0[3,4,6,7,8,9]", 1, {3, 4, 6, 7, 8, 9}, -8 * d * y2 * x2.pow(2) * (x1.pow(2) - e1.pow(4))},
      {"M[1,2,3,5,6,7,10]", 2, {1, 2, 3, 5, 6, 7, 10}, -4 * b * c * d * x1.pow(2) * x2.pow(5)},
  };
}

MultiPoly::Assignment random_assignment(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-40, 40), den(1, 17);
  MultiPoly::Assignment a;
  for (auto& v : a) {
    int n = 0;
    while (n == 0) n = num(rng);
    v = mpq_class(n, den(rng));
    v.canonicalize();
  }
  return a;
}

}  // namespace

IdentityLedger verify_identity_ledger(std::uint64_t seed, int trials) {
  const auto t0 = std::chrono::steady_clock::now();
  const PolyMatrix n = build_phi_matrix_N();
  const PolyMatrix n0 = substitute_boundary(n);
  const PolyMatrix m = build_phi_inf_matrix_M();
  const std::array<const PolyMatrix*, 3> mats{&n, &n0, &m};
  const std::array<Var, 9> xy{Var::x1, Var::x2, Var::x3, Var::y1, Var::y2, Var::y3,
                              Var::v3, Var::w3, Var::delta3};
  std::mt19937_64 rng(seed);

  IdentityLedger ledger;
  for (const Claim& claim : claims()) {
    const PolyMatrix& mat = *mats[static_cast<std::size_t>(claim.matrix)];
    IdentityRecord r;
    r.name = claim.name;
    r.columns = claim.columns;
    r.computed = minor(mat, claim.columns);
    r.claimed = claim.rhs;
    r.residual = r.computed - r.claimed;
    r.holds = r.residual.is_zero();
    r.sign_flip = !r.holds && (r.computed + r.claimed).is_zero();
    r.degree_xy = r.computed.degree_in(xy);
    r.homogeneous_xy = r.computed.homogeneous_in(xy);

    // Independent check: eliminate the numeric submatrix at rational points.
    bool expansion_ok = true;
    bool claim_ok = true;
    for (int t = 0; t < trials; ++t) {
      const auto point = random_assignment(rng);
      auto full = evaluate_matrix(mat, point);
      std::vector<std::vector<mpq_class>> sub(full.size());
      for (std::size_t row = 0; row < full.size(); ++row) {
        for (int col : claim.columns) sub[row].push_back(full[row][static_cast<std::size_t>(col - 1)]);
      }
      const mpq_class det = rational_determinant(std::move(sub));
      expansion_ok = expansion_ok && det == r.computed.evaluate(point);
      claim_ok = claim_ok && det == r.claimed.evaluate(point);
    }
    r.substitution_trials = trials;
    r.substitution_matches_expansion = expansion_ok;
    r.substitution_matches_claim = claim_ok;
    ledger.records.push_back(std::move(r));
  }
  ledger.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return ledger;
}

// ---------------------------------------------------------------------------
// Chart change

namespace {

// v^k * p(x3 = 1/v, y3 = w/v^2) with the smallest k clearing denominators.
MultiPoly to_infinity_chart(const MultiPoly& p, int& k) {
  k = 0;
  for (const auto& [e, c] : p.terms()) {
    k = std::max(k, e[static_cast<std::size_t>(Var::x3)] + 2 * e[static_cast<std::size_t>(Var::y3)]);
  }
  MultiPoly out;
  for (const auto& [e, c] : p.terms()) {
    MultiPoly::Exponents f = e;
    const int a = e[static_cast<std::size_t>(Var::x3)];
    const int b = e[static_cast<std::size_t>(Var::y3)];
    f[static_cast<std::size_t>(Var::x3)] = 0;
    f[static_cast<std::size_t>(Var::y3)] = 0;
    f[static_cast<std::size_t>(Var::w3)] = static_cast<std::uint8_t>(f[static_cast<std::size_t>(Var::w3)] + b);
    f[static_cast<std::size_t>(Var::v3)] =
        static_cast<std::uint8_t>(f[static_cast<std::size_t>(Var::v3)] + k - a - 2 * b);
    out += MultiPoly::monomial(c, f);
  }
  return out;
}

}  // namespace

std::vector<ChartComponent> chart_change_check() {
  const MultiPoly b = V(Var::b), c = V(Var::c), d = V(Var::d);
  const MultiPoly x1 = V(Var::x1), x2 = V(Var::x2), x3 = V(Var::x3);
  const MultiPoly y1 = V(Var::y1), y2 = V(Var::y2), y3 = V(Var::y3);
  const MultiPoly v = V(Var::v3), w = V(Var::w3);
  const MultiPoly e3 = V(Var::e3);
  const std::vector<std::pair<std::string, MultiPoly>> affine{
      {"(b x2 + c x1) y3", (b * x2 + c * x1) * y3},
      {"(b x3 + d x1) y2", (b * x3 + d * x1) * y2},
      {"(d x2 + c x3) y1", (d * x2 + c * x3) * y1},
      {"1", MultiPoly(1)},
      {"x1 x2", x1 * x2},
      {"x1 x3", x1 * x3},
      {"x2 x3", x2 * x3},
      {"g3", legendre_curve(3)},
  };
  const std::vector<MultiPoly> displayed{
      w * (1 + d * x1 * x2) * x2,
      (d * x1 * v + b) * y2 * x2,
      (d * x2 * v + c) * y1 * x2,
      v,
      x2,
      x2,
      x1 * x2 * v,
      w.pow(2) - (1 - v.pow(2)) * (1 - e3.pow(2) * v.pow(2)),
  };
  // Test point on 1 + b x2 x3 + c x1 x3 + d x1 x2 = 0, solved for b.
  MultiPoly::Assignment pt;
  for (std::size_t i = 0; i < kNumVars; ++i) pt[i] = mpq_class(static_cast<long>(i % 7) + 2, 3);
  pt[static_cast<std::size_t>(Var::v3)] = mpq_class(2, 5);
  const mpq_class x3v = 1 / pt[static_cast<std::size_t>(Var::v3)];
  pt[static_cast<std::size_t>(Var::b)] =
      -(1 + pt[static_cast<std::size_t>(Var::c)] * pt[static_cast<std::size_t>(Var::x1)] * x3v +
        pt[static_cast<std::size_t>(Var::d)] * pt[static_cast<std::size_t>(Var::x1)] *
            pt[static_cast<std::size_t>(Var::x2)]) /
      (pt[static_cast<std::size_t>(Var::x2)] * x3v);

  std::vector<ChartComponent> out;
  for (std::size_t i = 0; i < affine.size(); ++i) {
    ChartComponent comp;
    comp.affine = affine[i].first;
    comp.cleared = to_infinity_chart(affine[i].second, comp.v_power);
    comp.displayed = displayed[i];
    const mpq_class den = comp.cleared.evaluate(pt);
    if (den != 0) comp.ratio = comp.displayed.evaluate(pt) / den;
    out.push_back(std::move(comp));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Alignment

std::array<cplx, 3> renamed_coefficients(const SurfaceSpec& spec) {
  std::array<cplx, 3> r{};
  for (int i = 0; i < 3; ++i) {
    const cplx t = spec.tau(i, i);
    r[static_cast<std::size_t>(i)] = theta_h(1, 0.0, t, spec.policy) / theta_h(0, 0.0, t, spec.policy);
  }
  return {spec.coeffs[0] * r[1] * r[2], spec.coeffs[1] * r[0] * r[2], spec.coeffs[2] * r[0] * r[1]};
}

std::vector<AffineSample> affine_samples(const SurfaceSpec& spec, int count, std::uint64_t seed) {
  if (!spec.tau.is_diagonal()) throw Error(ErrorKind::NotDiagonal, "affine model needs diagonal tau");
  std::vector<AffineChart> charts;
  for (int i = 0; i < 3; ++i) charts.emplace_back(LegendreModel(spec.tau(i, i), spec.policy));
  const auto [b, c, d] = renamed_coefficients(spec);
  std::vector<AffineSample> out;
  for (std::uint64_t k = 0; static_cast<int>(out.size()) < count && k < 50u * static_cast<std::uint64_t>(count); ++k) {
    TorusPoint p;
    try {
      p = sample_surface_point(spec, derive_seed(seed, k));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoRootFound) throw;
      continue;
    }
    AffineSample s;
    s.z = p.z;
    bool ok = true;
    for (std::size_t i = 0; i < 3 && ok; ++i) {
      try {
        s.xy[i] = charts[i](p.z(static_cast<Eigen::Index>(i)));
        ok = std::abs(s.xy[i].x) < 1e4;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PoleAtZ) throw;
        ok = false;
      }
    }
    if (!ok) continue;
    const cplx x1 = s.xy[0].x, x2 = s.xy[1].x, x3 = s.xy[2].x;
    const cplx y1 = s.xy[0].y, y2 = s.xy[1].y, y3 = s.xy[2].y;
    s.affine = CVector(6);
    s.affine << (b * x2 + c * x1) * y3, (b * x3 + d * x1) * y2, (d * x2 + c * x3) * y1, x1 * x2,
        x1 * x3, x2 * x3;
    s.analytic = canonical_image(spec, p).coords;
    s.surface_relation = std::abs(1.0 + b * x2 * x3 + c * x1 * x3 + d * x1 * x2);
    out.push_back(std::move(s));
  }
  return out;
}

AlignmentResult basis_alignment(const SurfaceSpec& spec, const std::vector<AffineSample>& samples,
                                int fit_count, double tol) {
  if (fit_count < 8) throw Error(ErrorKind::InvalidArgument, "alignment needs at least 8 fit samples");
  if (static_cast<int>(samples.size()) < fit_count + 1) {
    throw Error(ErrorKind::InvalidArgument, "no held-out samples for validation");
  }
  AlignmentResult res;
  res.renamed_coeffs = renamed_coefficients(spec);
  res.fit_count = fit_count;
  res.validation_count = static_cast<int>(samples.size()) - fit_count;

  // a x (A u) = 0 for every sample: 15 bilinear equations in the 36 entries of A.
  CMatrix sys(15 * fit_count, 36);
  sys.setZero();
  int row = 0;
  for (int s = 0; s < fit_count; ++s) {
    const CVector a = samples[static_cast<std::size_t>(s)].analytic.normalized();
    const CVector u = samples[static_cast<std::size_t>(s)].affine.normalized();
    for (int i = 0; i < 6; ++i) {
      for (int j = i + 1; j < 6; ++j) {
        for (int k = 0; k < 6; ++k) {
          sys(row, 6 * j + k) += a(i) * u(k);
          sys(row, 6 * i + k) -= a(j) * u(k);
        }
        ++row;
      }
    }
  }
  Eigen::JacobiSVD<CMatrix> svd(sys, Eigen::ComputeFullV);
  const CVector sol = svd.matrixV().col(35);
  res.matrix = CMatrix(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int k = 0; k < 6; ++k) res.matrix(i, k) = sol(6 * i + k);
  }
  Eigen::JacobiSVD<CMatrix> msvd(res.matrix);
  const auto& sv = msvd.singularValues();
  res.condition_number = sv(5) > 0 ? sv(0) / sv(5) : std::numeric_limits<double>::infinity();

  for (std::size_t s = 0; s < samples.size(); ++s) {
    const double err = chordal_distance(make_projective(samples[s].analytic),
                                        make_projective(res.matrix * samples[s].affine));
    if (static_cast<int>(s) < fit_count) {
      res.fit_error = std::max(res.fit_error, err);
    } else {
      res.validation_error = std::max(res.validation_error, err);
    }
    res.max_surface_relation = std::max(res.max_surface_relation, samples[s].surface_relation);
  }
  if (!(res.validation_error < tol)) {
    throw Error(ErrorKind::AlignmentFailed,
                "held-out chordal error " + std::to_string(res.validation_error) + " exceeds tolerance");
  }
  return res;
}

}  // namespace thetalab
