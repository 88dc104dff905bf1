#include "thetalab/abelian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace thetalab {

namespace {

ThetaCharacteristic label_characteristic(const Label& label) {
  return ThetaCharacteristic::even(std::span<const int>(label.data(), label.size()));
}

// Coordinates (m, q) of d = tau m + 2 q with real m, q.
void lattice_coordinates(const CVector& d, const PeriodMatrix& tau, RVector& m, RVector& q) {
  m = tau.imag_inverse() * RVector(d.imag());
  const CVector rest = d - tau.entries() * m.cast<cplx>();
  q = rest.real() / 2.0;
}

CVector centred_representative(const CVector& d, const PeriodMatrix& tau) {
  RVector m, q;
  lattice_coordinates(d, tau, m, q);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m(i) -= std::round(m(i));
    q(i) -= std::round(q(i));
  }
  return tau.entries() * m.cast<cplx>() + 2.0 * q.cast<cplx>();
}

double centred_norm(const CVector& d, const PeriodMatrix& tau) {
  // The centred parallelepiped representative is not always the shortest one
  // for skewed lattices; also try the neighbouring cells.
  const CVector base = centred_representative(d, tau);
  double best = base.norm();
  const int g = tau.genus();
  const int cells = static_cast<int>(std::pow(3, 2 * g));
  for (int code = 0; code < cells; ++code) {
    int c = code;
    CVector shift = CVector::Zero(g);
    for (int i = 0; i < g; ++i) {
      const int mi = c % 3 - 1;
      c /= 3;
      const int qi = c % 3 - 1;
      c /= 3;
      shift += static_cast<double>(mi) * tau.entries().col(i);
      shift(i) += 2.0 * qi;
    }
    best = std::min(best, (base + shift).norm());
  }
  return best;
}

}  // namespace

std::string label_name(const Label& label) {
  return "theta" + std::to_string(label[0]) + std::to_string(label[1]) + std::to_string(label[2]);
}

SurfaceSpec::SurfaceSpec(PeriodMatrix tau_in, std::array<cplx, 3> coeffs_in,
                         TruncationPolicy policy_in)
    : tau(std::move(tau_in)), coeffs(coeffs_in), policy(policy_in) {
  if (tau.genus() != 3) throw Error(ErrorKind::InvalidArgument, "surface needs a genus-3 tau");
  policy.validate();
}

cplx SurfaceSpec::coefficient(const Label& label) const {
  for (size_t i = 0; i < kBasisLabels.size(); ++i) {
    if (kBasisLabels[i] == label) return i == 0 ? cplx{1.0, 0.0} : coeffs[i - 1];
  }
  throw Error(ErrorKind::InvalidArgument, "label is not one of the four basis labels");
}

bool SurfaceSpec::all_coefficients_nonzero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](cplx c) { return c != cplx{}; });
}

CVector LatticePoint::vector(const PeriodMatrix& tau) const {
  CVector v = tau.entries() * m.cast<cplx>() + 2.0 * q.cast<cplx>();
  v.array() += static_cast<double>(diag_flag);
  return v;
}

ThetaJet section_jet(const SurfaceSpec& spec, const Label& label, const CVector& z) {
  return theta_jet(z, spec.tau, label_characteristic(label), spec.policy);
}

std::array<ThetaJet, 4> basis_jets(const SurfaceSpec& spec, const CVector& z) {
  std::array<ThetaJet, 4> out;
  for (size_t i = 0; i < 4; ++i) out[i] = section_jet(spec, kBasisLabels[i], z);
  return out;
}

std::array<SectionEvaluator, 4> basis_sections(const SurfaceSpec& spec) {
  std::array<SectionEvaluator, 4> out;
  for (size_t i = 0; i < 4; ++i) {
    const Label label = kBasisLabels[i];
    out[i] = SectionEvaluator{label, label_name(label),
                              [spec, label](const CVector& z) { return section_jet(spec, label, z); }};
  }
  return out;
}

ThetaJet surface_f(const SurfaceSpec& spec, const CVector& z) {
  const auto jets = basis_jets(spec, z);
  ThetaJet f{cplx{}, CVector::Zero(3), CMatrix::Zero(3, 3)};
  for (size_t i = 0; i < 4; ++i) {
    const cplx coeff = i == 0 ? cplx{1.0, 0.0} : spec.coeffs[i - 1];
    f.value += coeff * jets[i].value;
    f.gradient += coeff * jets[i].gradient;
    f.hessian += coeff * jets[i].hessian;
  }
  return f;
}

double membership_scale(const SurfaceSpec& spec, const CVector& z) {
  return gaussian_scale(z, spec.tau);
}

// ---------------------------------------------------------------------------
// Base points

std::array<CVector, 4> base_point_representatives(const PeriodMatrix& tau) {
  const cplx h{0.5, 0.0};
  const cplx t1 = (1.0 + tau(0, 0)) / 2.0;
  const cplx t2 = (1.0 + tau(1, 1)) / 2.0;
  const cplx t3 = (1.0 + tau(2, 2)) / 2.0;
  std::array<CVector, 4> reps;
  reps[0] = CVector{{t1, t2, t3}};
  reps[1] = CVector{{t1, h, h}};
  reps[2] = CVector{{h, t2, h}};
  reps[3] = CVector{{h, h, t3}};
  return reps;
}

std::vector<TorusPoint> base_points(const SurfaceSpec& spec) {
  if (!spec.tau.is_diagonal()) {
    throw Error(ErrorKind::NotDiagonal, "closed-form base points need diagonal tau");
  }
  std::vector<TorusPoint> out;
  out.reserve(16);
  for (const CVector& rep : base_point_representatives(spec.tau)) {
    for (int e1 = 0; e1 < 2; ++e1) {
      for (int e2 = 0; e2 < 2; ++e2) {
        CVector z = rep;
        z(0) += static_cast<double>(e1);
        z(1) += static_cast<double>(e2);
        out.push_back(TorusPoint{z, std::abs(surface_f(spec, z).value)});
      }
    }
  }
  return out;
}

std::vector<TorusPoint> base_points_continued(const SurfaceSpec& spec, int steps) {
  CMatrix diag = CMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) diag(i, i) = spec.tau(i, i);
  const SurfaceSpec start(PeriodMatrix(diag), spec.coeffs, spec.policy);
  std::vector<TorusPoint> points = base_points(start);
  if (spec.tau.is_diagonal()) return points;

  for (int s = 1; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    const SurfaceSpec stage(PeriodMatrix(diag + t * (spec.tau.entries() - diag)), spec.coeffs,
                            spec.policy);
    for (TorusPoint& p : points) {
      CVector z = p.z;
      for (int it = 0; it < 40; ++it) {
        const auto jets = basis_jets(stage, z);
        Eigen::Vector4cd r;
        Eigen::Matrix<cplx, 4, 3> jac;
        for (int i = 0; i < 4; ++i) {
          r(i) = jets[static_cast<size_t>(i)].value;
          jac.row(i) = jets[static_cast<size_t>(i)].gradient.transpose();
        }
        const CVector step = jac.colPivHouseholderQr().solve(-r);
        z += step;
        if (step.norm() < 1e-14) break;
      }
      double worst = 0.0;
      for (const auto& jet : basis_jets(stage, z)) worst = std::max(worst, std::abs(jet.value));
      p = TorusPoint{z, worst};
    }
  }
  for (TorusPoint& p : points) p.residual = std::abs(surface_f(spec, p.z).value);
  return points;
}

// ---------------------------------------------------------------------------
// Lattice reduction

CVector reduce_to_cell(const CVector& z, const PeriodMatrix& tau) {
  RVector m, q;
  lattice_coordinates(z, tau, m, q);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m(i) -= std::floor(m(i));
    q(i) -= std::floor(q(i));
  }
  return tau.entries() * m.cast<cplx>() + 2.0 * q.cast<cplx>();
}

double torus_distance(const CVector& z, const CVector& w, const PeriodMatrix& tau) {
  return centred_norm(z - w, tau);
}

double abelian_distance(const CVector& z, const CVector& w, const PeriodMatrix& tau) {
  CVector d = z - w;
  const double plain = centred_norm(d, tau);
  d.array() -= 1.0;
  return std::min(plain, centred_norm(d, tau));
}

// ---------------------------------------------------------------------------
// Pencil

namespace {

std::array<int, 2> complement(int axis) {
  switch (axis) {
    case 1: return {2, 3};
    case 2: return {1, 3};
    case 3: return {1, 2};
    default: throw Error(ErrorKind::InvalidArgument, "axis must be 1, 2 or 3");
  }
}

PeriodMatrix block_of(const PeriodMatrix& tau, std::array<int, 2> block) {
  CMatrix m(2, 2);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) m(r, c) = tau(block[r] - 1, block[c] - 1);
  }
  return PeriodMatrix(std::move(m));
}

Label make_label(int axis_i, int vi, int axis_j, int vj, int axis_k, int vk) {
  Label l{};
  l[static_cast<size_t>(axis_i - 1)] = vi;
  l[static_cast<size_t>(axis_j - 1)] = vj;
  l[static_cast<size_t>(axis_k - 1)] = vk;
  return l;
}

}  // namespace

PencilSections::PencilSections(const SurfaceSpec& spec, int axis)
    : axis_(axis),
      block_(complement(axis)),
      block_tau_(block_of(spec.tau, complement(axis))),
      fibre_tau_(PeriodMatrix::scalar(spec.tau(axis - 1, axis - 1))),
      policy_(spec.policy) {
  if (!spec.tau.splits_off(axis - 1)) {
    throw Error(ErrorKind::BlockNotSplit, "tau couples the fibre axis to the block");
  }
  const int i = block_[0];
  const int j = block_[1];
  f_coeff_ = spec.coefficient(make_label(i, 1, j, 1, axis, 0));
  g_coeffs_ = {spec.coefficient(make_label(i, 0, j, 1, axis, 1)),
               spec.coefficient(make_label(i, 1, j, 0, axis, 1))};
}

ThetaJet PencilSections::block_theta(int hi, int hj, const CVector& zij) const {
  const std::array<int, 2> a2{hi, hj};
  return theta_jet(zij, block_tau_, ThetaCharacteristic::even(a2), policy_);
}

namespace {

ThetaJet combine(cplx ca, const ThetaJet& a, cplx cb, const ThetaJet& b) {
  return ThetaJet{ca * a.value + cb * b.value, ca * a.gradient + cb * b.gradient,
                  ca * a.hessian + cb * b.hessian};
}

}  // namespace

ThetaJet PencilSections::f(const CVector& zij) const {
  return combine(1.0, block_theta(0, 0, zij), f_coeff_, block_theta(1, 1, zij));
}

ThetaJet PencilSections::g(const CVector& zij) const {
  return combine(g_coeffs_[0], block_theta(0, 1, zij), g_coeffs_[1], block_theta(1, 0, zij));
}

ThetaJet PencilSections::fibre_theta(int h, cplx zk) const {
  const std::array<int, 1> a2{h};
  return theta_jet(CVector::Constant(1, zk), fibre_tau_, ThetaCharacteristic::even(a2), policy_);
}

CVector PencilSections::assemble(const CVector& zij, cplx zk) const {
  CVector z(3);
  z(block_[0] - 1) = zij(0);
  z(block_[1] - 1) = zij(1);
  z(axis_ - 1) = zk;
  return z;
}

PencilSections pencil_sections(const SurfaceSpec& spec, int axis) {
  return PencilSections(spec, axis);
}

// ---------------------------------------------------------------------------
// One-variable sections

ScalarJet elliptic_theta(int h, cplx z, cplx tau, const TruncationPolicy& policy) {
  if (!(tau.imag() > 0.0)) throw Error(ErrorKind::NonPositiveDefinite, "Im(tau) must be positive");
  const std::array<int, 1> a2{h};
  const ThetaJet jet = theta_jet(CVector::Constant(1, z), PeriodMatrix::scalar(tau),
                                 ThetaCharacteristic::even(a2), policy);
  return ScalarJet{jet.value, jet.gradient(0), jet.hessian(0, 0)};
}

cplx eta_section(cplx z, cplx tau, const TruncationPolicy& policy) {
  const ScalarJet t0 = elliptic_theta(0, z, tau, policy);
  const ScalarJet t1 = elliptic_theta(1, z, tau, policy);
  return t0.value * t1.d1 - t1.value * t0.d1;
}

RhoV3 rho_v3(cplx z, cplx w, cplx tau, const TruncationPolicy& policy) {
  const ScalarJet z0 = elliptic_theta(0, z, tau, policy);
  const ScalarJet z1 = elliptic_theta(1, z, tau, policy);
  const ScalarJet w0 = elliptic_theta(0, w, tau, policy);
  const ScalarJet w1 = elliptic_theta(1, w, tau, policy);
  const cplx rho0 = z0.value * w0.d1 - w0.value * z0.d1;
  const cplx rho1 = z1.value * w1.d1 - w1.value * z1.d1;
  const cplx v3 = z0.value * w0.value * rho1 - z1.value * w1.value * rho0;
  return RhoV3{rho0, rho1, v3};
}

NumericalInvariants numerical_invariants(std::span<const int> polarization_type) {
  if (polarization_type.empty()) {
    throw Error(ErrorKind::NotDivisorChain, "polarisation type is empty");
  }
  long long product = 1;
  for (size_t i = 0; i < polarization_type.size(); ++i) {
    const int d = polarization_type[i];
    if (d <= 0) throw Error(ErrorKind::NotDivisorChain, "entries must be positive");
    if (i > 0 && d % polarization_type[i - 1] != 0) {
      throw Error(ErrorKind::NotDivisorChain, "entries must form a divisor chain d1 | d2 | ...");
    }
    product *= d;
  }
  const auto g = static_cast<long long>(polarization_type.size());
  long long factorial = 1;
  for (long long k = 2; k <= g; ++k) factorial *= k;
  return NumericalInvariants{product + g - 1, g, factorial * product};
}

}  // namespace thetalab
