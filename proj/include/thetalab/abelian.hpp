#pragma once

// The (2,2,2)-polarised torus T = C^3 / (tau Z^3 + 2 Z^3), its (1,2,2) quotient
// A = T / <e1+e2+e3>, the four even sections theta_ijk spanning H^0(A, L),
// the surface S = {theta000 + b theta011 + c theta101 + d theta110 = 0} and the
// one-variable helper sections on the elliptic factors.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "thetalab/theta.hpp"

namespace thetalab {

using Label = std::array<int, 3>;

/// Basis labels (ijk) in the fixed order 000, 011, 101, 110.
inline constexpr std::array<Label, 4> kBasisLabels{{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}};

std::string label_name(const Label& label);

struct SurfaceSpec {
  PeriodMatrix tau;
  std::array<cplx, 3> coeffs;  // (b, c, d)
  TruncationPolicy policy;

  SurfaceSpec(PeriodMatrix tau_in, std::array<cplx, 3> coeffs_in, TruncationPolicy policy_in = {});

  /// Coefficient in f of the section with the given label (1 for 000).
  cplx coefficient(const Label& label) const;
  bool all_coefficients_nonzero() const;
};

struct LatticePoint {
  IVector m = IVector::Zero(3);
  IVector q = IVector::Zero(3);
  int diag_flag = 0;  // multiple of (1,1,1), canonical in {0,1}

  CVector vector(const PeriodMatrix& tau) const;
};

struct TorusPoint {
  CVector z;
  double residual = 0.0;
};

/// theta_ijk(z) = theta[(i,j,k)/2, 0](z, tau).
ThetaJet section_jet(const SurfaceSpec& spec, const Label& label, const CVector& z);
std::array<ThetaJet, 4> basis_jets(const SurfaceSpec& spec, const CVector& z);

struct SectionEvaluator {
  Label label;
  std::string name;
  std::function<ThetaJet(const CVector&)> evaluate;

  ThetaJet operator()(const CVector& z) const { return evaluate(z); }
};

std::array<SectionEvaluator, 4> basis_sections(const SurfaceSpec& spec);

/// Jet of f = theta000 + b theta011 + c theta101 + d theta110.
ThetaJet surface_f(const SurfaceSpec& spec, const CVector& z);

/// exp(pi y^T (Im tau)^{-1} y); the size of theta near z.
double membership_scale(const SurfaceSpec& spec, const CVector& z);
/// |f(z)| < membership_tol * scale.
inline constexpr double kMembershipTol = 1e-9;

/// The 16 base points of |L| for diagonal tau, grouped as the G = <e1,e2> orbits
/// B000, B011, B101, B110 (four points each, in this order).
std::vector<TorusPoint> base_points(const SurfaceSpec& spec);
/// Orbit representatives of base_points, in label order.
std::array<CVector, 4> base_point_representatives(const PeriodMatrix& tau);

/// Base points for non-diagonal tau: continuation from diag(tau) along
/// tau(t) = diag + t (tau - diag), Gauss-Newton on the four section equations.
std::vector<TorusPoint> base_points_continued(const SurfaceSpec& spec, int steps = 8);

// --- lattice reduction on T and A ------------------------------------------

/// Representative of z in the half-open parallelepiped spanned by tau e_i, 2 e_i.
CVector reduce_to_cell(const CVector& z, const PeriodMatrix& tau);
/// Size of the shortest representative of z modulo tau Z^3 + 2 Z^3 (centred cell).
double torus_distance(const CVector& z, const CVector& w, const PeriodMatrix& tau);
/// As torus_distance, also allowing the extra generator (1,1,1) of the A lattice.
double abelian_distance(const CVector& z, const CVector& w, const PeriodMatrix& tau);

// --- pencil decomposition --------------------------------------------------

/// f = f^(ij)(z_i, z_j) theta_0^(k)(z_k) + g^(ij)(z_i, z_j) theta_1^(k)(z_k)
/// for tau with tau_ik = tau_jk = 0. Axis k is 1-based.
class PencilSections {
 public:
  PencilSections(const SurfaceSpec& spec, int axis);

  int axis() const { return axis_; }
  std::array<int, 2> block() const { return block_; }  // 1-based (i, j), i < j
  cplx f_coefficient() const { return f_coeff_; }      // on theta_11^(ij)
  std::array<cplx, 2> g_coefficients() const { return g_coeffs_; }  // on theta_01, theta_10

  /// Jets with respect to (z_i, z_j).
  ThetaJet f(const CVector& zij) const;
  ThetaJet g(const CVector& zij) const;
  /// theta_h^(k) jet in z_k (1x1 gradient/hessian).
  ThetaJet fibre_theta(int h, cplx zk) const;
  /// Embeds (z_i, z_j, z_k) into a 3-vector.
  CVector assemble(const CVector& zij, cplx zk) const;
  const PeriodMatrix& block_tau() const { return block_tau_; }
  const PeriodMatrix& fibre_tau() const { return fibre_tau_; }

 private:
  ThetaJet block_theta(int hi, int hj, const CVector& zij) const;

  int axis_;
  std::array<int, 2> block_;
  cplx f_coeff_;
  std::array<cplx, 2> g_coeffs_;
  PeriodMatrix block_tau_;
  PeriodMatrix fibre_tau_;
  TruncationPolicy policy_;
};

PencilSections pencil_sections(const SurfaceSpec& spec, int axis);

// --- one-variable sections on E = C/<2, tau> --------------------------------

/// theta_h(z) = theta[h/2, 0](z, tau) as a scalar jet (value, first, second derivative).
struct ScalarJet {
  cplx value;
  cplx d1;
  cplx d2;
};
ScalarJet elliptic_theta(int h, cplx z, cplx tau, const TruncationPolicy& policy = {});

/// eta(z) = theta_0 theta_1' - theta_1 theta_0'.
cplx eta_section(cplx z, cplx tau, const TruncationPolicy& policy = {});

struct RhoV3 {
  cplx rho0;
  cplx rho1;
  cplx v3;
};

/// rho_j(z,w) = det[[theta_j(z), theta_j(w)], [theta_j'(z), theta_j'(w)]];
/// v3(z,w) = det[[theta_0(z) theta_0(w), theta_1(z) theta_1(w)], [rho_0, rho_1]].
RhoV3 rho_v3(cplx z, cplx w, cplx tau, const TruncationPolicy& policy = {});

struct NumericalInvariants {
  long long p_g;
  long long q;
  long long k_power;  // K^(g-1)

  bool operator==(const NumericalInvariants&) const = default;
};

/// Invariants of a smooth divisor in a polarisation of type (d_1, ..., d_g).
NumericalInvariants numerical_invariants(std::span<const int> polarization_type);

}  // namespace thetalab
