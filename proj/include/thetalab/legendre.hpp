#pragma once

// Legendre functions on E = C / <2, tau>, the affine model of S in
// (x_i, y_i) coordinates, the differential matrices N and M of the affine
// maps, and the exact identity ledger for their minors.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thetalab/canonical.hpp"
#include "thetalab/multipoly.hpp"

namespace thetalab {

// --- numeric Legendre functions -------------------------------------------

struct LegendreModel {
  cplx tau;
  cplx a_param;  // x(tau/2), a ratio of theta constants
  TruncationPolicy policy;
  cplx theta0_null;
  cplx theta1_null;

  /// Throws InvalidArgument if a_param lands on 0 or +-1.
  explicit LegendreModel(cplx tau_in, TruncationPolicy policy_in = {});
};

/// x(z) = theta_0(0) theta_1(z) / (theta_1(0) theta_0(z)); PoleAtZ near zeros of theta_0.
cplx legendre_x(const LegendreModel& model, cplx z);
/// dx/dz by the quotient rule.
cplx legendre_dx(const LegendreModel& model, cplx z);

struct AffinePoint {
  cplx x;
  cplx y;
};

/// y^2 = (x^2 - 1)(x^2 - a^2) calibrated once at z_ref: y = kappa * dx/dz.
class AffineChart {
 public:
  explicit AffineChart(LegendreModel model, cplx z_ref = cplx{0.3, 0.1});

  const LegendreModel& model() const { return model_; }
  cplx kappa() const { return kappa_; }

  /// CalibrationFailed if the curve residual exceeds 1e-8 (relative to max(1, |x|^4)).
  AffinePoint operator()(cplx z) const;
  double curve_residual(const AffinePoint& p) const;

 private:
  LegendreModel model_;
  cplx kappa_;
};

AffinePoint analytic_to_affine(const AffineChart& chart, cplx z);

/// Lattice normalisations tested for the Legendre relations.
enum class LegendreNormalization {
  TwoTau,       // E = C/<2, tau>, special points 0, 1, tau/2, 1 + tau/2
  UnitRescaled  // E = C/<1, tau> with x(2z), special points 0, 1/2, tau/2, (1 + tau)/2
};

struct RelationCheck {
  std::string name;
  double max_error = 0.0;
  bool passed = false;
};

/// Periodicity, half-period sign flip, reflection, evenness, special values
/// and vanishing of x' on the 2-torsion, at `samples` random points.
std::vector<RelationCheck> legendre_relations(const LegendreModel& model,
                                              LegendreNormalization norm, int samples,
                                              std::uint64_t seed, double tol = 1e-9);

// --- symbolic matrices ------------------------------------------------------

/// g_i = y_i^2 - (x_i^2 - 1)(x_i^2 - e_i^2).
MultiPoly legendre_curve(int i);

/// Components of the affine map Phi, in the order
/// ((b x2 + c x1) y3, (b x3 + d x1) y2, (d x2 + c x3) y1, x1 x2, x1 x3, x2 x3, g1, g2, g3).
std::vector<MultiPoly> phi_components();

/// The 6x9 matrix N as displayed: rows d/dx1, d/dx2, d/dx3, d/dy1, d/dy2, d/dy3;
/// columns 4..6 hold the derivatives of x2 x3, x1 x3, x1 x2.
PolyMatrix build_phi_matrix_N();

/// Jacobian of phi_components() in its own column order.
PolyMatrix phi_jacobian();

/// The 7x10 matrix M in variables (x1, x2, v3, y1, y2, w3), entry by entry.
PolyMatrix build_phi_inf_matrix_M();

/// N with x3 = 0 and y3 = delta3.
PolyMatrix substitute_boundary(const PolyMatrix& n);

struct IdentityRecord {
  std::string name;
  std::vector<int> columns;
  MultiPoly computed;
  MultiPoly claimed;
  MultiPoly residual;  // computed - claimed
  bool holds = false;
  bool sign_flip = false;  // computed == -claimed
  int degree_xy = -1;
  bool homogeneous_xy = false;
  int substitution_trials = 0;
  bool substitution_matches_expansion = false;
  bool substitution_matches_claim = false;
};

struct IdentityLedger {
  std::vector<IdentityRecord> records;
  double seconds = 0.0;

  int certified() const;
};

/// The six N minors, the three boundary minors and the M minor.
IdentityLedger verify_identity_ledger(std::uint64_t seed = 1, int trials = 5);

/// One row per component of the affine map after (x3, y3) = (1/v3, w3/v3^2):
/// the component cleared of denominators, the power of v3 used, and the
/// ratio to the displayed Phi_infinity component at a rational test point.
struct ChartComponent {
  std::string affine;
  int v_power = 0;
  MultiPoly cleared;
  MultiPoly displayed;
  std::optional<mpq_class> ratio;  // displayed / cleared at the test point
};
std::vector<ChartComponent> chart_change_check();

// --- alignment with the analytic canonical map ----------------------------

struct AffineSample {
  CVector z;
  std::array<AffinePoint, 3> xy;
  CVector affine;    // the six affine coordinates
  CVector analytic;  // [theta011, theta101, theta110, w1, w2, w3]
  double surface_relation = 0.0;  // |1 + b' x2 x3 + c' x1 x3 + d' x1 x2|
};

struct AlignmentResult {
  CMatrix matrix;  // analytic ~ matrix * affine
  double validation_error = 0.0;
  double fit_error = 0.0;
  double condition_number = 0.0;
  double max_surface_relation = 0.0;
  std::array<cplx, 3> renamed_coeffs{};  // (b', c', d')
  int fit_count = 0;
  int validation_count = 0;
};

/// (b', c', d') with b' = b (theta_1/theta_0)(0, tau_22) (theta_1/theta_0)(0, tau_33), etc.
std::array<cplx, 3> renamed_coefficients(const SurfaceSpec& spec);

std::vector<AffineSample> affine_samples(const SurfaceSpec& spec, int count, std::uint64_t seed);

/// Fits on the first `fit_count` samples, validates on the rest;
/// AlignmentFailed when validation exceeds `tol`.
AlignmentResult basis_alignment(const SurfaceSpec& spec, const std::vector<AffineSample>& samples,
                                int fit_count = 8, double tol = 1e-6);

}  // namespace thetalab
