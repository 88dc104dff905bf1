#pragma once

// Riemann theta functions with half-integer characteristics.
//
//   theta[a,b](z, tau) = sum_{n in Z^g} exp(pi i (n+a)^T tau (n+a) + 2 pi i (n+a)^T (z+b))
//
// The lattice sum is recentred on the real minimiser of the Gaussian factor
// and truncated to a box whose radius is chosen from a conservative tail bound
// in terms of the smallest eigenvalue of Im(tau). All tolerances are absolute
// after dividing by gaussian_scale(z, tau) = exp(pi y^T (Im tau)^{-1} y),
// y = Im z, which is the size of the largest term.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "thetalab/error.hpp"

namespace thetalab {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using IVector = Eigen::VectorXi;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr int kMaxGenus = 3;

/// Point of the Siegel upper half-space, g in 1..3.
class PeriodMatrix {
 public:
  /// Validates symmetry (exact) and positive definiteness of the imaginary part.
  explicit PeriodMatrix(CMatrix entries);

  static PeriodMatrix diagonal(std::span<const cplx> diag);
  static PeriodMatrix scalar(cplx tau) { return diagonal(std::span<const cplx>(&tau, 1)); }

  int genus() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }
  cplx operator()(int i, int j) const { return entries_(i, j); }

  const RMatrix& imag() const { return imag_; }
  const RMatrix& imag_inverse() const { return imag_inverse_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

  bool is_diagonal(double tol = 1e-14) const;
  /// True when entries (i,k) and (j,k) vanish for the complementary index k.
  bool splits_off(int k, double tol = 1e-14) const;

 private:
  CMatrix entries_;
  RMatrix imag_;
  RMatrix imag_inverse_;
  double min_eigenvalue_ = 0.0;
};

/// Characteristic (a, b); entries are reduced modulo 1 into [0, 1).
struct ThetaCharacteristic {
  RVector a;
  RVector b;

  ThetaCharacteristic(RVector a_in, RVector b_in);

  /// a = a2 / 2, b = b2 / 2 with integer numerators.
  static ThetaCharacteristic halves(std::span<const int> a2, std::span<const int> b2);
  /// (a, 0) with a = a2 / 2.
  static ThetaCharacteristic even(std::span<const int> a2);
  static ThetaCharacteristic zero(int g);

  int genus() const { return static_cast<int>(a.size()); }
};

struct TruncationPolicy {
  double target_tol = 1e-15;
  int max_radius = 40;

  void validate() const;
};

struct ThetaJet {
  cplx value{};
  CVector gradient;  // d/dz_j
  CMatrix hessian;   // d^2/dz_i dz_j
};

/// exp(pi y^T (Im tau)^{-1} y) with y = Im z.
double gaussian_scale(const CVector& z, const PeriodMatrix& tau);

/// Smallest box radius meeting policy.target_tol for derivatives up to `order`.
int summation_radius(const CVector& z, const PeriodMatrix& tau, const ThetaCharacteristic& chi,
                     const TruncationPolicy& policy, int order);

/// Conservative bound on the truncated tail, relative to gaussian_scale.
double tail_bound(int radius, int genus, double min_eigenvalue, double centre_norm, int order);

cplx theta_value(const CVector& z, const PeriodMatrix& tau, const ThetaCharacteristic& chi,
                 const TruncationPolicy& policy = {});

ThetaJet theta_jet(const CVector& z, const PeriodMatrix& tau, const ThetaCharacteristic& chi,
                   const TruncationPolicy& policy = {});

/// Same sum over a caller-chosen box radius; used for truncation-stability checks.
ThetaJet theta_jet_at_radius(const CVector& z, const PeriodMatrix& tau,
                             const ThetaCharacteristic& chi, int radius);

/// lambda = tau m + 2 q with integer m, q.
struct LatticeDecomposition {
  IVector m;
  IVector q;
};

/// Solves lambda = tau m + 2 q; throws NotInLattice if no integer solution exists.
LatticeDecomposition decompose_lattice_vector(const CVector& lam, const PeriodMatrix& tau);

/// exp(-pi i m^T tau m - 2 pi i m^T z): theta[a,0](z + tau m + 2q) = factor * theta[a,0](z)
/// for a in {0, 1/2}^g.
cplx automorphy_factor(const IVector& m, const CVector& z, const PeriodMatrix& tau);
cplx automorphy_factor(const CVector& lam, const CVector& z, const PeriodMatrix& tau);

}  // namespace thetalab
