#include "thetalab/theta.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace thetalab {

namespace {

constexpr cplx kI{0.0, 1.0};

double reduce_mod_one(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  return r;
}

RVector centre_shift(const CVector& z, const PeriodMatrix& tau) {
  RVector y = z.imag();
  return tau.imag_inverse() * y;
}

}  // namespace

// ---------------------------------------------------------------------------
// PeriodMatrix

PeriodMatrix::PeriodMatrix(CMatrix entries) : entries_(std::move(entries)) {
  const auto g = entries_.rows();
  if (g < 1 || g > kMaxGenus || entries_.cols() != g) {
    throw Error(ErrorKind::InvalidArgument, "period matrix must be square with genus 1..3");
  }
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (entries_(i, j) != entries_(j, i)) {
        throw Error(ErrorKind::InvalidArgument, "period matrix is not symmetric");
      }
    }
  }
  imag_ = entries_.imag();
  Eigen::LLT<RMatrix> llt(imag_);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NonPositiveDefinite, "Cholesky of Im(tau) failed");
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(imag_);
  min_eigenvalue_ = eig.eigenvalues().minCoeff();
  if (!(min_eigenvalue_ > 0.0)) {
    throw Error(ErrorKind::NonPositiveDefinite, "Im(tau) has a non-positive eigenvalue");
  }
  imag_inverse_ = llt.solve(RMatrix::Identity(g, g));
}

PeriodMatrix PeriodMatrix::diagonal(std::span<const cplx> diag) {
  const auto g = static_cast<Eigen::Index>(diag.size());
  CMatrix m = CMatrix::Zero(g, g);
  for (Eigen::Index i = 0; i < g; ++i) m(i, i) = diag[static_cast<size_t>(i)];
  return PeriodMatrix(std::move(m));
}

bool PeriodMatrix::is_diagonal(double tol) const {
  for (int i = 0; i < genus(); ++i) {
    for (int j = 0; j < genus(); ++j) {
      if (i != j && std::abs(entries_(i, j)) > tol) return false;
    }
  }
  return true;
}

bool PeriodMatrix::splits_off(int k, double tol) const {
  for (int i = 0; i < genus(); ++i) {
    if (i != k && std::abs(entries_(i, k)) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Characteristics and policy

ThetaCharacteristic::ThetaCharacteristic(RVector a_in, RVector b_in)
    : a(std::move(a_in)), b(std::move(b_in)) {
  if (a.size() != b.size() || a.size() < 1 || a.size() > kMaxGenus) {
    throw Error(ErrorKind::InvalidArgument, "characteristic vectors must share genus 1..3");
  }
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a(i) = reduce_mod_one(a(i));
    b(i) = reduce_mod_one(b(i));
  }
}

ThetaCharacteristic ThetaCharacteristic::halves(std::span<const int> a2, std::span<const int> b2) {
  RVector a(static_cast<Eigen::Index>(a2.size()));
  RVector b(static_cast<Eigen::Index>(b2.size()));
  for (size_t i = 0; i < a2.size(); ++i) a(static_cast<Eigen::Index>(i)) = 0.5 * a2[i];
  for (size_t i = 0; i < b2.size(); ++i) b(static_cast<Eigen::Index>(i)) = 0.5 * b2[i];
  return ThetaCharacteristic(std::move(a), std::move(b));
}

ThetaCharacteristic ThetaCharacteristic::even(std::span<const int> a2) {
  std::vector<int> zeros(a2.size(), 0);
  return halves(a2, zeros);
}

ThetaCharacteristic ThetaCharacteristic::zero(int g) {
  return ThetaCharacteristic(RVector::Zero(g), RVector::Zero(g));
}

void TruncationPolicy::validate() const {
  if (!(target_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "target_tol must be positive");
  if (max_radius < 1) throw Error(ErrorKind::InvalidArgument, "max_radius must be >= 1");
}

// ---------------------------------------------------------------------------
// Truncation

double gaussian_scale(const CVector& z, const PeriodMatrix& tau) {
  RVector y = z.imag();
  return std::exp(kPi * y.dot(tau.imag_inverse() * y));
}

double tail_bound(int radius, int genus, double min_eigenvalue, double centre_norm, int order) {
  // Points outside the box satisfy ||k + delta||_inf >= s - 1/2 on the shell
  // ||k||_inf = s, and the shell has at most 2g (2s+1)^(g-1) points.
  double total = 0.0;
  for (int s = radius + 1;; ++s) {
    const double shell = 2.0 * genus * std::pow(2.0 * s + 1.0, genus - 1);
    const double dist = s - 0.5;
    const double weight = std::pow(2.0 * kPi * (std::sqrt(double(genus)) * (s + 0.5) + centre_norm),
                                   order);
    const double term = shell * weight * std::exp(-kPi * min_eigenvalue * dist * dist);
    total += term;
    if (term < 1e-300 || term < total * 1e-18) break;
  }
  return total;
}

int summation_radius(const CVector& z, const PeriodMatrix& tau, const ThetaCharacteristic& chi,
                     const TruncationPolicy& policy, int order) {
  policy.validate();
  if (z.size() != tau.genus() || chi.genus() != tau.genus()) {
    throw Error(ErrorKind::DimensionMismatch, "z, tau and characteristic must share the genus");
  }
  const double cnorm = centre_shift(z, tau).norm() + chi.a.norm();
  for (int r = 1; r <= policy.max_radius; ++r) {
    if (tail_bound(r, tau.genus(), tau.min_eigenvalue(), cnorm, order) < policy.target_tol) {
      return r;
    }
  }
  std::ostringstream msg;
  msg << "tail bound does not reach " << policy.target_tol << " within radius "
      << policy.max_radius;
  throw Error(ErrorKind::RadiusExceeded, msg.str());
}

// ---------------------------------------------------------------------------
// Summation

ThetaJet theta_jet_at_radius(const CVector& z, const PeriodMatrix& tau,
                             const ThetaCharacteristic& chi, int radius) {
  const int g = tau.genus();
  if (z.size() != g || chi.genus() != g) {
    throw Error(ErrorKind::DimensionMismatch, "z, tau and characteristic must share the genus");
  }
  const RVector c = centre_shift(z, tau);
  IVector n0(g);
  for (int i = 0; i < g; ++i) n0(i) = static_cast<int>(std::lround(-c(i) - chi.a(i)));

  const CMatrix& t = tau.entries();
  const CVector zb = z + chi.b.cast<cplx>();
  // Terms whose Gaussian factor falls this far below the peak are dropped;
  // the box count times derivative weights keeps them below 1e-6 of target.
  const double log_peak = kPi * z.imag().dot(c);
  const double cutoff = log_peak - 80.0;

  cplx value{0.0, 0.0};
  CVector grad = CVector::Zero(g);
  CMatrix hess = CMatrix::Zero(g, g);

  std::array<int, kMaxGenus> k{};
  for (int i = 0; i < g; ++i) k[static_cast<size_t>(i)] = -radius;
  RVector v(g);
  while (true) {
    for (int i = 0; i < g; ++i) v(i) = n0(i) + k[static_cast<size_t>(i)] + chi.a(i);
    cplx quad{0.0, 0.0};
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) quad += v(i) * t(i, j) * v(j);
    }
    cplx lin{0.0, 0.0};
    for (int i = 0; i < g; ++i) lin += v(i) * zb(i);
    const cplx expo = kI * kPi * quad + 2.0 * kI * kPi * lin;
    if (expo.real() > cutoff) {
      const cplx term = std::exp(expo);
      value += term;
      for (int i = 0; i < g; ++i) {
        const cplx di = 2.0 * kI * kPi * v(i);
        grad(i) += di * term;
        for (int j = 0; j <= i; ++j) {
          hess(i, j) += di * (2.0 * kI * kPi * v(j)) * term;
        }
      }
    }
    int idx = 0;
    while (idx < g && k[static_cast<size_t>(idx)] == radius) {
      k[static_cast<size_t>(idx)] = -radius;
      ++idx;
    }
    if (idx == g) break;
    ++k[static_cast<size_t>(idx)];
  }
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < i; ++j) hess(j, i) = hess(i, j);
  }
  return ThetaJet{value, std::move(grad), std::move(hess)};
}

cplx theta_value(const CVector& z, const PeriodMatrix& tau, const ThetaCharacteristic& chi,
                 const TruncationPolicy& policy) {
  const int r = summation_radius(z, tau, chi, policy, 0);
  return theta_jet_at_radius(z, tau, chi, r).value;
}

ThetaJet theta_jet(const CVector& z, const PeriodMatrix& tau, const ThetaCharacteristic& chi,
                   const TruncationPolicy& policy) {
  const int r = summation_radius(z, tau, chi, policy, 2);
  return theta_jet_at_radius(z, tau, chi, r);
}

// ---------------------------------------------------------------------------
// Lattice

LatticeDecomposition decompose_lattice_vector(const CVector& lam, const PeriodMatrix& tau) {
  const int g = tau.genus();
  if (lam.size() != g) throw Error(ErrorKind::DimensionMismatch, "lattice vector has wrong size");
  const RVector m_real = tau.imag_inverse() * RVector(lam.imag());
  IVector m(g);
  for (int i = 0; i < g; ++i) {
    m(i) = static_cast<int>(std::lround(m_real(i)));
    if (std::abs(m_real(i) - m(i)) > 1e-9) {
      throw Error(ErrorKind::NotInLattice, "imaginary part is not an integer combination of Im(tau)");
    }
  }
  const CVector rest = lam - tau.entries() * m.cast<cplx>();
  IVector q(g);
  for (int i = 0; i < g; ++i) {
    const double half = rest(i).real() / 2.0;
    q(i) = static_cast<int>(std::lround(half));
    if (std::abs(half - q(i)) > 1e-9 || std::abs(rest(i).imag()) > 1e-9) {
      throw Error(ErrorKind::NotInLattice, "real part is not in 2Z^g after removing tau m");
    }
  }
  return LatticeDecomposition{std::move(m), std::move(q)};
}

cplx automorphy_factor(const IVector& m, const CVector& z, const PeriodMatrix& tau) {
  const CVector mc = m.cast<cplx>();
  const cplx quad = mc.dot(tau.entries() * mc);  // dot conjugates the left side; m is real
  const cplx lin = mc.dot(z);
  return std::exp(-kI * kPi * quad - 2.0 * kI * kPi * lin);
}

cplx automorphy_factor(const CVector& lam, const CVector& z, const PeriodMatrix& tau) {
  return automorphy_factor(decompose_lattice_vector(lam, tau).m, z, tau);
}

}  // namespace thetalab
