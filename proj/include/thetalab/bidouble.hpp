#pragma once

// The genus 9 curve C in P^3 cut out by X^2+Y^2+Z^2+T^2 = 0 and
// q(X^2,Y^2,Z^2,T^2) = XYZT, the Klein four-group acting by sign changes,
// the squaring cover onto the plane quartic, and the six canonical sections
// of the quotient surface of C x C.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "thetalab/multipoly.hpp"
#include "thetalab/theta.hpp"

namespace thetalab::bidouble {

using Point = Eigen::Vector4cd;
using RationalPoint = std::array<mpq_class, 4>;

struct QuarticModel {
  // Coefficients of xx, yy, zz, tt, xy, xz, xt, yz, yt, zt.
  std::array<mpq_class, 10> q_coeffs;

  /// x^2 + 2y^2 + 3z^2 + 5t^2 plus small rational cross terms.
  static QuarticModel sample();

  cplx q(const Point& s) const;
  mpq_class q(const RationalPoint& s) const;
  MultiPoly q(const std::array<MultiPoly, 4>& s) const;
};

enum class Label { id, a, b, ab };

struct GroupElement {
  Label label = Label::id;
  std::array<int, 4> sign_pattern{1, 1, 1, 1};

  static GroupElement make(Label label);
  static std::array<GroupElement, 4> all();

  std::string name() const;
  GroupElement compose(const GroupElement& other) const;
  Point apply(const Point& p) const;
  std::array<MultiPoly, 4> apply(const std::array<MultiPoly, 4>& p) const;
  bool operator==(const GroupElement&) const = default;
};

struct Residuals {
  cplx r1;
  cplx r2;
};

/// r1 = X^2+Y^2+Z^2+T^2, r2 = q(X^2,Y^2,Z^2,T^2) - XYZT; ZeroVector for P = 0.
Residuals curve_residuals(const QuarticModel& model, const Point& p);
std::array<mpq_class, 2> curve_residuals(const QuarticModel& model, const RationalPoint& p);

/// [X^2, Y^2, Z^2, T^2]; ZeroVector for P = 0.
Point psi_cover(const Point& p);
RationalPoint psi_cover(const RationalPoint& p);

inline constexpr std::array<const char*, 6> kSectionNames{"eta01", "eta02", "eta12",
                                                          "omega45", "omega67", "omega89"};

/// (eta01, eta02, eta12, omega45, omega67, omega89) at (P0, P1).
std::array<cplx, 6> canonical_sections(const Point& p0, const Point& p1);

/// The same six sections as polynomials in X0..T0, X1..T1.
std::array<MultiPoly, 6> section_polynomials();

enum class Behaviour { invariant, anti_invariant, neither };
std::string to_string(Behaviour b);

struct SectionAudit {
  std::string section;
  std::string action;  // "diag(g)", "swap", "g on factor 0"
  Behaviour behaviour = Behaviour::neither;
};

struct CertificateReport {
  std::vector<SectionAudit> audits;
  int diagonal_identities = 0;  // s(gP0, gP1) == s(P0, P1), out of 24
  int swap_identities = 0;      // s(P1, P0) == -s(P0, P1), out of 6
  bool psi_invariant = false;   // psi(gP) == psi(P) for all g
  bool quartic_identity = false;  // q(psi)^2 - xyzt == r2 (r2 + 2 XYZT)
};

/// Exact certificates; CertificateFailed if a diagonal or swap identity fails.
CertificateReport invariance_certificates(const QuarticModel& model);

/// Newton solve for (Z, T) with X, Y fixed at random rationals.
Point sample_curve_point(const QuarticModel& model, std::uint64_t seed);

/// Rank of the 2x4 Jacobian of (r1, r2) at P, singular value cutoff `tol`.
int residual_jacobian_rank(const QuarticModel& model, const Point& p, double tol = 1e-8);

struct BitangentLine {
  int coordinate = 0;  // the line {coordinate = 0}, 0..3 for x, y, z, t
  std::array<std::complex<long double>, 4> roots{};
  double pairing_error = 0.0;  // worst distance inside a matched pair of roots
  double separation = 0.0;     // distance between the two pairs
  bool exact_square = false;   // restricted binary quartic is (binary quadratic)^2
  bool passed = false;
};

/// Restricts q^2 - xyzt to each coordinate line of the plane x+y+z+t = 0.
std::vector<BitangentLine> bitangency_probe(const QuarticModel& model, double tol = 1e-8);

}  // namespace thetalab::bidouble
