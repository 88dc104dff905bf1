#include <gtest/gtest.h>

#include <random>

#include "thetalab/bidouble.hpp"
#include "thetalab/error.hpp"

using namespace thetalab;
using namespace thetalab::bidouble;

namespace {

Behaviour audit(const CertificateReport& rep, const std::string& section, const std::string& action) {
  for (const auto& a : rep.audits) {
    if (a.section == section && a.action == action) return a.behaviour;
  }
  throw std::runtime_error("missing audit");
}

Point random_point(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Point(cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng)));
}

}  // namespace

TEST(Group, PatternsAndComposition) {
  const auto g = GroupElement::all();
  EXPECT_EQ(g[1].sign_pattern, (std::array<int, 4>{1, 1, -1, -1}));
  EXPECT_EQ(g[2].sign_pattern, (std::array<int, 4>{1, -1, 1, -1}));
  EXPECT_EQ(g[1].compose(g[2]).label, Label::ab);
  for (const auto& x : g) {
    EXPECT_EQ(x.compose(x).label, Label::id);
    for (const auto& y : g) EXPECT_EQ(x.compose(y), y.compose(x));
  }
}

TEST(Curve, ResidualsAndEquivariance) {
  const auto m = QuarticModel::sample();
  const Residuals r = curve_residuals(m, Point(1.0, cplx(0, 1), 1.0, cplx(0, 1)));
  EXPECT_EQ(r.r1, cplx(0.0));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Point p = random_point(rng);
    const Residuals base = curve_residuals(m, p);
    EXPECT_TRUE(std::abs(base.r1) > 1e-6 || std::abs(base.r2) > 1e-6);
    for (const auto& g : GroupElement::all()) {
      const Residuals moved = curve_residuals(m, g.apply(p));
      EXPECT_EQ(moved.r1, base.r1);
      EXPECT_NEAR(std::abs(moved.r2 - base.r2), 0.0, 1e-14 * (1 + std::abs(base.r2)));
      EXPECT_EQ(psi_cover(g.apply(p)), psi_cover(p));
    }
  }
}

TEST(Curve, ExactResidualsAndZeroVector) {
  const auto m = QuarticModel::sample();
  const RationalPoint p{mpq_class(1, 2), mpq_class(-3), mpq_class(2, 7), mpq_class(1)};
  const auto r = curve_residuals(m, p);
  EXPECT_EQ(r[0], mpq_class(1, 4) + 9 + mpq_class(4, 49) + 1);
  const auto s = psi_cover(p);
  EXPECT_EQ(r[1], m.q(s) - p[0] * p[1] * p[2] * p[3]);
  try {
    psi_cover(Point::Zero());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVector);
  }
}

TEST(Curve, SampledPointsAreSmoothCurvePoints) {
  const auto m = QuarticModel::sample();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Point p = sample_curve_point(m, seed);
    const Residuals r = curve_residuals(m, p);
    EXPECT_LT(std::abs(r.r1), 1e-12 * p.squaredNorm());
    EXPECT_LT(std::abs(r.r2), 1e-12 * p.squaredNorm() * p.squaredNorm());
    EXPECT_EQ(residual_jacobian_rank(m, p), 2);
    const Point x = psi_cover(p);
    EXPECT_LT(std::abs(x.sum()), 1e-12 * x.norm());
    const cplx quartic = m.q(x) * m.q(x) - x(0) * x(1) * x(2) * x(3);
    EXPECT_LT(std::abs(quartic), 1e-10 * std::pow(x.norm(), 4));
  }
}

TEST(Sections, ValuesAndSymmetries) {
  const auto s = canonical_sections(Point(1, 0, 0, 0), Point(0, 1, 0, 0));
  EXPECT_EQ(s[0], cplx(1.0));
  std::mt19937_64 rng(8);
  const Point p = random_point(rng), q = random_point(rng);
  const auto a = canonical_sections(p, q), b = canonical_sections(q, p), d = canonical_sections(p, p);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(a[i], -b[i]);
    EXPECT_EQ(d[i], cplx(0.0));
  }
  const auto poly = section_polynomials();
  EXPECT_EQ(poly[3], MultiPoly::var(Var::X0) * MultiPoly::var(Var::Y0) * MultiPoly::var(Var::Z1) *
                             MultiPoly::var(Var::T1) -
                         MultiPoly::var(Var::X1) * MultiPoly::var(Var::Y1) * MultiPoly::var(Var::Z0) *
                             MultiPoly::var(Var::T0));
}

TEST(Certificates, DiagonalAndSwapExact) {
  const CertificateReport rep = invariance_certificates(QuarticModel::sample());
  EXPECT_EQ(rep.diagonal_identities, 24);
  EXPECT_EQ(rep.swap_identities, 6);
  EXPECT_TRUE(rep.psi_invariant);
  EXPECT_TRUE(rep.quartic_identity);
}

TEST(Certificates, SingleFactorAudit) {
  const CertificateReport rep = invariance_certificates(QuarticModel::sample());
  for (const char* eta : {"eta01", "eta02", "eta12"}) {
    for (const char* g : {"a", "b", "ab"}) {
      EXPECT_EQ(audit(rep, eta, std::string(g) + " on factor 0"), Behaviour::invariant);
    }
  }
  EXPECT_EQ(audit(rep, "omega45", "a on factor 0"), Behaviour::invariant);
  EXPECT_EQ(audit(rep, "omega45", "b on factor 0"), Behaviour::anti_invariant);
  EXPECT_EQ(audit(rep, "omega67", "a on factor 0"), Behaviour::anti_invariant);
  EXPECT_EQ(audit(rep, "omega89", "ab on factor 0"), Behaviour::invariant);
}

TEST(Bitangents, CoordinateLinesPairRoots) {
  const auto lines = bitangency_probe(QuarticModel::sample());
  ASSERT_EQ(lines.size(), 4u);
  for (const auto& l : lines) {
    EXPECT_TRUE(l.exact_square);
    EXPECT_LT(l.pairing_error, 1e-8);
    EXPECT_GT(l.separation, 1e-3);
    EXPECT_TRUE(l.passed);
  }
}
