#include <gtest/gtest.h>

#include <random>

#include "thetalab/canonical.hpp"

using namespace thetalab;

namespace {

const cplx I{0.0, 1.0};

PeriodMatrix diag3(cplx a, cplx b, cplx c) {
  const std::array<cplx, 3> d{a, b, c};
  return PeriodMatrix::diagonal(d);
}

SurfaceSpec default_spec() {
  return SurfaceSpec(diag3(I, 1.3 * I, 0.7 * I),
                     {cplx{0.9, 0.1}, cplx{1.1, -0.2}, cplx{0.8, 0.3}});
}

SurfaceSpec deformed_spec() {
  CMatrix m = diag3(I, 1.3 * I, 0.7 * I).entries();
  m(0, 1) = m(1, 0) = cplx{0.15, 0.05};
  return SurfaceSpec(PeriodMatrix(m), {cplx{0.9, 0.1}, cplx{1.1, -0.2}, cplx{0.8, 0.3}});
}

}  // namespace

TEST(Projective, ChordalDistance) {
  CVector p(3), q(3);
  p << 1.0, cplx{0.5, 0.2}, -0.3;
  q << 1.0, 0.0, 0.0;
  const auto pp = make_projective(p);
  EXPECT_LT(chordal_distance(pp, pp), 1e-15);
  EXPECT_LT(chordal_distance(pp, make_projective(cplx{-2.0, 3.0} * p)), 1e-7);
  EXPECT_NEAR(chordal_distance(make_projective(q), make_projective(CVector::Unit(3, 1))), 1.0, 1e-15);
  EXPECT_THROW(chordal_distance(pp, make_projective(CVector::Ones(2))), Error);
  try {
    make_projective(CVector::Zero(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVector);
  }
}

TEST(Sampling, OnSurfaceAndDeterministic) {
  const SurfaceSpec spec = default_spec();
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto seed = derive_seed(42, k);
    const TorusPoint p = sample_surface_point(spec, seed);
    const TorusPoint q = sample_surface_point(spec, seed);
    EXPECT_EQ(p.z, q.z);
    const double s = membership_scale(spec, p.z);
    const ThetaJet f = surface_f(spec, p.z);
    EXPECT_LT(std::abs(f.value), 1e-9 * s);
    EXPECT_GT(f.gradient.norm(), 1e-8 * s);
  }
  EXPECT_NE(derive_seed(42, 0), derive_seed(42, 1));
}

TEST(CanonicalMap, LatticeInvariance) {
  const SurfaceSpec spec = deformed_spec();
  const TorusPoint p = sample_surface_point(spec, derive_seed(1, 0));
  const auto phi = canonical_image(spec, p);
  const auto gauss = gauss_image(spec, p);
  std::vector<CVector> gens;
  for (int i = 0; i < 3; ++i) gens.emplace_back(spec.tau.entries().col(i));
  for (int i = 0; i < 3; ++i) gens.push_back(2.0 * CVector::Unit(3, i));
  gens.push_back(CVector::Ones(3));
  for (const CVector& lam : gens) {
    const TorusPoint shifted{p.z + lam, 0.0};
    EXPECT_LT(chordal_distance(phi, canonical_image(spec, shifted)), 1e-9);
    EXPECT_LT(chordal_distance(gauss, gauss_image(spec, shifted)), 1e-9);
  }
  EXPECT_LT(chordal_distance(gauss, gauss_image(spec, TorusPoint{-p.z, 0.0})), 1e-9);
}

TEST(CanonicalMap, BasePointRowPattern) {
  const SurfaceSpec spec = default_spec();
  const auto pts = base_points(spec);
  for (size_t k = 12; k < 16; ++k) {
    const auto m = diff_matrix(spec, pts[k].z);
    const double s = membership_scale(spec, pts[k].z);
    for (int c = 0; c < 4; ++c) EXPECT_LT(std::abs(m(0, c)), 1e-9 * s);
    // On B110 only theta_0 of the third factor vanishes, so the third row of
    // section derivatives is the only nonzero one among theta000 and theta110.
    EXPECT_LT(std::abs(m(1, 0)), 1e-9 * s);
    EXPECT_LT(std::abs(m(2, 0)), 1e-9 * s);
    EXPECT_GT(std::abs(m(3, 0)), 1e-3 * s);
  }
}

TEST(Rank, FullAtBasePointsAndRandomPoints) {
  const SurfaceSpec spec = default_spec();
  for (const auto& p : base_points(spec)) {
    const RankReport r = diff_rank_matrix(spec, p);
    EXPECT_EQ(r.rank_estimate, 4);
    EXPECT_GT(r.ratio(), 1e-4);
    EXPECT_TRUE(std::is_sorted(r.singular_values.rbegin(), r.singular_values.rend()));
  }
  for (std::uint64_t k = 0; k < 30; ++k) {
    const RankReport r = diff_rank_matrix(spec, sample_surface_point(spec, derive_seed(9, k)));
    EXPECT_EQ(r.rank_estimate, 4);
    EXPECT_GT(r.ratio(), 1e-4);
  }
}

TEST(Involution, FactorsOnCanonicalDivisors) {
  const SurfaceSpec spec = default_spec();
  for (int j = 1; j <= 3; ++j) {
    for (std::uint64_t k = 0; k < 10; ++k) {
      const TorusPoint p = sample_W(spec, j, derive_seed(100 + j, k));
      const double s = membership_scale(spec, p.z);
      EXPECT_LT(std::abs(surface_f(spec, p.z).gradient(j - 1)), 1e-9 * s);
      const TorusPoint q{apply_involution(p.z, {j}), 0.0};
      EXPECT_LT(std::abs(surface_f(spec, q.z).value), 1e-9 * s);
      EXPECT_LT(chordal_distance(canonical_image(spec, p), canonical_image(spec, q)), 1e-8);
      const auto elems = orbit_classify(spec, p, q);
      GroupElement iota;
      iota.signs[static_cast<size_t>(j - 1)] = -1;
      EXPECT_NE(std::find(elems.begin(), elems.end(), iota), elems.end());
    }
  }
}

TEST(Involution, DeformedCase) {
  const SurfaceSpec spec = deformed_spec();
  for (std::uint64_t k = 0; k < 5; ++k) {
    const TorusPoint p = sample_W(spec, 3, derive_seed(7, k));
    const TorusPoint q{apply_involution(p.z, {3}), 0.0};
    EXPECT_LT(chordal_distance(canonical_image(spec, p), canonical_image(spec, q)), 1e-8);
  }
  const TorusPoint p = sample_W_pair(spec, 1, 2, 3);
  const double s = membership_scale(spec, p.z);
  const ThetaJet f = surface_f(spec, p.z);
  EXPECT_LT(std::abs(f.value), 1e-9 * s);
  EXPECT_LT(std::abs(f.gradient(0)), 1e-9 * s);
  EXPECT_LT(std::abs(f.gradient(1)), 1e-9 * s);
  const TorusPoint q{apply_involution(p.z, {1, 2}), 0.0};
  EXPECT_LT(chordal_distance(canonical_image(spec, p), canonical_image(spec, q)), 1e-8);
}

TEST(Orbits, IdentityAndUnrelated) {
  const SurfaceSpec spec = default_spec();
  const TorusPoint p = sample_surface_point(spec, 1);
  const TorusPoint q = sample_surface_point(spec, 2);
  const auto self = orbit_classify(spec, p, p);
  EXPECT_NE(std::find(self.begin(), self.end(), GroupElement{}), self.end());
  EXPECT_TRUE(orbit_classify(spec, p, q).empty());
  EXPECT_EQ(GroupElement{}.name(), "id");
}

TEST(Census, DegenerateAtEveryPoint) {
  const SurfaceSpec spec = default_spec();
  const CensusResult census = rank_census(spec);
  for (const auto& axis : census.axes) EXPECT_EQ(axis.block_zero_count, 8);
  EXPECT_GT(census.total, 0);
  EXPECT_EQ(census.sign_classes * 2, census.total);
  for (const auto& r : census.reports) {
    EXPECT_LT(r.ratio(), kDegenerateTol);
    EXPECT_LE(r.rank_estimate, 3);
  }
  std::printf("census total %d\n", census.total);
}
