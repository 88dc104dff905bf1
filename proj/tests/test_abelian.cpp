#include <gtest/gtest.h>

#include <random>

#include "thetalab/abelian.hpp"

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

CVector random_z(std::mt19937_64& rng, double im = 0.5) {
  std::uniform_real_distribution<double> re(-1.0, 1.0), ii(-im, im);
  CVector z(3);
  for (int i = 0; i < 3; ++i) z(i) = cplx{re(rng), ii(rng)};
  return z;
}

cplx genus1(int h, cplx z, cplx tau) { return elliptic_theta(h, z, tau).value; }

}  // namespace

TEST(Sections, ProductFactorisation) {
  const SurfaceSpec spec = default_spec();
  const auto sections = basis_sections(spec);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const CVector z = random_z(rng);
    for (const auto& s : sections) {
      cplx prod = 1.0;
      for (int k = 0; k < 3; ++k) prod *= genus1(s.label[static_cast<size_t>(k)], z(k), spec.tau(k, k));
      const cplx v = s(z).value;
      EXPECT_LT(std::abs(v - prod), 1e-10 * std::max(std::abs(v), membership_scale(spec, z)));
    }
  }
}

TEST(Sections, NamesAndEvenness) {
  const SurfaceSpec spec = deformed_spec();
  const auto sections = basis_sections(spec);
  EXPECT_EQ(sections[0].name, "theta000");
  EXPECT_EQ(sections[3].name, "theta110");
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector z = random_z(rng);
    const double s = membership_scale(spec, z);
    for (const auto& sec : sections) {
      const cplx v = sec(z).value;
      EXPECT_LT(std::abs(sec(-z).value - v), 1e-10 * s);
      EXPECT_LT(std::abs(sec(z + CVector::Ones(3)).value - v), 1e-10 * s);
    }
  }
}

TEST(Surface, DescendsToA) {
  const SurfaceSpec spec = deformed_spec();
  std::mt19937_64 rng(3);
  std::vector<CVector> gens;
  for (int i = 0; i < 3; ++i) gens.emplace_back(spec.tau.entries().col(i));
  for (int i = 0; i < 3; ++i) gens.push_back(2.0 * CVector::Unit(3, i));
  for (int trial = 0; trial < 20; ++trial) {
    const CVector z = random_z(rng);
    const cplx f = surface_f(spec, z).value;
    const double s = membership_scale(spec, z);
    EXPECT_LT(std::abs(surface_f(spec, z + CVector::Ones(3)).value - f), 1e-10 * s);
    for (const CVector& lam : gens) {
      const cplx shifted = surface_f(spec, z + lam).value;
      const cplx expected = automorphy_factor(lam, z, spec.tau) * f;
      EXPECT_LT(std::abs(shifted - expected) / std::max(std::abs(shifted), s), 1e-9);
    }
  }
}

TEST(Surface, GradientMatchesFiniteDifferences) {
  const SurfaceSpec spec = default_spec();
  std::mt19937_64 rng(4);
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const CVector z = random_z(rng);
    const ThetaJet f = surface_f(spec, z);
    for (int k = 0; k < 3; ++k) {
      CVector zp = z, zm = z;
      zp(k) += h;
      zm(k) -= h;
      const cplx fd = (surface_f(spec, zp).value - surface_f(spec, zm).value) / (2 * h);
      EXPECT_LT(std::abs(fd - f.gradient(k)), 1e-6);
    }
  }
}

TEST(BasePoints, SixteenCommonZeros) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 5; ++trial) {
    const SurfaceSpec spec(diag3(I, 1.3 * I, 0.7 * I),
                           {cplx{u(rng), u(rng)}, cplx{u(rng), u(rng)}, cplx{u(rng), u(rng)}});
    const auto pts = base_points(spec);
    ASSERT_EQ(pts.size(), 16u);
    for (const auto& p : pts) {
      const double s = membership_scale(spec, p.z);
      for (const auto& jet : basis_jets(spec, p.z)) EXPECT_LT(std::abs(jet.value), 1e-9 * s);
      EXPECT_LT(p.residual, 1e-9 * s);
    }
    double closest = 1e9;
    for (size_t i = 0; i < pts.size(); ++i) {
      for (size_t j = 0; j < i; ++j) closest = std::min(closest, abelian_distance(pts[i].z, pts[j].z, spec.tau));
    }
    EXPECT_GT(closest, 0.1);
  }
}

TEST(BasePoints, RepresentativeOfB110) {
  const SurfaceSpec spec = default_spec();
  const auto reps = base_point_representatives(spec.tau);
  EXPECT_EQ(reps[3](0), cplx(0.5, 0.0));
  EXPECT_EQ(reps[3](1), cplx(0.5, 0.0));
  EXPECT_EQ(reps[3](2), (1.0 + spec.tau(2, 2)) / 2.0);
}

TEST(BasePoints, TwoTorsionOfA) {
  const SurfaceSpec spec = default_spec();
  for (const auto& p : base_points(spec)) {
    // 2P lies in the half lattice tau Z^3 + Z^3 of T, so 4P lies in the lattice.
    EXPECT_LT(torus_distance(4.0 * p.z, CVector::Zero(3), spec.tau), 1e-12);
  }
}

TEST(BasePoints, RequiresDiagonalTau) {
  try {
    base_points(deformed_spec());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotDiagonal);
  }
}

TEST(BasePoints, ContinuationToDeformedTau) {
  const SurfaceSpec spec = deformed_spec();
  const auto pts = base_points_continued(spec);
  ASSERT_EQ(pts.size(), 16u);
  for (const auto& p : pts) {
    const double s = membership_scale(spec, p.z);
    for (const auto& jet : basis_jets(spec, p.z)) EXPECT_LT(std::abs(jet.value), 1e-9 * s);
  }
}

TEST(Pencil, DecompositionPerAxis) {
  std::mt19937_64 rng(6);
  const SurfaceSpec spec = default_spec();
  for (int axis = 1; axis <= 3; ++axis) {
    const PencilSections pencil(spec, axis);
    const auto blk = pencil.block();
    for (int trial = 0; trial < 50; ++trial) {
      const CVector z = random_z(rng);
      const CVector zij{{z(blk[0] - 1), z(blk[1] - 1)}};
      const cplx zk = z(axis - 1);
      const cplx lhs = surface_f(spec, z).value;
      const cplx rhs = pencil.f(zij).value * pencil.fibre_theta(0, zk).value +
                       pencil.g(zij).value * pencil.fibre_theta(1, zk).value;
      EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(std::abs(lhs), membership_scale(spec, z)));
    }
  }
}

TEST(Pencil, CoefficientRouting) {
  const SurfaceSpec spec = default_spec();
  const PencilSections p3(spec, 3);
  EXPECT_EQ(p3.f_coefficient(), spec.coeffs[2]);
  EXPECT_EQ(p3.g_coefficients()[0], spec.coeffs[0]);
  EXPECT_EQ(p3.g_coefficients()[1], spec.coeffs[1]);
  const PencilSections p1(spec, 1);
  EXPECT_EQ(p1.f_coefficient(), spec.coeffs[0]);
  const PencilSections p2(spec, 2);
  EXPECT_EQ(p2.f_coefficient(), spec.coeffs[1]);
}

TEST(Pencil, DeformedBlockAllowedOnlyForThirdAxis) {
  const SurfaceSpec spec = deformed_spec();
  EXPECT_NO_THROW(PencilSections(spec, 3));
  try {
    PencilSections(spec, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BlockNotSplit);
  }
}

TEST(Pencil, VanishingAtBasePointBlocks) {
  const SurfaceSpec spec = default_spec();
  const PencilSections p(spec, 3);
  const auto reps = base_point_representatives(spec.tau);
  // B000 and B110: g vanishes on the block and theta_0 on the fibre.
  for (int r : {0, 3}) {
    const CVector zij = reps[static_cast<size_t>(r)].head(2);
    const double s = gaussian_scale(zij, p.block_tau());
    EXPECT_LT(std::abs(p.g(zij).value), 1e-9 * s);
    EXPECT_LT(std::abs(p.fibre_theta(0, reps[static_cast<size_t>(r)](2)).value), 1e-9);
  }
  // B011 and B101: f vanishes on the block and theta_1 on the fibre.
  for (int r : {1, 2}) {
    const CVector zij = reps[static_cast<size_t>(r)].head(2);
    const double s = gaussian_scale(zij, p.block_tau());
    EXPECT_LT(std::abs(p.f(zij).value), 1e-9 * s);
    EXPECT_LT(std::abs(p.fibre_theta(1, reps[static_cast<size_t>(r)](2)).value), 1e-9);
  }
}

TEST(Pencil, GFlipsUnderDiagonalHalfShift) {
  const SurfaceSpec spec = default_spec();
  const PencilSections p(spec, 3);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector zij = random_z(rng).head(2);
    const cplx g0 = p.g(zij).value;
    const cplx g1 = p.g(zij + CVector::Ones(2)).value;
    EXPECT_LT(std::abs(g0 + g1), 1e-10 * std::max(1.0, std::abs(g0)));
  }
}

TEST(Eta, VanishesOnTwoTorsion) {
  const cplx tau = 1.3 * I;
  for (cplx z : {cplx{0, 0}, cplx{1, 0}, tau / 2.0, 1.0 + tau / 2.0}) {
    EXPECT_LT(std::abs(eta_section(z, tau)), 1e-12);
  }
}

TEST(Eta, FloorAwayFromTorsion) {
  const cplx tau = 1.3 * I;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 100) {
    const cplx z = 2.0 * u(rng) + tau * u(rng);
    const std::array<cplx, 8> torsion{0.0, 1.0, 2.0, tau / 2.0, 1.0 + tau / 2.0, 2.0 + tau / 2.0, tau, 2.0 + tau};
    double d = 1e9;
    for (cplx t : torsion) d = std::min(d, std::abs(z - t));
    if (d < 0.1) continue;
    ++checked;
    const double s = gaussian_scale(CVector::Constant(1, z), PeriodMatrix::scalar(tau));
    EXPECT_GT(std::abs(eta_section(z, tau)), 1e-3 * s * s);
  }
}

TEST(RhoV3, Diagonal) {
  const cplx tau = 0.7 * I;
  const RhoV3 r = rho_v3(cplx{0.3, 0.1}, cplx{0.3, 0.1}, tau);
  EXPECT_LT(std::abs(r.rho0), 1e-14);
  EXPECT_LT(std::abs(r.rho1), 1e-14);
}

TEST(RhoV3, AntidiagonalFactorisation) {
  const cplx tau = 0.7 * I;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const cplx z{u(rng), 0.3 * u(rng)};
    const RhoV3 r = rho_v3(z, -z, tau);
    const cplx t0 = elliptic_theta(0, z, tau).value;
    const cplx t1 = elliptic_theta(1, z, tau).value;
    const cplx expected = -2.0 * t0 * t1 * eta_section(z, tau);
    EXPECT_LT(std::abs(r.v3 - expected), 1e-9 * std::max(1.0, std::abs(expected)));
  }
}

TEST(Invariants, Table) {
  const std::array<int, 3> t122{1, 2, 2};
  const std::array<int, 3> t112{1, 1, 2};
  const std::array<int, 1> t1{1};
  EXPECT_EQ(numerical_invariants(t122), (NumericalInvariants{6, 3, 24}));
  EXPECT_EQ(numerical_invariants(t112), (NumericalInvariants{4, 3, 12}));
  EXPECT_EQ(numerical_invariants(t1), (NumericalInvariants{1, 1, 1}));
  const std::array<int, 2> bad{2, 3};
  try {
    numerical_invariants(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotDivisorChain);
  }
}
