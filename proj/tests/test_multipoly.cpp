#include <gtest/gtest.h>

#include <random>

#include "thetalab/error.hpp"
#include "thetalab/multipoly.hpp"

using namespace thetalab;

namespace {

MultiPoly V(Var v, unsigned p = 1) { return MultiPoly::var(v, p); }

MultiPoly::Assignment random_point(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-30, 30), den(1, 11);
  MultiPoly::Assignment a;
  for (auto& v : a) {
    v = mpq_class(num(rng), den(rng));
    v.canonicalize();
  }
  return a;
}

}  // namespace

TEST(MultiPoly, ArithmeticCancels) {
  const MultiPoly x = V(Var::x1), y = V(Var::y1);
  EXPECT_EQ((x + y) * (x - y), x.pow(2) - y.pow(2));
  EXPECT_TRUE((x - x).is_zero());
  EXPECT_EQ((x + 1).pow(3), x.pow(3) + 3 * x.pow(2) + 3 * x + 1);
}

TEST(MultiPoly, DerivativeAndSubstitution) {
  const MultiPoly x = V(Var::x1), e = V(Var::e1), y = V(Var::y1);
  const MultiPoly g = y.pow(2) - (x.pow(2) - 1) * (x.pow(2) - e.pow(2));
  EXPECT_EQ(g.derivative(Var::x1), 2 * x * (e.pow(2) - 2 * x.pow(2) + 1));
  EXPECT_EQ(g.derivative(Var::y1), 2 * y);
  EXPECT_EQ(g.substitute(Var::x1, MultiPoly()), y.pow(2) - e.pow(2));
}

TEST(MultiPoly, DegreeAndHomogeneity) {
  const std::array<Var, 2> xy{Var::x1, Var::y1};
  const MultiPoly p = V(Var::b) * V(Var::x1, 2) * V(Var::y1) + V(Var::x1) * V(Var::y1, 2);
  EXPECT_EQ(p.degree_in(xy), 3);
  EXPECT_TRUE(p.homogeneous_in(xy));
  EXPECT_FALSE((p + V(Var::x1)).homogeneous_in(xy));
  EXPECT_EQ(MultiPoly().degree_in(xy), -1);
  EXPECT_EQ(p.degree(Var::b), 1);
}

TEST(MultiPoly, ExpansionAgreesWithEliminationAtRationalPoints) {
  std::mt19937_64 rng(11);
  const std::array<Var, 6> vars{Var::x1, Var::x2, Var::x3, Var::y1, Var::y2, Var::b};
  PolyMatrix m(5, std::vector<MultiPoly>(7));
  std::uniform_int_distribution<int> pick(0, 5), coef(-3, 3);
  for (auto& row : m) {
    for (auto& e : row) {
      e = coef(rng) * V(vars[static_cast<std::size_t>(pick(rng))]) + coef(rng);
    }
  }
  const std::array<int, 5> cols{7, 2, 5, 1, 4};
  const MultiPoly det = minor(m, cols);
  for (int t = 0; t < 10; ++t) {
    const auto pt = random_point(rng);
    auto full = evaluate_matrix(m, pt);
    std::vector<std::vector<mpq_class>> sub(5);
    for (std::size_t r = 0; r < 5; ++r) {
      for (int c : cols) sub[r].push_back(full[r][static_cast<std::size_t>(c - 1)]);
    }
    EXPECT_EQ(det.evaluate(pt), rational_determinant(sub));
  }
}

TEST(MultiPoly, ColumnOrderChangesSignOnly) {
  const PolyMatrix m{{V(Var::x1), 1, V(Var::y1)}, {2, V(Var::x2), 0}};
  const std::array<int, 2> a{1, 2}, b{2, 1};
  EXPECT_EQ(minor(m, a), -minor(m, b));
  EXPECT_EQ(minor(m, a), V(Var::x1) * V(Var::x2) - 2);
}

TEST(MultiPoly, BadColumnLists) {
  const PolyMatrix m{{1, 2, 3}, {4, 5, 6}};
  const auto kind = [&](std::vector<int> cols) {
    try {
      minor(m, cols);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  EXPECT_EQ(kind({1}), ErrorKind::BadColumnList);
  EXPECT_EQ(kind({1, 4}), ErrorKind::BadColumnList);
  EXPECT_EQ(kind({0, 1}), ErrorKind::BadColumnList);
  EXPECT_EQ(kind({2, 2}), ErrorKind::BadColumnList);
}

TEST(MultiPoly, RationalDeterminantSingular) {
  std::vector<std::vector<mpq_class>> m{{1, 2}, {2, 4}};
  EXPECT_EQ(rational_determinant(m), 0);
  std::vector<std::vector<mpq_class>> p{{0, 1}, {1, 0}};
  EXPECT_EQ(rational_determinant(p), -1);
}
