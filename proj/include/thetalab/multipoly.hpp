#pragma once

// Sparse multivariate polynomials with exact rational coefficients over a
// fixed symbol table, and exact determinants of small polynomial matrices.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace thetalab {

enum class Var : std::uint8_t {
  x1, x2, x3, y1, y2, y3, v3, w3, b, c, d, e1, e2, e3, delta3,
  X0, Y0, Z0, T0, X1, Y1, Z1, T1,
};

inline constexpr std::size_t kNumVars = 23;

std::string_view var_name(Var v);

class MultiPoly {
 public:
  using Exponents = std::array<std::uint8_t, kNumVars>;
  using Terms = std::map<Exponents, mpq_class>;
  using Assignment = std::array<mpq_class, kNumVars>;

  MultiPoly() = default;
  MultiPoly(long value);  // NOLINT: constants convert implicitly
  MultiPoly(const mpq_class& value);  // NOLINT
  static MultiPoly var(Var v, unsigned power = 1);
  static MultiPoly monomial(const mpq_class& coeff, const Exponents& exps);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly operator-() const;
  bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }

  MultiPoly pow(unsigned n) const;
  MultiPoly derivative(Var v) const;
  MultiPoly substitute(Var v, const MultiPoly& value) const;
  mpq_class evaluate(const Assignment& point) const;

  int degree(Var v) const;
  /// Largest total degree in the listed variables (-1 for the zero polynomial).
  int degree_in(std::span<const Var> vars) const;
  /// True when every term has the same total degree in `vars`.
  bool homogeneous_in(std::span<const Var> vars) const;

  std::string to_string() const;

 private:
  void add_term(const Exponents& e, const mpq_class& c);

  Terms terms_;
};

using PolyMatrix = std::vector<std::vector<MultiPoly>>;

/// Determinant by Laplace expansion along rows, memoised on the column set.
MultiPoly determinant(const PolyMatrix& m);

/// Determinant of the columns listed (1-based); their count must equal the
/// row count and they must be distinct and in range, else BadColumnList.
MultiPoly minor(const PolyMatrix& m, std::span<const int> columns);

/// Exact determinant of a rational matrix by Gaussian elimination.
mpq_class rational_determinant(std::vector<std::vector<mpq_class>> m);

/// Entries of a polynomial matrix evaluated at a rational point.
std::vector<std::vector<mpq_class>> evaluate_matrix(const PolyMatrix& m,
                                                    const MultiPoly::Assignment& point);

}  // namespace thetalab
