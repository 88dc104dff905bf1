#include "thetalab/multipoly.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "thetalab/error.hpp"

namespace thetalab {

namespace {

constexpr std::array<std::string_view, kNumVars> kVarNames{
    "x1", "x2", "x3", "y1", "y2", "y3", "v3", "w3", "b", "c", "d", "e1", "e2", "e3", "delta3",
    "X0", "Y0", "Z0", "T0", "X1", "Y1", "Z1", "T1"};

std::size_t index(Var v) { return static_cast<std::size_t>(v); }

}  // namespace

std::string_view var_name(Var v) { return kVarNames[index(v)]; }

MultiPoly::MultiPoly(long value) {
  if (value != 0) terms_.emplace(Exponents{}, mpq_class(value));
}

MultiPoly::MultiPoly(const mpq_class& value) {
  if (value != 0) terms_.emplace(Exponents{}, value);
}

MultiPoly MultiPoly::var(Var v, unsigned power) {
  Exponents e{};
  e[index(v)] = static_cast<std::uint8_t>(power);
  return monomial(1, e);
}

MultiPoly MultiPoly::monomial(const mpq_class& coeff, const Exponents& exps) {
  MultiPoly p;
  p.add_term(exps, coeff);
  return p;
}

void MultiPoly::add_term(const Exponents& e, const mpq_class& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly out;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      MultiPoly::Exponents e;
      for (std::size_t i = 0; i < kNumVars; ++i) {
        const int s = ea[i] + eb[i];
        if (s > 255) throw Error(ErrorKind::InvalidArgument, "exponent overflow");
        e[i] = static_cast<std::uint8_t>(s);
      }
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly MultiPoly::operator-() const {
  MultiPoly out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

MultiPoly MultiPoly::pow(unsigned n) const {
  MultiPoly out(1);
  MultiPoly base = *this;
  while (n > 0) {
    if (n & 1u) out *= base;
    n >>= 1u;
    if (n > 0) base *= base;
  }
  return out;
}

MultiPoly MultiPoly::derivative(Var v) const {
  MultiPoly out;
  const std::size_t k = index(v);
  for (const auto& [e, c] : terms_) {
    if (e[k] == 0) continue;
    Exponents d = e;
    --d[k];
    out.add_term(d, c * e[k]);
  }
  return out;
}

MultiPoly MultiPoly::substitute(Var v, const MultiPoly& value) const {
  const std::size_t k = index(v);
  std::vector<MultiPoly> powers{MultiPoly(1)};
  MultiPoly out;
  for (const auto& [e, c] : terms_) {
    while (powers.size() <= e[k]) powers.push_back(powers.back() * value);
    Exponents rest = e;
    rest[k] = 0;
    out += monomial(c, rest) * powers[e[k]];
  }
  return out;
}

mpq_class MultiPoly::evaluate(const Assignment& point) const {
  mpq_class total = 0;
  for (const auto& [e, c] : terms_) {
    mpq_class term = c;
    for (std::size_t i = 0; i < kNumVars; ++i) {
      for (int p = 0; p < e[i]; ++p) term *= point[i];
    }
    total += term;
  }
  return total;
}

int MultiPoly::degree(Var v) const {
  int d = is_zero() ? -1 : 0;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[index(v)]));
  return d;
}

namespace {

int term_degree(const MultiPoly::Exponents& e, std::span<const Var> vars) {
  int s = 0;
  for (Var v : vars) s += e[index(v)];
  return s;
}

}  // namespace

int MultiPoly::degree_in(std::span<const Var> vars) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, term_degree(e, vars));
  return d;
}

bool MultiPoly::homogeneous_in(std::span<const Var> vars) const {
  if (is_zero()) return true;
  const int d = term_degree(terms_.begin()->first, vars);
  return std::all_of(terms_.begin(), terms_.end(),
                     [&](const auto& t) { return term_degree(t.first, vars) == d; });
}

std::string MultiPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  // Highest total degree first reads better than the map order.
  std::vector<std::pair<Exponents, mpq_class>> sorted(terms_.rbegin(), terms_.rend());
  for (const auto& [e, c] : sorted) {
    mpq_class coeff = c;
    if (coeff < 0) {
      out << (first ? "-" : " - ");
      coeff = -coeff;
    } else if (!first) {
      out << " + ";
    }
    first = false;
    bool constant = std::all_of(e.begin(), e.end(), [](std::uint8_t x) { return x == 0; });
    if (coeff != 1 || constant) {
      out << coeff.get_str();
      if (!constant) out << "*";
    }
    bool first_factor = true;
    for (std::size_t i = 0; i < kNumVars; ++i) {
      if (e[i] == 0) continue;
      if (!first_factor) out << "*";
      first_factor = false;
      out << kVarNames[i];
      if (e[i] > 1) out << "^" << static_cast<int>(e[i]);
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Determinants

namespace {

struct LaplaceExpander {
  const PolyMatrix& m;
  std::span<const int> cols;  // 0-based
  std::unordered_map<std::uint32_t, MultiPoly> memo;

  // Determinant of rows [row, n) against the columns not in `used`.
  MultiPoly expand(std::size_t row, std::uint32_t used) {
    const std::size_t n = cols.size();
    if (row == n) return MultiPoly(1);
    if (auto it = memo.find(used); it != memo.end()) return it->second;
    MultiPoly total;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
      if (used & (1u << k)) continue;
      const MultiPoly& entry = m[row][static_cast<std::size_t>(cols[k])];
      if (!entry.is_zero()) {
        MultiPoly sub = expand(row + 1, used | (1u << k));
        if (!sub.is_zero()) {
          if (sign > 0) {
            total += entry * sub;
          } else {
            total -= entry * sub;
          }
        }
      }
      sign = -sign;  // alternates over the remaining columns only
    }
    memo.emplace(used, total);
    return total;
  }
};

}  // namespace

MultiPoly minor(const PolyMatrix& m, std::span<const int> columns) {
  const std::size_t rows = m.size();
  if (columns.size() != rows) {
    throw Error(ErrorKind::BadColumnList, "column count must equal the row count");
  }
  const std::size_t width = rows == 0 ? 0 : m.front().size();
  std::vector<int> zero_based;
  for (int c : columns) {
    if (c < 1 || static_cast<std::size_t>(c) > width) {
      throw Error(ErrorKind::BadColumnList, "column index out of range");
    }
    if (std::find(zero_based.begin(), zero_based.end(), c - 1) != zero_based.end()) {
      throw Error(ErrorKind::BadColumnList, "repeated column index");
    }
    zero_based.push_back(c - 1);
  }
  if (rows > 31) throw Error(ErrorKind::InvalidArgument, "matrix too large for expansion");
  LaplaceExpander ex{m, zero_based, {}};
  return ex.expand(0, 0);
}

MultiPoly determinant(const PolyMatrix& m) {
  std::vector<int> cols(m.size());
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = static_cast<int>(i) + 1;
  for (const auto& row : m) {
    if (row.size() != m.size()) throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
  }
  return minor(m, cols);
}

mpq_class rational_determinant(std::vector<std::vector<mpq_class>> m) {
  const std::size_t n = m.size();
  mpq_class det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      const mpq_class factor = m[r][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[r][k] -= factor * m[col][k];
    }
  }
  return det;
}

std::vector<std::vector<mpq_class>> evaluate_matrix(const PolyMatrix& m,
                                                    const MultiPoly::Assignment& point) {
  std::vector<std::vector<mpq_class>> out(m.size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (const auto& entry : m[r]) out[r].push_back(entry.evaluate(point));
  }
  return out;
}

}  // namespace thetalab
