#include "thetalab/bidouble.hpp"

#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "thetalab/error.hpp"

namespace thetalab::bidouble {

namespace {

// Index pairs behind q_coeffs.
constexpr std::array<std::array<int, 2>, 10> kPairs{
    {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

constexpr std::array<Var, 4> kFactor0{Var::X0, Var::Y0, Var::Z0, Var::T0};
constexpr std::array<Var, 4> kFactor1{Var::X1, Var::Y1, Var::Z1, Var::T1};

std::array<MultiPoly, 4> vars(const std::array<Var, 4>& v) {
  return {MultiPoly::var(v[0]), MultiPoly::var(v[1]), MultiPoly::var(v[2]), MultiPoly::var(v[3])};
}

template <class T>
std::array<T, 6> sections(const std::array<T, 4>& p, const std::array<T, 4>& q) {
  const auto det = [](const T& a, const T& b, const T& c, const T& d) { return a * d - b * c; };
  // Coordinates X, Y, Z, T are indices 0..3.
  return {det(p[0] * p[0], q[0] * q[0], p[1] * p[1], q[1] * q[1]),
          det(p[0] * p[0], q[0] * q[0], p[2] * p[2], q[2] * q[2]),
          det(p[1] * p[1], q[1] * q[1], p[2] * p[2], q[2] * q[2]),
          det(p[0] * p[1], q[0] * q[1], p[2] * p[3], q[2] * q[3]),
          det(p[0] * p[2], q[0] * q[2], p[1] * p[3], q[1] * q[3]),
          det(p[0] * p[3], q[0] * q[3], p[1] * p[2], q[1] * q[2])};
}

void require_nonzero(const Point& p) {
  if (p.isZero(0.0)) throw Error(ErrorKind::ZeroVector, "projective point is zero");
}

void require_nonzero(const RationalPoint& p) {
  for (const auto& c : p) {
    if (c != 0) return;
  }
  throw Error(ErrorKind::ZeroVector, "projective point is zero");
}

long double to_long_double(const mpq_class& q) {
  if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) {
    return static_cast<long double>(q.get_d());
  }
  return static_cast<long double>(q.get_num().get_si()) / static_cast<long double>(q.get_den().get_si());
}

Behaviour compare(const MultiPoly& moved, const MultiPoly& original) {
  if (moved == original) return Behaviour::invariant;
  if (moved == -original) return Behaviour::anti_invariant;
  return Behaviour::neither;
}

}  // namespace

QuarticModel QuarticModel::sample() {
  QuarticModel m;
  m.q_coeffs = {mpq_class(1),     mpq_class(2),     mpq_class(3),     mpq_class(5),
                mpq_class(1, 7),  mpq_class(-1, 5), mpq_class(1, 11), mpq_class(2, 13),
                mpq_class(-1, 3), mpq_class(1, 9)};
  return m;
}

cplx QuarticModel::q(const Point& s) const {
  cplx total = 0.0;
  for (std::size_t k = 0; k < 10; ++k) total += q_coeffs[k].get_d() * s(kPairs[k][0]) * s(kPairs[k][1]);
  return total;
}

mpq_class QuarticModel::q(const RationalPoint& s) const {
  mpq_class total = 0;
  for (std::size_t k = 0; k < 10; ++k) {
    total += q_coeffs[k] * s[static_cast<std::size_t>(kPairs[k][0])] * s[static_cast<std::size_t>(kPairs[k][1])];
  }
  return total;
}

MultiPoly QuarticModel::q(const std::array<MultiPoly, 4>& s) const {
  MultiPoly total;
  for (std::size_t k = 0; k < 10; ++k) {
    total += MultiPoly(q_coeffs[k]) * s[static_cast<std::size_t>(kPairs[k][0])] *
             s[static_cast<std::size_t>(kPairs[k][1])];
  }
  return total;
}

GroupElement GroupElement::make(Label label) {
  switch (label) {
    case Label::id: return {label, {1, 1, 1, 1}};
    case Label::a: return {label, {1, 1, -1, -1}};
    case Label::b: return {label, {1, -1, 1, -1}};
    case Label::ab: return {label, {1, -1, -1, 1}};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown group label");
}

std::array<GroupElement, 4> GroupElement::all() {
  return {make(Label::id), make(Label::a), make(Label::b), make(Label::ab)};
}

std::string GroupElement::name() const {
  switch (label) {
    case Label::id: return "id";
    case Label::a: return "a";
    case Label::b: return "b";
    case Label::ab: return "ab";
  }
  return "?";
}

GroupElement GroupElement::compose(const GroupElement& other) const {
  std::array<int, 4> s{};
  for (std::size_t i = 0; i < 4; ++i) s[i] = sign_pattern[i] * other.sign_pattern[i];
  for (const auto& g : all()) {
    if (g.sign_pattern == s) return g;
  }
  throw Error(ErrorKind::InvalidArgument, "sign patterns not closed under composition");
}

Point GroupElement::apply(const Point& p) const {
  Point out = p;
  for (int i = 0; i < 4; ++i) out(i) *= static_cast<double>(sign_pattern[static_cast<std::size_t>(i)]);
  return out;
}

std::array<MultiPoly, 4> GroupElement::apply(const std::array<MultiPoly, 4>& p) const {
  std::array<MultiPoly, 4> out = p;
  for (std::size_t i = 0; i < 4; ++i) {
    if (sign_pattern[i] < 0) out[i] = -out[i];
  }
  return out;
}

Residuals curve_residuals(const QuarticModel& model, const Point& p) {
  require_nonzero(p);
  const Point s = p.cwiseProduct(p);
  return {s.sum(), model.q(s) - p(0) * p(1) * p(2) * p(3)};
}

std::array<mpq_class, 2> curve_residuals(const QuarticModel& model, const RationalPoint& p) {
  require_nonzero(p);
  const RationalPoint s = psi_cover(p);
  return {s[0] + s[1] + s[2] + s[3], model.q(s) - p[0] * p[1] * p[2] * p[3]};
}

Point psi_cover(const Point& p) {
  require_nonzero(p);
  return p.cwiseProduct(p);
}

RationalPoint psi_cover(const RationalPoint& p) {
  require_nonzero(p);
  return {p[0] * p[0], p[1] * p[1], p[2] * p[2], p[3] * p[3]};
}

std::array<cplx, 6> canonical_sections(const Point& p0, const Point& p1) {
  return sections<cplx>({p0(0), p0(1), p0(2), p0(3)}, {p1(0), p1(1), p1(2), p1(3)});
}

std::array<MultiPoly, 6> section_polynomials() {
  return sections<MultiPoly>(vars(kFactor0), vars(kFactor1));
}

std::string to_string(Behaviour b) {
  switch (b) {
    case Behaviour::invariant: return "invariant";
    case Behaviour::anti_invariant: return "anti-invariant";
    case Behaviour::neither: return "neither";
  }
  return "?";
}

CertificateReport invariance_certificates(const QuarticModel& model) {
  CertificateReport rep;
  const auto p0 = vars(kFactor0);
  const auto p1 = vars(kFactor1);
  const auto base = sections<MultiPoly>(p0, p1);

  for (const auto& g : GroupElement::all()) {
    const auto diag = sections<MultiPoly>(g.apply(p0), g.apply(p1));
    const auto single = sections<MultiPoly>(g.apply(p0), p1);
    for (std::size_t s = 0; s < 6; ++s) {
      const Behaviour d = compare(diag[s], base[s]);
      rep.audits.push_back({kSectionNames[s], "diag(" + g.name() + ")", d});
      if (d != Behaviour::invariant) {
        throw Error(ErrorKind::CertificateFailed,
                    std::string(kSectionNames[s]) + " under diag(" + g.name() + ")");
      }
      ++rep.diagonal_identities;
      rep.audits.push_back({kSectionNames[s], g.name() + " on factor 0", compare(single[s], base[s])});
    }
  }
  const auto swapped = sections<MultiPoly>(p1, p0);
  for (std::size_t s = 0; s < 6; ++s) {
    const Behaviour b = compare(swapped[s], base[s]);
    rep.audits.push_back({kSectionNames[s], "swap", b});
    if (b != Behaviour::anti_invariant) {
      throw Error(ErrorKind::CertificateFailed, std::string(kSectionNames[s]) + " under swap");
    }
    ++rep.swap_identities;
  }

  const auto square = [](const std::array<MultiPoly, 4>& p) {
    return std::array<MultiPoly, 4>{p[0] * p[0], p[1] * p[1], p[2] * p[2], p[3] * p[3]};
  };
  rep.psi_invariant = true;
  for (const auto& g : GroupElement::all()) rep.psi_invariant = rep.psi_invariant && square(g.apply(p0)) == square(p0);

  const auto s = square(p0);
  const MultiPoly xyzt = p0[0] * p0[1] * p0[2] * p0[3];
  const MultiPoly r2 = model.q(s) - xyzt;
  rep.quartic_identity = model.q(s).pow(2) - s[0] * s[1] * s[2] * s[3] == r2 * (r2 + 2 * xyzt);
  return rep;
}

Point sample_curve_point(const QuarticModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 7);
  std::normal_distribution<double> start(0.0, 1.0);
  const auto rational = [&] {
    int n = 0;
    while (n == 0) n = num(rng);
    return static_cast<double>(n) / den(rng);
  };
  const double X = rational();
  const double Y = rational();

  // Gradient of the quadratic form in the squares.
  const auto dq = [&](const Point& s, int i) {
    cplx g = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
      const double c = model.q_coeffs[k].get_d();
      if (kPairs[k][0] == i) g += c * s(kPairs[k][1]);
      if (kPairs[k][1] == i) g += c * s(kPairs[k][0]);
    }
    return g;
  };

  for (int attempt = 0; attempt < 64; ++attempt) {
    Point p(X, Y, cplx(start(rng), start(rng)) * std::abs(X), cplx(start(rng), start(rng)) * std::abs(Y));
    for (int it = 0; it < 80; ++it) {
      const Residuals r = curve_residuals(model, p);
      const Point s = p.cwiseProduct(p);
      Eigen::Matrix2cd j;
      j << 2.0 * p(2), 2.0 * p(3), 2.0 * p(2) * dq(s, 2) - p(0) * p(1) * p(3),
          2.0 * p(3) * dq(s, 3) - p(0) * p(1) * p(2);
      const Eigen::Vector2cd step = j.fullPivLu().solve(Eigen::Vector2cd(r.r1, r.r2));
      if (!step.allFinite()) break;
      p(2) -= step(0);
      p(3) -= step(1);
      if (step.norm() < 1e-14 * p.norm()) break;
    }
    const Residuals r = curve_residuals(model, p);
    const double scale = std::pow(p.norm(), 4);
    if (p.allFinite() && std::abs(r.r1) < 1e-12 * p.squaredNorm() && std::abs(r.r2) < 1e-12 * scale) {
      return p;
    }
  }
  throw Error(ErrorKind::NoRootFound, "no start converged to a point of the curve");
}

int residual_jacobian_rank(const QuarticModel& model, const Point& p, double tol) {
  const Point s = p.cwiseProduct(p);
  Eigen::Matrix<cplx, 2, 4> j;
  for (int i = 0; i < 4; ++i) {
    cplx dq = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
      const double c = model.q_coeffs[k].get_d();
      if (kPairs[k][0] == i) dq += c * s(kPairs[k][1]);
      if (kPairs[k][1] == i) dq += c * s(kPairs[k][0]);
    }
    cplx prod = 1.0;
    for (int m = 0; m < 4; ++m) {
      if (m != i) prod *= p(m);
    }
    j(0, i) = 2.0 * p(i);
    j(1, i) = 2.0 * p(i) * dq - prod;
  }
  j.row(0) /= j.row(0).norm();
  j.row(1) /= j.row(1).norm();
  const auto sv = Eigen::JacobiSVD<Eigen::Matrix<cplx, 2, 4>>(j).singularValues();
  return (sv(0) > tol ? 1 : 0) + (sv(1) > tol * sv(0) ? 1 : 0);
}

std::vector<BitangentLine> bitangency_probe(const QuarticModel& model, double tol) {
  using lc = std::complex<long double>;
  std::vector<BitangentLine> out;
  const MultiPoly u = MultiPoly::var(Var::X0);
  const MultiPoly w = MultiPoly::var(Var::Y0);
  for (int k = 0; k < 4; ++k) {
    // Coordinates on the line: the two lowest free ones are u, w; the last is -(u + w).
    std::array<MultiPoly, 4> s;
    int used = 0;
    for (int i = 0; i < 4; ++i) {
      if (i == k) continue;
      s[static_cast<std::size_t>(i)] = used == 0 ? u : used == 1 ? w : -(u + w);
      ++used;
    }
    const MultiPoly restricted = model.q(s);
    const MultiPoly f = restricted.pow(2) - s[0] * s[1] * s[2] * s[3];

    BitangentLine line;
    line.coordinate = k;
    line.exact_square = f == restricted.pow(2) && !restricted.is_zero();

    // Dehomogenise at w = 1 and collect coefficients of u^0..u^4.
    std::array<long double, 5> c{};
    for (const auto& [e, coeff] : f.terms()) {
      c[e[static_cast<std::size_t>(Var::X0)]] += to_long_double(coeff);
    }
    if (c[4] == 0.0L) throw Error(ErrorKind::InvalidArgument, "restricted quartic has a root at infinity");
    Eigen::Matrix<lc, 4, 4> comp = Eigen::Matrix<lc, 4, 4>::Zero();
    for (int i = 1; i < 4; ++i) comp(i, i - 1) = 1.0L;
    for (int i = 0; i < 4; ++i) comp(i, 3) = -c[static_cast<std::size_t>(i)] / c[4];
    Eigen::ComplexEigenSolver<Eigen::Matrix<lc, 4, 4>> es(comp);
    for (int i = 0; i < 4; ++i) line.roots[static_cast<std::size_t>(i)] = es.eigenvalues()(i);

    // Best of the three ways to split four roots into two pairs.
    const auto& r = line.roots;
    const std::array<std::array<int, 4>, 3> splits{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
    line.pairing_error = 1e300;
    for (const auto& sp : splits) {
      const auto d = [&](int i, int j) {
        return static_cast<double>(std::abs(r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)]));
      };
      const double err = std::max(d(sp[0], sp[1]), d(sp[2], sp[3]));
      if (err < line.pairing_error) {
        line.pairing_error = err;
        line.separation = static_cast<double>(
            std::abs((r[static_cast<std::size_t>(sp[0])] + r[static_cast<std::size_t>(sp[1])]) -
                     (r[static_cast<std::size_t>(sp[2])] + r[static_cast<std::size_t>(sp[3])])) /
            2.0L);
      }
    }
    line.passed = line.exact_square && line.pairing_error < tol && line.separation > tol;
    out.push_back(line);
  }
  return out;
}

}  // namespace thetalab::bidouble
