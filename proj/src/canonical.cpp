#include "thetalab/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace thetalab {

namespace {

// Residual and Jacobian of a holomorphic system in the unknowns x.
using System = std::function<void(const CVector& x, CVector& residual, CMatrix& jacobian,
                                  double& scale)>;

struct NewtonResult {
  CVector x;
  double residual = 0.0;  // |F| / scale
  bool converged = false;
};

// Damped Newton: the full step is halved until the scaled residual decreases.
NewtonResult damped_newton(const System& system, CVector x, const NewtonOptions& options) {
  CVector r;
  CMatrix jac;
  double scale = 1.0;
  system(x, r, jac, scale);
  double res = r.norm() / scale;
  for (int it = 0; it < options.max_iterations; ++it) {
    const auto lu = jac.fullPivLu();
    if (lu.rank() < jac.cols()) break;
    const CVector step = lu.solve(-r);
    if (!step.allFinite()) break;
    double t = 1.0;
    CVector trial;
    CVector r_trial;
    CMatrix jac_trial;
    double scale_trial = 1.0;
    double res_trial = 0.0;
    bool decreased = false;
    for (int h = 0; h <= options.max_halvings; ++h) {
      trial = x + t * step;
      system(trial, r_trial, jac_trial, scale_trial);
      res_trial = r_trial.norm() / scale_trial;
      if (res_trial < res || res_trial < 1e-15) {
        decreased = true;
        break;
      }
      t *= 0.5;
    }
    if (!decreased) break;
    x = trial;
    r = r_trial;
    jac = jac_trial;
    scale = scale_trial;
    res = res_trial;
    if ((t * step).norm() < options.step_tol) {
      return NewtonResult{x, res, true};
    }
  }
  return NewtonResult{x, res, false};
}

CVector random_cell_point(const PeriodMatrix& tau, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int g = tau.genus();
  RVector u(g), v(g);
  for (int i = 0; i < g; ++i) {
    u(i) = unit(rng);
    v(i) = unit(rng);
  }
  return tau.entries() * v.cast<cplx>() + 2.0 * u.cast<cplx>();
}

void check_axis(int j) {
  if (j < 1 || j > 3) throw Error(ErrorKind::InvalidArgument, "axis must be 1, 2 or 3");
}

}  // namespace

// ---------------------------------------------------------------------------
// Projective points

ProjectivePoint make_projective(const CVector& coords) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < coords.size(); ++i) m = std::max(m, std::abs(coords(i)));
  if (!(m > 0.0)) throw Error(ErrorKind::ZeroVector, "all projective coordinates vanish");
  return ProjectivePoint{coords / m, m};
}

double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.coords.size() != q.coords.size()) {
    throw Error(ErrorKind::DimensionMismatch, "projective points live in different spaces");
  }
  // |p ^ q| / (|p| |q|), which equals sqrt(1 - |<p,q>|^2 / (|p|^2 |q|^2))
  // without the cancellation near zero.
  double wedge = 0.0;
  const Eigen::Index n = p.coords.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      wedge += std::norm(p.coords(i) * q.coords(j) - p.coords(j) * q.coords(i));
    }
  }
  return std::min(1.0, std::sqrt(wedge) / (p.coords.norm() * q.coords.norm()));
}

// ---------------------------------------------------------------------------
// Sampling S

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

TorusPoint sample_surface_point(const SurfaceSpec& spec, std::uint64_t seed,
                                const NewtonOptions& options) {
  std::mt19937_64 rng(seed);
  const CVector cell = random_cell_point(spec.tau, rng);
  const cplx t33 = spec.tau(2, 2);
  const System system = [&](const CVector& x, CVector& r, CMatrix& jac, double& scale) {
    const CVector z{{cell(0), cell(1), x(0)}};
    const ThetaJet f = surface_f(spec, z);
    r = CVector::Constant(1, f.value);
    jac = CMatrix::Constant(1, 1, f.gradient(2));
    scale = membership_scale(spec, z);
  };
  for (int s = 0; s < 8; ++s) {
    const double re = 0.25 + 0.5 * (s % 4);
    const double im = s < 4 ? 0.25 : 0.75;
    const CVector start = CVector::Constant(1, cplx{re, 0.0} + im * t33);
    const NewtonResult res = damped_newton(system, start, options);
    const CVector z{{cell(0), cell(1), res.x(0)}};
    const double scale = membership_scale(spec, z);
    const ThetaJet f = surface_f(spec, z);
    if (std::abs(f.value) < kMembershipTol * scale && std::abs(f.gradient(2)) >= 1e-8 * scale) {
      return TorusPoint{z, std::abs(f.value)};
    }
  }
  throw Error(ErrorKind::NoRootFound, "no start converged to a smooth point of S");
}

// ---------------------------------------------------------------------------
// Maps

ProjectivePoint canonical_image(const SurfaceSpec& spec, const TorusPoint& p) {
  const auto jets = basis_jets(spec, p.z);
  CVector coords(6);
  coords << jets[1].value, jets[2].value, jets[3].value, CVector::Zero(3);
  for (size_t i = 0; i < 4; ++i) {
    const cplx coeff = i == 0 ? cplx{1.0, 0.0} : spec.coeffs[i - 1];
    coords.tail(3) += coeff * jets[i].gradient;
  }
  const double scale = membership_scale(spec, p.z);
  if (coords.cwiseAbs().maxCoeff() < 1e-13 * scale) {
    throw Error(ErrorKind::AllCoordinatesVanish, "canonical coordinates vanish (base point with df = 0)");
  }
  return make_projective(coords);
}

ProjectivePoint gauss_image(const SurfaceSpec& spec, const TorusPoint& p) {
  const ThetaJet f = surface_f(spec, p.z);
  const double scale = membership_scale(spec, p.z);
  if (f.gradient.cwiseAbs().maxCoeff() < 1e-13 * scale) {
    throw Error(ErrorKind::GradientVanishes, "gradient of f vanishes");
  }
  return make_projective(f.gradient);
}

Eigen::Matrix<cplx, 4, 7> diff_matrix(const SurfaceSpec& spec, const CVector& z) {
  const auto jets = basis_jets(spec, z);
  Eigen::Matrix<cplx, 4, 7> m = Eigen::Matrix<cplx, 4, 7>::Zero();
  CMatrix hess = CMatrix::Zero(3, 3);
  CVector grad = CVector::Zero(3);
  for (size_t i = 0; i < 4; ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    m(0, col) = jets[i].value;
    m.block(1, col, 3, 1) = jets[i].gradient;
    const cplx coeff = i == 0 ? cplx{1.0, 0.0} : spec.coeffs[i - 1];
    grad += coeff * jets[i].gradient;
    hess += coeff * jets[i].hessian;
  }
  m.block(0, 4, 1, 3) = grad.transpose();
  m.block(1, 4, 3, 3) = hess;
  return m;
}

RankReport diff_rank_matrix(const SurfaceSpec& spec, const TorusPoint& p) {
  const Eigen::Matrix<cplx, 4, 7> m = diff_matrix(spec, p.z);
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 4, 7>> svd(m);
  RankReport report;
  report.point = p;
  const auto& sv = svd.singularValues();
  for (int i = 0; i < 4; ++i) report.singular_values[static_cast<size_t>(i)] = sv(i);
  report.rank_estimate = 0;
  for (int i = 0; i < 4; ++i) {
    if (sv(i) > kRankTol * sv(0)) ++report.rank_estimate;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Canonical divisors

TorusPoint sample_W(const SurfaceSpec& spec, int j, std::uint64_t seed, const NewtonOptions& options) {
  check_axis(j);
  std::mt19937_64 rng(seed);
  // Freeze the lowest axis different from j; solve in the other two.
  const int frozen = j == 1 ? 2 : 1;
  const int other = 6 - j - frozen;
  const CVector cell = random_cell_point(spec.tau, rng);
  const int oi = other - 1, ji = j - 1;
  const System system = [&](const CVector& x, CVector& r, CMatrix& jac, double& scale) {
    CVector z = cell;
    z(oi) = x(0);
    z(ji) = x(1);
    const ThetaJet f = surface_f(spec, z);
    r = CVector{{f.value, f.gradient(ji)}};
    jac.resize(2, 2);
    jac << f.gradient(oi), f.gradient(ji), f.hessian(ji, oi), f.hessian(ji, ji);
    scale = membership_scale(spec, z);
  };
  for (int attempt = 0; attempt < 24; ++attempt) {
    const CVector guess = random_cell_point(spec.tau, rng);
    const NewtonResult res = damped_newton(system, CVector{{guess(oi), guess(ji)}}, options);
    CVector z = cell;
    z(oi) = res.x(0);
    z(ji) = res.x(1);
    const ThetaJet f = surface_f(spec, z);
    const double scale = membership_scale(spec, z);
    if (std::abs(f.value) < kMembershipTol * scale &&
        std::abs(f.gradient(ji)) < kMembershipTol * scale) {
      return TorusPoint{z, std::abs(f.value)};
    }
  }
  throw Error(ErrorKind::NoRootFound, "no start converged to a point of W_j");
}

namespace {

NewtonResult solve_W_pair(const SurfaceSpec& spec, int i, int j, const CVector& start,
                          const NewtonOptions& options) {
  const int ii = i - 1, ji = j - 1;
  const System system = [&](const CVector& z, CVector& r, CMatrix& jac, double& scale) {
    const ThetaJet f = surface_f(spec, z);
    r = CVector{{f.value, f.gradient(ii), f.gradient(ji)}};
    jac.resize(3, 3);
    jac.row(0) = f.gradient.transpose();
    jac.row(1) = f.hessian.row(ii);
    jac.row(2) = f.hessian.row(ji);
    scale = membership_scale(spec, z);
  };
  return damped_newton(system, start, options);
}

bool is_W_pair_root(const SurfaceSpec& spec, int i, int j, const CVector& z, double& residual) {
  const ThetaJet f = surface_f(spec, z);
  const double scale = membership_scale(spec, z);
  residual = std::abs(f.value);
  return std::abs(f.value) < kMembershipTol * scale &&
         std::abs(f.gradient(i - 1)) < kMembershipTol * scale &&
         std::abs(f.gradient(j - 1)) < kMembershipTol * scale;
}

void check_pair(int i, int j) {
  check_axis(i);
  check_axis(j);
  if (i == j) throw Error(ErrorKind::InvalidArgument, "W_i and W_j need distinct axes");
}

}  // namespace

TorusPoint sample_W_pair(const SurfaceSpec& spec, int i, int j, std::uint64_t seed,
                         const NewtonOptions& options) {
  check_pair(i, j);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  for (int cell = 0; cell < 8; ++cell) {
    RVector v(3);
    RVector u(3);
    for (int k = 0; k < 3; ++k) {
      v(k) = 0.25 + 0.5 * ((cell >> k) & 1) + jitter(rng);
      u(k) = 0.25 + 0.5 * ((cell >> k) & 1) + jitter(rng);
    }
    const CVector start = spec.tau.entries() * v.cast<cplx>() + 2.0 * u.cast<cplx>();
    const NewtonResult res = solve_W_pair(spec, i, j, start, options);
    double residual = 0.0;
    if (res.x.allFinite() && is_W_pair_root(spec, i, j, res.x, residual)) {
      return TorusPoint{res.x, residual};
    }
  }
  throw Error(ErrorKind::NoRootFound, "no start converged to a point of W_i and W_j");
}

std::vector<TorusPoint> W_pair_roots(const SurfaceSpec& spec, int i, int j, int grid,
                                     std::uint64_t seed, const NewtonOptions& options) {
  check_pair(i, j);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  std::vector<TorusPoint> roots;
  const int total = grid * grid * grid;
  for (int code = 0; code < total; ++code) {
    RVector v(3);
    RVector u(3);
    int c = code;
    for (int k = 0; k < 3; ++k) {
      const double cellpos = (c % grid + 0.5) / grid;
      c /= grid;
      v(k) = cellpos + jitter(rng);
      u(k) = std::fmod(cellpos * 1.618 + 0.25, 1.0) + jitter(rng);
    }
    const CVector start = spec.tau.entries() * v.cast<cplx>() + 2.0 * u.cast<cplx>();
    const NewtonResult res = solve_W_pair(spec, i, j, start, options);
    double residual = 0.0;
    if (!res.x.allFinite() || !is_W_pair_root(spec, i, j, res.x, residual)) continue;
    const CVector z = reduce_to_cell(res.x, spec.tau);
    const bool seen = std::any_of(roots.begin(), roots.end(), [&](const TorusPoint& r) {
      return abelian_distance(r.z, z, spec.tau) < 1e-6;
    });
    if (!seen) roots.push_back(TorusPoint{z, residual});
  }
  return roots;
}

CVector apply_involution(const CVector& z, std::initializer_list<int> axes) {
  CVector out = z;
  for (int a : axes) {
    check_axis(a);
    out(a - 1) = -out(a - 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Census

std::vector<CVector> pencil_common_zeros(const SurfaceSpec& spec, int axis, int grid,
                                         const NewtonOptions& options) {
  const PencilSections pencil(spec, axis);
  const PeriodMatrix& btau = pencil.block_tau();
  const System system = [&](const CVector& x, CVector& r, CMatrix& jac, double& scale) {
    const ThetaJet f = pencil.f(x);
    const ThetaJet g = pencil.g(x);
    r = CVector{{f.value, g.value}};
    jac.resize(2, 2);
    jac.row(0) = f.gradient.transpose();
    jac.row(1) = g.gradient.transpose();
    scale = gaussian_scale(x, btau);
  };
  std::vector<CVector> zeros;
  const int total = grid * grid * grid * grid;
  for (int code = 0; code < total; ++code) {
    int c = code;
    RVector u(2), v(2);
    for (int k = 0; k < 2; ++k) {
      u(k) = (c % grid + 0.37) / grid;
      c /= grid;
      v(k) = (c % grid + 0.41) / grid;
      c /= grid;
    }
    const CVector start = btau.entries() * v.cast<cplx>() + 2.0 * u.cast<cplx>();
    const NewtonResult res = damped_newton(system, start, options);
    if (!res.x.allFinite()) continue;
    const double scale = gaussian_scale(res.x, btau);
    if (std::abs(pencil.f(res.x).value) > kMembershipTol * scale ||
        std::abs(pencil.g(res.x).value) > kMembershipTol * scale) {
      continue;
    }
    const CVector z = reduce_to_cell(res.x, btau);
    const bool seen = std::any_of(zeros.begin(), zeros.end(), [&](const CVector& w) {
      return torus_distance(w, z, btau) < 1e-6;
    });
    if (!seen) zeros.push_back(z);
  }
  std::sort(zeros.begin(), zeros.end(), [](const CVector& a, const CVector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
      if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
    }
    return false;
  });
  return zeros;
}

CensusResult rank_census(const SurfaceSpec& spec, int grid, const NewtonOptions& options) {
  if (!spec.tau.is_diagonal()) throw Error(ErrorKind::NotDiagonal, "census needs diagonal tau");
  CensusResult result;
  std::vector<CVector> points;
  for (int axis = 1; axis <= 3; ++axis) {
    CensusAxis& entry = result.axes[static_cast<size_t>(axis - 1)];
    entry.axis = axis;
    entry.block_zeros = pencil_common_zeros(spec, axis, grid, options);
    entry.block_zero_count = static_cast<int>(entry.block_zeros.size());
    const auto refined = pencil_common_zeros(spec, axis, 2 * grid, options);
    if (refined.size() != entry.block_zeros.size()) {
      throw Error(ErrorKind::CensusUnstable,
                  "pencil zero count changed under grid refinement on axis " + std::to_string(axis) +
                      ": " + std::to_string(entry.block_zeros.size()) + " vs " +
                      std::to_string(refined.size()));
    }
    const PencilSections pencil(spec, axis);
    const cplx tkk = spec.tau(axis - 1, axis - 1);
    const std::array<cplx, 4> torsion{cplx{0.0, 0.0}, cplx{1.0, 0.0}, tkk / 2.0, 1.0 + tkk / 2.0};
    for (const CVector& zij : entry.block_zeros) {
      for (cplx zk : torsion) {
        const CVector z = pencil.assemble(zij, zk);
        const bool seen = std::any_of(points.begin(), points.end(), [&](const CVector& w) {
          return abelian_distance(w, z, spec.tau) < 1e-6;
        });
        if (!seen) points.push_back(z);
      }
    }
  }
  for (const CVector& z : points) {
    result.reports.push_back(diff_rank_matrix(spec, TorusPoint{z, std::abs(surface_f(spec, z).value)}));
  }
  result.total = static_cast<int>(points.size());
  std::vector<bool> used(points.size(), false);
  for (size_t i = 0; i < points.size(); ++i) {
    if (used[i]) continue;
    ++result.sign_classes;
    used[i] = true;
    for (size_t j = i + 1; j < points.size(); ++j) {
      if (!used[j] && abelian_distance(-points[i], points[j], spec.tau) < 1e-6) used[j] = true;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Orbits

std::string GroupElement::name() const {
  std::string out;
  for (int k = 0; k < 3; ++k) {
    if (signs[static_cast<size_t>(k)] < 0) out += "i" + std::to_string(k + 1);
  }
  for (int k = 0; k < 3; ++k) {
    if (shifts[static_cast<size_t>(k)] != 0) out += (out.empty() ? "" : "+") + std::string("e") + std::to_string(k + 1);
  }
  return out.empty() ? "id" : out;
}

CVector GroupElement::apply(const CVector& z) const {
  CVector out(3);
  for (int k = 0; k < 3; ++k) {
    out(k) = static_cast<double>(signs[static_cast<size_t>(k)]) * z(k) +
             static_cast<double>(shifts[static_cast<size_t>(k)]);
  }
  return out;
}

std::vector<GroupElement> orbit_classify(const SurfaceSpec& spec, const TorusPoint& p,
                                         const TorusPoint& q, double tol) {
  std::vector<GroupElement> out;
  for (int code = 0; code < 64; ++code) {
    GroupElement g;
    for (int k = 0; k < 3; ++k) {
      g.signs[static_cast<size_t>(k)] = ((code >> k) & 1) ? -1 : 1;
      g.shifts[static_cast<size_t>(k)] = (code >> (k + 3)) & 1;
    }
    if (abelian_distance(g.apply(p.z), q.z, spec.tau) < tol) out.push_back(g);
  }
  return out;
}

}  // namespace thetalab
