#pragma once

// Canonical and Gauss maps of S, the 4x7 differential-rank matrix, Newton
// samplers for S and its canonical divisors W_j, and the degeneracy census.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "thetalab/abelian.hpp"

namespace thetalab {

struct ProjectivePoint {
  CVector coords;
  double norm_scale = 0.0;  // max modulus divided out
};

/// Normalises by the largest modulus; throws ZeroVector for the zero vector.
ProjectivePoint make_projective(const CVector& coords);

/// sqrt(1 - |<p,q>|^2 / (|p|^2 |q|^2)).
double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q);

struct RankReport {
  std::array<double, 4> singular_values{};  // descending
  int rank_estimate = 0;
  TorusPoint point;

  double ratio() const { return singular_values[0] > 0 ? singular_values[3] / singular_values[0] : 0.0; }
};

inline constexpr double kRankTol = 1e-8;
inline constexpr double kDegenerateTol = 1e-7;

/// Newton settings shared by the samplers.
struct NewtonOptions {
  int max_iterations = 60;
  double step_tol = 1e-13;
  int max_halvings = 12;
};

/// Draws (z1, z2) uniformly in the fundamental cell and solves f(z1, z2, .) = 0.
TorusPoint sample_surface_point(const SurfaceSpec& spec, std::uint64_t seed,
                                const NewtonOptions& options = {});

/// Seed for the index-th task of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// [theta011, theta101, theta110, df/dz1, df/dz2, df/dz3].
ProjectivePoint canonical_image(const SurfaceSpec& spec, const TorusPoint& p);

/// [df/dz1 : df/dz2 : df/dz3].
ProjectivePoint gauss_image(const SurfaceSpec& spec, const TorusPoint& p);

/// The 4x7 matrix [values; d/dz1; d/dz2; d/dz3] of
/// (theta000, theta011, theta101, theta110, df/dz1, df/dz2, df/dz3).
Eigen::Matrix<cplx, 4, 7> diff_matrix(const SurfaceSpec& spec, const CVector& z);
RankReport diff_rank_matrix(const SurfaceSpec& spec, const TorusPoint& p);

/// Point of S with df/dz_j = 0 (j is 1-based).
TorusPoint sample_W(const SurfaceSpec& spec, int j, std::uint64_t seed,
                    const NewtonOptions& options = {});

/// Point of S with df/dz_i = df/dz_j = 0.
TorusPoint sample_W_pair(const SurfaceSpec& spec, int i, int j, std::uint64_t seed,
                         const NewtonOptions& options = {});

/// All distinct roots of f = df/dz_i = df/dz_j = 0 found from a grid of
/// `grid` starts per real direction (grid^6 starts are too many; the grid
/// runs over the 2x2x2 real cell with `grid` points per axis plus jitter).
std::vector<TorusPoint> W_pair_roots(const SurfaceSpec& spec, int i, int j, int grid,
                                     std::uint64_t seed, const NewtonOptions& options = {});

/// Involution flipping the sign of the listed 1-based coordinates.
CVector apply_involution(const CVector& z, std::initializer_list<int> axes);

struct CensusAxis {
  int axis = 0;
  int block_zero_count = 0;            // common zeros of (f^(ij), g^(ij)) on the block torus
  std::vector<CVector> block_zeros;    // (z_i, z_j)
};

struct CensusResult {
  std::array<CensusAxis, 3> axes;
  std::vector<RankReport> reports;  // one per distinct point of A
  int total = 0;
  int sign_classes = 0;  // classes of the points modulo z -> -z
};

/// Degeneracy census for diagonal tau: common zeros of the pencil pair on each
/// block, crossed with the 2-torsion of the fibre, deduplicated on A. `grid`
/// is the coarse start grid; the count is recomputed at 2*grid and must agree.
CensusResult rank_census(const SurfaceSpec& spec, int grid = 4,
                         const NewtonOptions& options = {});

/// Common zeros of (f^(ij), g^(ij)) on the block torus for one axis.
std::vector<CVector> pencil_common_zeros(const SurfaceSpec& spec, int axis, int grid,
                                         const NewtonOptions& options = {});

struct GroupElement {
  std::array<int, 3> signs{1, 1, 1};
  std::array<int, 3> shifts{0, 0, 0};  // translation by e_i

  std::string name() const;
  CVector apply(const CVector& z) const;
  bool operator==(const GroupElement&) const = default;
};

/// Elements g among sign changes composed with e_i translations (64 total)
/// with g.P == Q modulo the lattice of A (distance < tol).
std::vector<GroupElement> orbit_classify(const SurfaceSpec& spec, const TorusPoint& p,
                                         const TorusPoint& q, double tol = 1e-8);

}  // namespace thetalab
