#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ifem/fem.hpp"
#include "ifem/mesh.hpp"

namespace ifem {

inline constexpr double kRankTol = 1e-9;

/// Least-squares quadratic on a patch scaled to unit radius:
/// p = c0 + c1 x~ + c2 y~ + c3 x~^2 + c4 x~ y~ + c5 y~^2, x~ = (x - cx)/h.
struct QuadraticFit {
  std::array<double, 6> coefficients{};
  double scale = 1.0;
  Point2 center;
  double min_singular_value = 0.0;

  Point2 gradient_at_center() const { return {coefficients[1] / scale, coefficients[2] / scale}; }
  double value(Point2 z) const;
};

/// Orthogonal (SVD) least squares. Throws RankDeficient when the smallest
/// singular value of the scaled design matrix is below rank_tol.
QuadraticFit fit_quadratic(std::span<const std::pair<Point2, double>> samples, Point2 center,
                           double rank_tol = kRankTol);

struct RecoveryOptions {
  int min_layers = 1;   // first patch size tried
  int max_layers = 12;  // PatchExhausted beyond this
  double rank_tol = kRankTol;
};

/// Sampling nodes K_z for vertex z, optionally confined to one region.
/// Interior vertices use the smallest unisolvent L(z, n). Vertices on the
/// boundary of the (restricted) submesh take L(z, n0) together with the
/// patches of the interior vertices it contains.
struct SamplingPatch {
  std::vector<int> nodes;      // sorted
  std::vector<int> triangles;  // sorted
};
SamplingPatch sampling_patch(const Mesh& mesh, int z, std::optional<RegionTag> restrict_to = std::nullopt,
                             const RecoveryOptions& opts = {});

/// Precomputed linear recovery: grad(z) = sum_k w_k u(node_k).
struct StencilSet {
  std::vector<int> offsets;  // per vertex; empty range when the vertex is absent
  std::vector<int> nodes;
  std::vector<double> wx;
  std::vector<double> wy;

  bool has(int v) const { return offsets[v + 1] > offsets[v]; }
  Point2 apply(int v, std::span<const double> u) const;
};

enum class RecoveryCase : unsigned char { Absent = 0, Far = 1, Near = 2, Interface = 3 };

/// PPR stencils for the whole mesh and IPPR stencils for each side.
struct RecoveryOperator {
  StencilSet single;
  std::array<StencilSet, 2> side;            // indexed by RegionTag
  std::array<std::vector<RecoveryCase>, 2> side_case;
};

RecoveryOperator build_recovery(const Mesh& mesh, const RecoveryOptions& opts = {});

struct GradientField {
  std::vector<Point2> values;
};

struct TwoValuedGradientField {
  std::array<std::vector<Point2>, 2> values;  // indexed by RegionTag
  std::array<std::vector<char>, 2> present;

  const std::vector<Point2>& side(RegionTag r) const { return values[static_cast<int>(r)]; }
  std::size_t count_in_both() const;
};

/// Gradient at vertex z from the patch fit (no stencil caching).
Point2 ppr_node(const Mesh& mesh, std::span<const double> u, int z,
                std::optional<RegionTag> restrict_to = std::nullopt, const RecoveryOptions& opts = {});

GradientField ppr_recover(const Mesh& mesh, std::span<const double> u, const RecoveryOptions& opts = {});
GradientField ppr_recover(const RecoveryOperator& op, std::span<const double> u);

/// Immersed recovery. u_minus feeds the minus side and u_plus the plus side;
/// pass the same field twice for a continuous solution.
TwoValuedGradientField ippr_recover(const Mesh& mesh, std::span<const double> u_minus,
                                    std::span<const double> u_plus, const RecoveryOptions& opts = {});
TwoValuedGradientField ippr_recover(const RecoveryOperator& op, std::span<const double> u_minus,
                                    std::span<const double> u_plus);

/// Piecewise-linear evaluation on triangle t from barycentric coordinates.
Point2 interpolate(const Mesh& mesh, const std::vector<Point2>& field, int t, const std::array<double, 3>& bary);

void write_gradient(std::ostream& os, const GradientField& g);
void write_gradient(std::ostream& os, const TwoValuedGradientField& g);

}  // namespace ifem
