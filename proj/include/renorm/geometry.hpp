#ifndef RENORM_GEOMETRY_HPP
#define RENORM_GEOMETRY_HPP

#include <optional>

#include "renorm/common.hpp"
#include "renorm/jet.hpp"

namespace renorm {

/* Singular sets X in R^N with computable distance and, where a global
   tubular splitting exists (points, affine subspaces, small diagonals),
   an orthogonal base/normal decomposition x = base(x) + normal(x).

   Diagonal variants live in a configuration space (R^d)^n, flattened as
   x = (x_1, ..., x_n) with x_i in R^d. Pairwise/big diagonals carry a
   distance but no global splitting. Union is the variant produced by
   kernel products over distinct sets; its distance is the min over
   members. */

enum class SetVariant { Point, AffineSubspace, PairwiseDiagonal, BigDiagonal, SmallDiagonal, Union };

class SingularSet {
 public:
  static SingularSet point(Vec coordinates);
  /// tangent/normal: orthonormal frames (rows are frame vectors of length N).
  static SingularSet affine_subspace(Vec basepoint, std::vector<Vec> tangent, std::vector<Vec> normal);
  static SingularSet pairwise_diagonal(int d, int n, int i, int j);  // i, j 0-based
  static SingularSet big_diagonal(int d, int n);
  static SingularSet small_diagonal(int d, int n);
  static SingularSet union_of(const SingularSet& a, const SingularSet& b);

  SetVariant variant() const { return variant_; }
  int ambient_dim() const { return ambient_dim_; }
  int particle_dim() const { return d_; }
  int particle_count() const { return n_; }
  int pair_i() const { return i_; }
  int pair_j() const { return j_; }
  const Vec& basepoint() const { return basepoint_; }
  const std::vector<Vec>& tangent_frame() const { return tangent_; }
  const std::vector<Vec>& normal_frame() const { return normal_; }
  const std::vector<SingularSet>& members() const { return members_; }

  bool splittable() const {
    return variant_ == SetVariant::Point || variant_ == SetVariant::AffineSubspace ||
           variant_ == SetVariant::SmallDiagonal;
  }

  int normal_dim() const;   // codimension (splittable variants and pairwise)
  int tangent_dim() const { return ambient_dim_ - normal_dim(); }

  double distance(std::span<const double> x) const;

  /// x = base + normal, |normal| = distance(x). Splittable variants only.
  void transverse_split(std::span<const double> x, Vec& base, Vec& normal) const;

  /// Coordinates of x - base(x) in the normal frame.
  Vec normal_coordinates(std::span<const double> x) const;

  /// Jet of distance(x)^2 along the given directions. Smooth-distance
  /// variants only (everything except Big/Union).
  Jet distance_sq_jet(std::span<const double> x0, std::span<const Vec> dirs, const JetShapePtr& shape) const;

  /// Lower bound for min_{x in box} distance(x) (distance is 1-Lipschitz).
  double min_distance_over_box(const Box& box) const {
    return std::max(0.0, distance(box.center()) - box.half_diameter());
  }

  bool same_set(const SingularSet& o) const;

 private:
  SingularSet() = default;

  SetVariant variant_ = SetVariant::Point;
  int ambient_dim_ = 0;
  int d_ = 0, n_ = 0, i_ = 0, j_ = 0;  // diagonal parameters
  Vec basepoint_;
  std::vector<Vec> tangent_, normal_;  // affine frames; also cached for SmallDiagonal
  std::vector<SingularSet> members_;   // union variant
};

/// Orthonormal basis of the normal space, as frame vectors in R^N.
/// Point: ambient basis. Affine: the declared normal frame.
/// SmallDiagonal: Helmert contrasts tensored with the R^d basis.
std::vector<Vec> normal_frame_of(const SingularSet& set);
std::vector<Vec> tangent_frame_of(const SingularSet& set);
/// A point on X to anchor tangent/normal coordinates (origin for diagonals).
Vec base_anchor_of(const SingularSet& set);

}  // namespace renorm

#endif
