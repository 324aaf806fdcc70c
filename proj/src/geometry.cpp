#include "renorm/geometry.hpp"

#include <algorithm>

namespace renorm {

namespace {

constexpr double kFrameTol = 1e-12;

void check_orthonormal(const std::vector<Vec>& frame, int dim) {
  for (const auto& v : frame) require(static_cast<int>(v.size()) == dim, "frame vector dimension mismatch");
  for (std::size_t a = 0; a < frame.size(); ++a)
    for (std::size_t b = a; b < frame.size(); ++b) {
      double want = (a == b) ? 1.0 : 0.0;
      if (std::abs(dot(frame[a], frame[b]) - want) > kFrameTol)
        throw std::invalid_argument("frame is not orthonormal within 1e-12");
    }
}

}  // namespace

SingularSet SingularSet::point(Vec coordinates) {
  SingularSet s;
  s.variant_ = SetVariant::Point;
  s.ambient_dim_ = static_cast<int>(coordinates.size());
  require(s.ambient_dim_ > 0, "point: empty coordinates");
  s.basepoint_ = std::move(coordinates);
  return s;
}

SingularSet SingularSet::affine_subspace(Vec basepoint, std::vector<Vec> tangent, std::vector<Vec> normal) {
  SingularSet s;
  s.variant_ = SetVariant::AffineSubspace;
  s.ambient_dim_ = static_cast<int>(basepoint.size());
  require(static_cast<int>(tangent.size() + normal.size()) == s.ambient_dim_,
          "affine_subspace: n1 + n2 must equal the ambient dimension");
  require(!normal.empty(), "affine_subspace: normal frame must be nonempty");
  check_orthonormal(tangent, s.ambient_dim_);
  check_orthonormal(normal, s.ambient_dim_);
  for (const auto& t : tangent)
    for (const auto& nv : normal)
      if (std::abs(dot(t, nv)) > kFrameTol)
        throw std::invalid_argument("affine_subspace: tangent and normal frames not orthogonal");
  s.basepoint_ = std::move(basepoint);
  s.tangent_ = std::move(tangent);
  s.normal_ = std::move(normal);
  return s;
}

SingularSet SingularSet::pairwise_diagonal(int d, int n, int i, int j) {
  require(d >= 1 && n >= 2 && i != j && i >= 0 && j >= 0 && i < n && j < n,
          "pairwise_diagonal: need d >= 1, n >= 2, distinct indices in range");
  SingularSet s;
  s.variant_ = SetVariant::PairwiseDiagonal;
  s.d_ = d;
  s.n_ = n;
  s.i_ = std::min(i, j);
  s.j_ = std::max(i, j);
  s.ambient_dim_ = d * n;
  return s;
}

SingularSet SingularSet::big_diagonal(int d, int n) {
  require(d >= 1 && n >= 2, "big_diagonal: need d >= 1, n >= 2");
  SingularSet s;
  s.variant_ = SetVariant::BigDiagonal;
  s.d_ = d;
  s.n_ = n;
  s.ambient_dim_ = d * n;
  return s;
}

SingularSet SingularSet::small_diagonal(int d, int n) {
  require(d >= 1 && n >= 2, "small_diagonal: need d >= 1, n >= 2");
  SingularSet s;
  s.variant_ = SetVariant::SmallDiagonal;
  s.d_ = d;
  s.n_ = n;
  s.ambient_dim_ = d * n;
  return s;
}

SingularSet SingularSet::union_of(const SingularSet& a, const SingularSet& b) {
  require(a.ambient_dim() == b.ambient_dim(), "union_of: ambient dimension mismatch");
  if (a.same_set(b)) return a;
  // Two diagonals of the same configuration space merge into the big
  // diagonal, whose own distance already lower-bounds each pair distance.
  auto diagonal_like = [](const SingularSet& s) {
    return s.variant() == SetVariant::PairwiseDiagonal || s.variant() == SetVariant::BigDiagonal ||
           s.variant() == SetVariant::SmallDiagonal;
  };
  if (diagonal_like(a) && diagonal_like(b) && a.d_ == b.d_ && a.n_ == b.n_)
    return big_diagonal(a.d_, a.n_);
  SingularSet s;
  s.variant_ = SetVariant::Union;
  s.ambient_dim_ = a.ambient_dim();
  auto push = [&s](const SingularSet& m) {
    if (m.variant() == SetVariant::Union)
      s.members_.insert(s.members_.end(), m.members_.begin(), m.members_.end());
    else
      s.members_.push_back(m);
  };
  push(a);
  push(b);
  return s;
}

int SingularSet::normal_dim() const {
  switch (variant_) {
    case SetVariant::Point:
      return ambient_dim_;
    case SetVariant::AffineSubspace:
      return static_cast<int>(normal_.size());
    case SetVariant::SmallDiagonal:
      return d_ * (n_ - 1);
    case SetVariant::PairwiseDiagonal:
      return d_;
    default:
      throw std::invalid_argument("normal_dim: variant has no tubular codimension");
  }
}

double SingularSet::distance(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == ambient_dim_, "distance: dimension mismatch");
  switch (variant_) {
    case SetVariant::Point: {
      double s = 0.0;
      for (int i = 0; i < ambient_dim_; ++i) {
        double dv = x[i] - basepoint_[i];
        s += dv * dv;
      }
      return std::sqrt(s);
    }
    case SetVariant::AffineSubspace: {
      double s = 0.0;
      for (const auto& nu : normal_) {
        double h = 0.0;
        for (int i = 0; i < ambient_dim_; ++i) h += (x[i] - basepoint_[i]) * nu[i];
        s += h * h;
      }
      return std::sqrt(s);
    }
    case SetVariant::PairwiseDiagonal: {
      double s = 0.0;
      for (int a = 0; a < d_; ++a) {
        double dv = x[i_ * d_ + a] - x[j_ * d_ + a];
        s += dv * dv;
      }
      return std::sqrt(s / 2.0);
    }
    case SetVariant::BigDiagonal: {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
          double s = 0.0;
          for (int a = 0; a < d_; ++a) {
            double dv = x[i * d_ + a] - x[j * d_ + a];
            s += dv * dv;
          }
          best = std::min(best, s);
        }
      return std::sqrt(best / 2.0);
    }
    case SetVariant::SmallDiagonal: {
      double s = 0.0;
      for (int a = 0; a < d_; ++a) {
        double mean = 0.0;
        for (int i = 0; i < n_; ++i) mean += x[i * d_ + a];
        mean /= n_;
        for (int i = 0; i < n_; ++i) {
          double dv = x[i * d_ + a] - mean;
          s += dv * dv;
        }
      }
      return std::sqrt(s);
    }
    case SetVariant::Union: {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& m : members_) best = std::min(best, m.distance(x));
      return best;
    }
  }
  return 0.0;
}

void SingularSet::transverse_split(std::span<const double> x, Vec& base, Vec& normal) const {
  require(static_cast<int>(x.size()) == ambient_dim_, "transverse_split: dimension mismatch");
  base.assign(ambient_dim_, 0.0);
  normal.assign(ambient_dim_, 0.0);
  switch (variant_) {
    case SetVariant::Point:
      for (int i = 0; i < ambient_dim_; ++i) {
        base[i] = basepoint_[i];
        normal[i] = x[i] - basepoint_[i];
      }
      return;
    case SetVariant::AffineSubspace: {
      base = basepoint_;
      for (const auto& tau : tangent_) {
        double u = 0.0;
        for (int i = 0; i < ambient_dim_; ++i) u += (x[i] - basepoint_[i]) * tau[i];
        for (int i = 0; i < ambient_dim_; ++i) base[i] += u * tau[i];
      }
      for (int i = 0; i < ambient_dim_; ++i) normal[i] = x[i] - base[i];
      return;
    }
    case SetVariant::SmallDiagonal: {
      for (int a = 0; a < d_; ++a) {
        double mean = 0.0;
        for (int i = 0; i < n_; ++i) mean += x[i * d_ + a];
        mean /= n_;
        for (int i = 0; i < n_; ++i) {
          base[i * d_ + a] = mean;
          normal[i * d_ + a] = x[i * d_ + a] - mean;
        }
      }
      return;
    }
    default:
      throw std::invalid_argument("transverse_split: unsupported set variant (no global tubular splitting)");
  }
}

Vec SingularSet::normal_coordinates(std::span<const double> x) const {
  Vec base, nrm;
  transverse_split(x, base, nrm);
  auto frame = normal_frame_of(*this);
  Vec h(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) h[k] = dot(nrm, frame[k]);
  return h;
}

Jet SingularSet::distance_sq_jet(std::span<const double> x0, std::span<const Vec> dirs,
                                 const JetShapePtr& shape) const {
  const int k = static_cast<int>(dirs.size());
  Vec lin(k);
  auto affine_component = [&](auto&& value_fn, auto&& dir_fn) {
    // value_fn: component value at x0; dir_fn(dir): derivative along dir
    double v = value_fn();
    for (int t = 0; t < k; ++t) lin[t] = dir_fn(dirs[t]);
    return Jet::affine(shape, v, lin);
  };
  Jet acc(shape);
  switch (variant_) {
    case SetVariant::Point: {
      for (int i = 0; i < ambient_dim_; ++i) {
        Jet comp = affine_component([&] { return x0[i] - basepoint_[i]; },
                                    [&](const Vec& d) { return d[i]; });
        acc += comp * comp;
      }
      return acc;
    }
    case SetVariant::AffineSubspace: {
      for (const auto& nu : normal_) {
        Jet comp = affine_component(
            [&] {
              double h = 0.0;
              for (int i = 0; i < ambient_dim_; ++i) h += (x0[i] - basepoint_[i]) * nu[i];
              return h;
            },
            [&](const Vec& d) { return dot(d, nu); });
        acc += comp * comp;
      }
      return acc;
    }
    case SetVariant::PairwiseDiagonal: {
      for (int a = 0; a < d_; ++a) {
        Jet comp = affine_component([&] { return (x0[i_ * d_ + a] - x0[j_ * d_ + a]); },
                                    [&](const Vec& dd) { return dd[i_ * d_ + a] - dd[j_ * d_ + a]; });
        acc += comp * comp;
      }
      acc *= 0.5;
      return acc;
    }
    case SetVariant::SmallDiagonal: {
      for (int a = 0; a < d_; ++a)
        for (int i = 0; i < n_; ++i) {
          Jet comp = affine_component(
              [&] {
                double mean = 0.0;
                for (int p = 0; p < n_; ++p) mean += x0[p * d_ + a];
                return x0[i * d_ + a] - mean / n_;
              },
              [&](const Vec& dd) {
                double mean = 0.0;
                for (int p = 0; p < n_; ++p) mean += dd[p * d_ + a];
                return dd[i * d_ + a] - mean / n_;
              });
          acc += comp * comp;
        }
      return acc;
    }
    default:
      throw std::invalid_argument("distance_sq_jet: distance is not smooth for this variant");
  }
}

bool SingularSet::same_set(const SingularSet& o) const {
  if (variant_ != o.variant_ || ambient_dim_ != o.ambient_dim_) return false;
  switch (variant_) {
    case SetVariant::Point:
      return basepoint_ == o.basepoint_;
    case SetVariant::AffineSubspace:
      return basepoint_ == o.basepoint_ && tangent_ == o.tangent_ && normal_ == o.normal_;
    case SetVariant::PairwiseDiagonal:
      return d_ == o.d_ && n_ == o.n_ && i_ == o.i_ && j_ == o.j_;
    case SetVariant::BigDiagonal:
    case SetVariant::SmallDiagonal:
      return d_ == o.d_ && n_ == o.n_;
    case SetVariant::Union: {
      if (members_.size() != o.members_.size()) return false;
      for (std::size_t i = 0; i < members_.size(); ++i)
        if (!members_[i].same_set(o.members_[i])) return false;
      return true;
    }
  }
  return false;
}

std::vector<Vec> normal_frame_of(const SingularSet& set) {
  switch (set.variant()) {
    case SetVariant::Point: {
      std::vector<Vec> frame(set.ambient_dim(), Vec(set.ambient_dim(), 0.0));
      for (int i = 0; i < set.ambient_dim(); ++i) frame[i][i] = 1.0;
      return frame;
    }
    case SetVariant::AffineSubspace:
      return set.normal_frame();
    case SetVariant::SmallDiagonal: {
      // Helmert contrasts h_k in R^n tensored with e_a in R^d.
      const int d = set.particle_dim(), n = set.particle_count();
      std::vector<Vec> frame;
      for (int kk = 1; kk < n; ++kk) {
        Vec h(n, 0.0);
        double norm = std::sqrt(static_cast<double>(kk) * (kk + 1));
        for (int i = 0; i < kk; ++i) h[i] = 1.0 / norm;
        h[kk] = -static_cast<double>(kk) / norm;
        for (int a = 0; a < d; ++a) {
          Vec v(n * d, 0.0);
          for (int i = 0; i < n; ++i) v[i * d + a] = h[i];
          frame.push_back(std::move(v));
        }
      }
      return frame;
    }
    default:
      throw std::invalid_argument("normal_frame_of: unsupported set variant");
  }
}

std::vector<Vec> tangent_frame_of(const SingularSet& set) {
  switch (set.variant()) {
    case SetVariant::Point:
      return {};
    case SetVariant::AffineSubspace:
      return set.tangent_frame();
    case SetVariant::SmallDiagonal: {
      const int d = set.particle_dim(), n = set.particle_count();
      std::vector<Vec> frame;
      for (int a = 0; a < d; ++a) {
        Vec v(n * d, 0.0);
        for (int i = 0; i < n; ++i) v[i * d + a] = 1.0 / std::sqrt(static_cast<double>(n));
        frame.push_back(std::move(v));
      }
      return frame;
    }
    default:
      throw std::invalid_argument("tangent_frame_of: unsupported set variant");
  }
}

Vec base_anchor_of(const SingularSet& set) {
  switch (set.variant()) {
    case SetVariant::Point:
    case SetVariant::AffineSubspace:
      return set.basepoint();
    case SetVariant::SmallDiagonal:
      return Vec(set.ambient_dim(), 0.0);
    default:
      throw std::invalid_argument("base_anchor_of: unsupported set variant");
  }
}

}  // namespace renorm
