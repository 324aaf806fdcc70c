#ifndef RENORM_COMMON_HPP
#define RENORM_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace renorm {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(norm2(a)); }

/// Axis-aligned box. Unbounded boxes use +-kUnboundedExtent sentinels.
struct Box {
  Vec lo, hi;

  Box() = default;
  Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size()) throw std::invalid_argument("Box: lo/hi size mismatch");
  }

  static constexpr double kUnboundedExtent = 1e300;

  static Box unbounded(int dim) {
    return Box(Vec(dim, -kUnboundedExtent), Vec(dim, kUnboundedExtent));
  }
  static Box cube(int dim, double lo, double hi) { return Box(Vec(dim, lo), Vec(dim, hi)); }

  int dim() const { return static_cast<int>(lo.size()); }

  bool bounded() const {
    for (int i = 0; i < dim(); ++i)
      if (lo[i] <= -kUnboundedExtent || hi[i] >= kUnboundedExtent) return false;
    return true;
  }

  bool contains(std::span<const double> x) const {
    for (int i = 0; i < dim(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }

  bool empty() const {
    for (int i = 0; i < dim(); ++i)
      if (lo[i] > hi[i]) return true;
    return false;
  }

  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
    return v;
  }

  Vec center() const {
    Vec c(dim());
    for (int i = 0; i < dim(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
  }

  double half_diameter() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
      double h = 0.5 * (hi[i] - lo[i]);
      s += h * h;
    }
    return std::sqrt(s);
  }

  Box intersect(const Box& o) const {
    Box r = *this;
    for (int i = 0; i < dim(); ++i) {
      r.lo[i] = std::max(lo[i], o.lo[i]);
      r.hi[i] = std::min(hi[i], o.hi[i]);
    }
    return r;
  }

  Box hull(const Box& o) const {
    Box r = *this;
    for (int i = 0; i < dim(); ++i) {
      r.lo[i] = std::min(lo[i], o.lo[i]);
      r.hi[i] = std::max(hi[i], o.hi[i]);
    }
    return r;
  }

  Box expanded(double margin) const {
    Box r = *this;
    for (int i = 0; i < dim(); ++i) {
      r.lo[i] -= margin;
      r.hi[i] += margin;
    }
    return r;
  }
};

/// Raised when a pairing configuration cannot converge (Taylor order too low
/// for the kernel growth). CLI maps it to exit code 2.
class DivergentSchemeError : public std::runtime_error {
 public:
  explicit DivergentSchemeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when quadrature cannot reach the requested tolerance and the caller
/// asked for strict behavior. CLI maps it to exit code 3.
class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace renorm

#endif
