#ifndef RENORM_JET_HPP
#define RENORM_JET_HPP

#include <algorithm>
#include <memory>
#include <numeric>

#include "renorm/common.hpp"

namespace renorm {

/* Truncated multivariate Taylor arithmetic.

   A Jet holds the coefficients of a polynomial in k formal variables
   t_1..t_k, truncated to per-variable degrees degs[i] and to total degree
   total_cap. Arithmetic (+, -, *, composition with analytic univariate
   series) is exact on the retained coefficients, which makes every
   derivative produced here exact up to roundoff. All high-order
   derivatives in the project (bump jets, cutoff jets, Taylor projections,
   partition-of-unity jets) go through this class instead of numeric
   differencing. */

struct JetShape {
  std::vector<int> degs;  // per-variable degree caps
  int total_cap = 0;      // total degree cap
  std::vector<int> strides;
  std::vector<int> order_of;  // total degree per flat index (or -1 if pruned)
  int size = 0;

  JetShape(std::vector<int> degs_, int total) : degs(std::move(degs_)), total_cap(total) {
    const int k = static_cast<int>(degs.size());
    strides.assign(k, 1);
    size = 1;
    for (int i = k - 1; i >= 0; --i) {
      strides[i] = size;
      size *= degs[i] + 1;
    }
    order_of.assign(size, -1);
    std::vector<int> alpha(k, 0);
    for (int f = 0; f < size; ++f) {
      int tot = std::accumulate(alpha.begin(), alpha.end(), 0);
      if (tot <= total_cap) order_of[f] = tot;
      // increment multi-index (row-major, last variable fastest)
      for (int i = k - 1; i >= 0; --i) {
        if (++alpha[i] <= degs[i]) break;
        alpha[i] = 0;
      }
    }
  }

  int nvars() const { return static_cast<int>(degs.size()); }

  int flat(std::span<const int> alpha) const {
    int f = 0;
    for (int i = 0; i < nvars(); ++i) f += alpha[i] * strides[i];
    return f;
  }

  bool operator==(const JetShape& o) const {
    return degs == o.degs && total_cap == o.total_cap;
  }
};

using JetShapePtr = std::shared_ptr<const JetShape>;

inline JetShapePtr make_shape(std::vector<int> degs, int total_cap) {
  return std::make_shared<const JetShape>(std::move(degs), total_cap);
}

/// Isotropic shape: k variables, each of degree <= m, total degree <= m.
inline JetShapePtr make_shape_total(int nvars, int m) {
  return make_shape(std::vector<int>(nvars, m), m);
}

class Jet {
 public:
  Jet() = default;
  explicit Jet(JetShapePtr shape) : shape_(std::move(shape)), c_(shape_->size, 0.0) {}

  static Jet constant(JetShapePtr shape, double v) {
    Jet j(std::move(shape));
    j.c_[0] = v;
    return j;
  }

  /// v + 1 * t_var
  static Jet variable(JetShapePtr shape, double v, int var) {
    Jet j(shape);
    j.c_[0] = v;
    if (shape->degs[var] >= 1 && shape->total_cap >= 1) j.c_[shape->strides[var]] = 1.0;
    return j;
  }

  /// v + sum_i lin[i] * t_i (affine seed; the common case for coordinates)
  static Jet affine(JetShapePtr shape, double v, std::span<const double> lin) {
    Jet j(shape);
    j.c_[0] = v;
    for (int i = 0; i < shape->nvars(); ++i)
      if (shape->degs[i] >= 1 && shape->total_cap >= 1) j.c_[shape->strides[i]] = lin[i];
    return j;
  }

  const JetShape& shape() const { return *shape_; }
  JetShapePtr shape_ptr() const { return shape_; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  double coeff_flat(int f) const { return c_[f]; }
  double& coeff_flat(int f) { return c_[f]; }
  double coeff(std::span<const int> alpha) const { return c_[shape_->flat(alpha)]; }

  /// alpha! * coefficient = partial derivative d^alpha at the base point.
  double derivative(std::span<const int> alpha) const {
    double fact = 1.0;
    for (int a : alpha)
      for (int i = 2; i <= a; ++i) fact *= i;
    return coeff(alpha) * fact;
  }

  Jet& operator+=(const Jet& o) {
    for (int f = 0; f < shape_->size; ++f) c_[f] += o.c_[f];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int f = 0; f < shape_->size; ++f) c_[f] -= o.c_[f];
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const JetShape& sh = *a.shape_;
    Jet r(a.shape_);
    const int k = sh.nvars();
    std::vector<int> alpha(k, 0);
    for (int fa = 0; fa < sh.size; ++fa) {
      const int oa = sh.order_of[fa];
      if (oa >= 0 && a.c_[fa] != 0.0) {
        const double ca = a.c_[fa];
        std::vector<int> beta(k, 0);
        for (int fb = 0; fb < sh.size; ++fb) {
          const int ob = sh.order_of[fb];
          if (ob >= 0 && oa + ob <= sh.total_cap && b.c_[fb] != 0.0) {
            bool in_box = true;
            for (int i = 0; i < k; ++i)
              if (alpha[i] + beta[i] > sh.degs[i]) {
                in_box = false;
                break;
              }
            if (in_box) {
              int fr = 0;
              for (int i = 0; i < k; ++i) fr += (alpha[i] + beta[i]) * sh.strides[i];
              r.c_[fr] += ca * b.c_[fb];
            }
          }
          for (int i = k - 1; i >= 0; --i) {
            if (++beta[i] <= sh.degs[i]) break;
            beta[i] = 0;
          }
        }
      }
      for (int i = k - 1; i >= 0; --i) {
        if (++alpha[i] <= sh.degs[i]) break;
        alpha[i] = 0;
      }
    }
    return r;
  }

  /// Substitute this jet into a univariate Taylor series around this->value():
  /// result = sum_k series[k] * (this - value)^k. series must have
  /// total_cap + 1 entries; the nilpotent part makes the sum exact.
  Jet compose_series(std::span<const double> series) const {
    Jet delta = *this;
    delta.c_[0] = 0.0;
    Jet r = Jet::constant(shape_, series[shape_->total_cap]);
    for (int k = shape_->total_cap - 1; k >= 0; --k) {
      r = r * delta;
      r.c_[0] += series[k];
    }
    return r;
  }

  /// exp(this)
  Jet exp_() const {
    const int K = shape_->total_cap;
    std::vector<double> s(K + 1);
    s[0] = std::exp(value());
    for (int k = 1; k <= K; ++k) s[k] = s[k - 1] / k;
    return compose_series(s);
  }

  /// 1 / this  (value() must be nonzero)
  Jet recip() const {
    const int K = shape_->total_cap;
    const double v = value();
    std::vector<double> s(K + 1);
    s[0] = 1.0 / v;
    for (int k = 1; k <= K; ++k) s[k] = -s[k - 1] / v;
    return compose_series(s);
  }

  /// this^a for real exponent a (value() must be positive)
  Jet powr(double a) const {
    const int K = shape_->total_cap;
    const double v = value();
    std::vector<double> s(K + 1);
    s[0] = std::pow(v, a);
    for (int k = 1; k <= K; ++k) s[k] = s[k - 1] * (a - (k - 1)) / (k * v);
    return compose_series(s);
  }

  /// log(this)  (value() must be positive)
  Jet log_() const {
    const int K = shape_->total_cap;
    const double v = value();
    std::vector<double> s(K + 1);
    s[0] = std::log(v);
    double p = 1.0;
    for (int k = 1; k <= K; ++k) {
      p /= v;
      s[k] = (k % 2 == 1 ? 1.0 : -1.0) * p / k;
    }
    return compose_series(s);
  }

  Jet sqrt_() const { return powr(0.5); }

 private:
  JetShapePtr shape_;
  std::vector<double> c_;
};

}  // namespace renorm

#endif
