#include "renorm/testfn.hpp"

#include <algorithm>

namespace renorm {

double SmoothFunction::derivative(std::span<const int> alpha, std::span<const double> x) const {
  require(static_cast<int>(alpha.size()) == dim_, "derivative: multi-index size mismatch");
  int total = 0;
  for (int a : alpha) total += a;
  if (total == 0) return value(x);
  require(total <= max_order_, "derivative: order exceeds max_order");
  std::vector<Vec> dirs;
  std::vector<int> degs, reduced;
  for (int i = 0; i < dim_; ++i)
    if (alpha[i] > 0) {
      Vec e(dim_, 0.0);
      e[i] = 1.0;
      dirs.push_back(std::move(e));
      degs.push_back(alpha[i]);
      reduced.push_back(alpha[i]);
    }
  Jet j = jet(x, dirs, make_shape(degs, total));
  return j.derivative(reduced);
}

namespace {

class BumpFunction final : public SmoothFunction {
 public:
  BumpFunction(Vec center, double radius)
      : SmoothFunction(static_cast<int>(center.size()),
                       Box(sub(center, radius), add(center, radius)), 12),
        center_(std::move(center)),
        radius_(radius) {
    require(radius > 0.0, "standard_bump: radius must be positive");
  }

  double value(std::span<const double> x) const override {
    double rho = 0.0;
    for (int i = 0; i < dim(); ++i) {
      double u = (x[i] - center_[i]) / radius_;
      rho += u * u;
    }
    double w = 1.0 - rho;
    if (w < kGuard) return 0.0;
    return std::exp(-1.0 / w);
  }

  Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const override {
    const int k = static_cast<int>(dirs.size());
    Vec lin(k);
    Jet rho(shape);
    for (int i = 0; i < dim(); ++i) {
      double u0 = (x[i] - center_[i]) / radius_;
      for (int t = 0; t < k; ++t) lin[t] = dirs[t][i] / radius_;
      Jet u = Jet::affine(shape, u0, lin);
      rho += u * u;
    }
    if (1.0 - rho.value() < kGuard) return Jet(shape);  // flat zero to far below eps
    Jet w = rho * -1.0;
    w += 1.0;
    return (w.recip() * -1.0).exp_();
  }

 private:
  static constexpr double kGuard = 1e-12;

  static Vec sub(const Vec& c, double r) {
    Vec v = c;
    for (double& x : v) x -= r;
    return v;
  }
  static Vec add(const Vec& c, double r) {
    Vec v = c;
    for (double& x : v) x += r;
    return v;
  }

  Vec center_;
  double radius_;
};

class PolynomialFunction final : public SmoothFunction {
 public:
  PolynomialFunction(int dim, std::vector<std::pair<double, std::vector<int>>> terms)
      : SmoothFunction(dim, Box::unbounded(dim), 30), terms_(std::move(terms)) {
    for (const auto& [c, a] : terms_)
      require(static_cast<int>(a.size()) == dim, "polynomial: exponent size mismatch");
  }

  double value(std::span<const double> x) const override {
    double s = 0.0;
    for (const auto& [c, a] : terms_) {
      double t = c;
      for (int i = 0; i < dim(); ++i)
        for (int p = 0; p < a[i]; ++p) t *= x[i];
      s += t;
    }
    return s;
  }

  Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const override {
    const int k = static_cast<int>(dirs.size());
    Vec lin(k);
    Jet s(shape);
    for (const auto& [c, a] : terms_) {
      Jet t = Jet::constant(shape, c);
      for (int i = 0; i < dim(); ++i) {
        if (a[i] == 0) continue;
        for (int tt = 0; tt < k; ++tt) lin[tt] = dirs[tt][i];
        Jet xi = Jet::affine(shape, x[i], lin);
        for (int p = 0; p < a[i]; ++p) t = t * xi;
      }
      s += t;
    }
    return s;
  }

 private:
  std::vector<std::pair<double, std::vector<int>>> terms_;
};

class ProductFunction final : public SmoothFunction {
 public:
  ProductFunction(SmoothFnPtr a, SmoothFnPtr b)
      : SmoothFunction(a->dim(), a->support_box().intersect(b->support_box()),
                       std::min(a->max_order(), b->max_order())),
        a_(std::move(a)),
        b_(std::move(b)) {
    require(a_->dim() == b_->dim(), "product: dimension mismatch");
  }

  double value(std::span<const double> x) const override {
    double va = a_->value(x);
    if (va == 0.0) return 0.0;
    return va * b_->value(x);
  }

  Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const override {
    return a_->jet(x, dirs, shape) * b_->jet(x, dirs, shape);
  }

 private:
  SmoothFnPtr a_, b_;
};

class SumFunction final : public SmoothFunction {
 public:
  SumFunction(std::vector<double> coeffs, std::vector<SmoothFnPtr> fs)
      : SmoothFunction(fs.at(0)->dim(), hull_box(fs), max_ord(fs)),
        coeffs_(std::move(coeffs)),
        fs_(std::move(fs)) {
    require(coeffs_.size() == fs_.size(), "linear_combination: size mismatch");
    for (const auto& f : fs_) require(f->dim() == dim(), "linear_combination: dimension mismatch");
  }

  double value(std::span<const double> x) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < fs_.size(); ++i) s += coeffs_[i] * fs_[i]->value(x);
    return s;
  }

  Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const override {
    Jet s(shape);
    for (std::size_t i = 0; i < fs_.size(); ++i) s += fs_[i]->jet(x, dirs, shape) * coeffs_[i];
    return s;
  }

 private:
  static Box hull_box(const std::vector<SmoothFnPtr>& fs) {
    Box b = fs.at(0)->support_box();
    for (std::size_t i = 1; i < fs.size(); ++i) b = b.hull(fs[i]->support_box());
    return b;
  }
  static int max_ord(const std::vector<SmoothFnPtr>& fs) {
    int m = fs.at(0)->max_order();
    for (const auto& f : fs) m = std::min(m, f->max_order());
    return m;
  }

  std::vector<double> coeffs_;
  std::vector<SmoothFnPtr> fs_;
};

class TensorProductFunction final : public SmoothFunction {
 public:
  explicit TensorProductFunction(std::vector<SmoothFnPtr> factors)
      : SmoothFunction(total_dim(factors), product_box(factors), max_ord(factors)),
        factors_(std::move(factors)) {
    int off = 0;
    for (const auto& f : factors_) {
      offsets_.push_back(off);
      off += f->dim();
    }
  }

  double value(std::span<const double> x) const override {
    double p = 1.0;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      p *= factors_[k]->value(x.subspan(offsets_[k], factors_[k]->dim()));
      if (p == 0.0) return 0.0;
    }
    return p;
  }

  Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const override {
    Jet p = Jet::constant(shape, 1.0);
    std::vector<Vec> sub(dirs.size());
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      const int d = factors_[k]->dim(), off = offsets_[k];
      for (std::size_t t = 0; t < dirs.size(); ++t)
        sub[t] = Vec(dirs[t].begin() + off, dirs[t].begin() + off + d);
      p = p * factors_[k]->jet(x.subspan(off, d), sub, shape);
    }
    return p;
  }

 private:
  static int total_dim(const std::vector<SmoothFnPtr>& fs) {
    int d = 0;
    for (const auto& f : fs) d += f->dim();
    return d;
  }
  static Box product_box(const std::vector<SmoothFnPtr>& fs) {
    Vec lo, hi;
    for (const auto& f : fs) {
      lo.insert(lo.end(), f->support_box().lo.begin(), f->support_box().lo.end());
      hi.insert(hi.end(), f->support_box().hi.begin(), f->support_box().hi.end());
    }
    return Box(std::move(lo), std::move(hi));
  }
  static int max_ord(const std::vector<SmoothFnPtr>& fs) {
    int m = fs.at(0)->max_order();
    for (const auto& f : fs) m = std::min(m, f->max_order());
    return m;
  }

  std::vector<SmoothFnPtr> factors_;
  std::vector<int> offsets_;
};

class VanishingJetsFunction final : public SmoothFunction {
 public:
  VanishingJetsFunction(SmoothFnPtr phi, SingularSet set, int m)
      : SmoothFunction(phi->dim(), phi->support_box(), phi->max_order()),
        phi_(std::move(phi)),
        set_(std::move(set)),
        q_((m + 2) / 2) {
    require(set_.splittable(), "with_vanishing_jets: set must support transverse_split");
    require(set_.ambient_dim() == dim(), "with_vanishing_jets: dimension mismatch");
    require(m >= 0, "with_vanishing_jets: m must be nonnegative");
  }

  double value(std::span<const double> x) const override {
    double v = phi_->value(x);
    if (v == 0.0) return 0.0;
    double d = set_.distance(x);
    return v * std::pow(d * d, q_);
  }

  Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const override {
    Jet d2 = set_.distance_sq_jet(x, dirs, shape);
    Jet f = Jet::constant(shape, 1.0);
    for (int p = 0; p < q_; ++p) f = f * d2;
    return f * phi_->jet(x, dirs, shape);
  }

 private:
  SmoothFnPtr phi_;
  SingularSet set_;
  int q_;
};

class RedeclaredBoxFunction final : public SmoothFunction {
 public:
  RedeclaredBoxFunction(SmoothFnPtr f, Box box)
      : SmoothFunction(f->dim(), std::move(box), f->max_order()), f_(std::move(f)) {}
  double value(std::span<const double> x) const override { return f_->value(x); }
  Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const override {
    return f_->jet(x, dirs, shape);
  }

 private:
  SmoothFnPtr f_;
};

}  // namespace

SmoothFnPtr standard_bump(Vec center, double radius) {
  return std::make_shared<BumpFunction>(std::move(center), radius);
}

SmoothFnPtr polynomial(int dim, std::vector<std::pair<double, std::vector<int>>> terms) {
  return std::make_shared<PolynomialFunction>(dim, std::move(terms));
}

SmoothFnPtr product(SmoothFnPtr a, SmoothFnPtr b) {
  return std::make_shared<ProductFunction>(std::move(a), std::move(b));
}

SmoothFnPtr linear_combination(std::vector<double> coeffs, std::vector<SmoothFnPtr> fs) {
  return std::make_shared<SumFunction>(std::move(coeffs), std::move(fs));
}

SmoothFnPtr tensor_product(std::vector<SmoothFnPtr> factors) {
  return std::make_shared<TensorProductFunction>(std::move(factors));
}

SmoothFnPtr with_vanishing_jets(SmoothFnPtr phi, const SingularSet& set, int m) {
  return std::make_shared<VanishingJetsFunction>(std::move(phi), set, m);
}

SmoothFnPtr redeclare_box(SmoothFnPtr f, Box box) {
  return std::make_shared<RedeclaredBoxFunction>(std::move(f), std::move(box));
}

double seminorm_value(const SmoothFunction& phi, int m, const Box& K, int grid_density) {
  require(m <= phi.max_order(), "seminorm_value: m exceeds max_order");
  require(grid_density >= 2, "seminorm_value: grid_density must be >= 2");
  Box region = K.intersect(phi.support_box());
  if (region.empty()) return 0.0;
  const int N = phi.dim();

  std::vector<Vec> dirs;
  for (int i = 0; i < N; ++i) {
    Vec e(N, 0.0);
    e[i] = 1.0;
    dirs.push_back(std::move(e));
  }
  auto shape = make_shape_total(N, m);

  double best = 0.0;
  std::vector<int> idx(N, 0);
  Vec x(N);
  while (true) {
    for (int i = 0; i < N; ++i)
      x[i] = region.lo[i] + (region.hi[i] - region.lo[i]) * idx[i] / (grid_density - 1);
    if (m == 0) {
      best = std::max(best, std::abs(phi.value(x)));
    } else {
      Jet j = phi.jet(x, dirs, shape);
      std::vector<int> alpha(N, 0);
      for (int f = 0; f < j.shape().size; ++f) {
        if (j.shape().order_of[f] >= 0) {
          double fact = 1.0;
          for (int a : alpha)
            for (int p = 2; p <= a; ++p) fact *= p;
          best = std::max(best, std::abs(j.coeff_flat(f) * fact));
        }
        for (int i = N - 1; i >= 0; --i) {
          if (++alpha[i] <= j.shape().degs[i]) break;
          alpha[i] = 0;
        }
      }
    }
    int i = N - 1;
    for (; i >= 0; --i) {
      if (++idx[i] < grid_density) break;
      idx[i] = 0;
    }
    if (i < 0) break;
  }
  return best;
}

}  // namespace renorm
