#include "renorm/kernel.hpp"

#include <algorithm>
#include <numeric>

namespace renorm {

namespace {

class PowerLogKernel final : public SingularKernel {
 public:
  PowerLogKernel(SingularSet set, double p, int q)
      : SingularKernel(std::move(set), std::max(0.0, p), q > 0), p_(p), q_(q) {
    require(q >= 0, "power_log_kernel: log power must be >= 0");
  }

  double eval(std::span<const double> x) const override {
    double d = set().distance(x);
    double v = std::pow(d, -p_);
    if (q_ > 0) {
      double l = std::log(d);
      for (int k = 0; k < q_; ++k) v *= l;
    }
    return v;
  }

 private:
  double p_;
  int q_;
};

class ConstantKernel final : public SingularKernel {
 public:
  ConstantKernel(SingularSet set, double c) : SingularKernel(std::move(set), 0.0, false), c_(c) {}
  double eval(std::span<const double>) const override { return c_; }

 private:
  double c_;
};

class FunctionKernel final : public SingularKernel {
 public:
  FunctionKernel(SingularSet set, SmoothFnPtr f)
      : SingularKernel(std::move(set), 0.0, false), f_(std::move(f)) {
    require(f_->dim() == dim(), "function_kernel: dimension mismatch");
  }
  double eval(std::span<const double> x) const override { return f_->value(x); }

 private:
  SmoothFnPtr f_;
};

class ProductKernel final : public SingularKernel {
 public:
  ProductKernel(KernelPtr a, KernelPtr b)
      : SingularKernel(SingularSet::union_of(a->set(), b->set()),
                       a->declared_growth() + b->declared_growth(), a->log_flag() || b->log_flag()),
        a_(std::move(a)),
        b_(std::move(b)) {}

  double eval(std::span<const double> x) const override { return a_->eval(x) * b_->eval(x); }

 private:
  KernelPtr a_, b_;
};

class AmplitudeKernel final : public SingularKernel {
 public:
  explicit AmplitudeKernel(FeynmanGraph graph)
      : SingularKernel(SingularSet::big_diagonal(graph.d, graph.n),
                       graph.p * graph.total_multiplicity(),
                       graph.q > 0 && graph.total_multiplicity() > 0),
        g_(std::move(graph)) {
    g_.validate();
  }

  double eval(std::span<const double> x) const override {
    double v = 1.0;
    for (int i = 0; i < g_.n; ++i)
      for (int j = i + 1; j < g_.n; ++j) {
        int m = g_.multiplicity[i][j];
        if (m == 0) continue;
        double r2 = 0.0;
        for (int a = 0; a < g_.d; ++a) {
          double dv = x[i * g_.d + a] - x[j * g_.d + a];
          r2 += dv * dv;
        }
        double r = std::sqrt(r2);
        double f = std::pow(r, -g_.p);
        if (g_.q > 0) {
          double l = std::log(r);
          for (int k = 0; k < g_.q; ++k) f *= l;
        }
        for (int k = 0; k < m; ++k) v *= f;
      }
    return v;
  }

 private:
  FeynmanGraph g_;
};

// G^{mult}(x_i, x_j) = |x_i - x_j|^{-p mult} (log|x_i - x_j|)^{q mult}
class PropagatorFunction final : public SmoothFunction {
 public:
  PropagatorFunction(int d, int n, int i, int j, double p, int q, int mult)
      : SmoothFunction(d * n, Box::unbounded(d * n), 30),
        d_(d),
        i_(i),
        j_(j),
        p_(p * mult),
        q_(q * mult) {
    require(i != j && i >= 0 && j >= 0 && i < n && j < n, "propagator: bad vertex indices");
  }

  double value(std::span<const double> x) const override {
    double r2 = 0.0;
    for (int a = 0; a < d_; ++a) {
      double dv = x[i_ * d_ + a] - x[j_ * d_ + a];
      r2 += dv * dv;
    }
    double v = std::pow(r2, -0.5 * p_);
    if (q_ > 0) {
      double l = 0.5 * std::log(r2);
      for (int k = 0; k < q_; ++k) v *= l;
    }
    return v;
  }

  Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const override {
    const int k = static_cast<int>(dirs.size());
    Vec lin(k);
    Jet r2(shape);
    for (int a = 0; a < d_; ++a) {
      double v0 = x[i_ * d_ + a] - x[j_ * d_ + a];
      for (int t = 0; t < k; ++t) lin[t] = dirs[t][i_ * d_ + a] - dirs[t][j_ * d_ + a];
      Jet comp = Jet::affine(shape, v0, lin);
      r2 += comp * comp;
    }
    Jet v = r2.powr(-0.5 * p_);
    if (q_ > 0) {
      Jet l = r2.log_() * 0.5;
      for (int kk = 0; kk < q_; ++kk) v = v * l;
    }
    return v;
  }

 private:
  int d_, i_, j_;
  double p_;
  int q_;
};

}  // namespace

void FeynmanGraph::validate() const {
  require(d >= 1 && n >= 2, "graph: need d >= 1 and n >= 2");
  require(static_cast<int>(multiplicity.size()) == n, "graph: multiplicity matrix size mismatch");
  for (int i = 0; i < n; ++i) {
    require(static_cast<int>(multiplicity[i].size()) == n, "graph: multiplicity row size mismatch");
    require(multiplicity[i][i] == 0, "graph: diagonal multiplicities must be zero");
    for (int j = 0; j < n; ++j) {
      require(multiplicity[i][j] >= 0, "graph: multiplicities must be nonnegative");
      require(multiplicity[i][j] == multiplicity[j][i], "graph: multiplicity matrix must be symmetric");
    }
  }
  require(p >= 0.0 && q >= 0, "graph: propagator exponents must be nonnegative");
}

FeynmanGraph FeynmanGraph::induced(const std::vector<int>& vertices) const {
  FeynmanGraph sub(d, static_cast<int>(vertices.size()), p, q);
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      int m = multiplicity[vertices[a]][vertices[b]];
      if (m > 0) sub.add_edge(static_cast<int>(a), static_cast<int>(b), m);
    }
  return sub;
}

std::vector<int> FeynmanGraph::canonical_key() const {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best;
  do {
    std::vector<int> flat;
    flat.reserve(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) flat.push_back(multiplicity[perm[i]][perm[j]]);
    if (best.empty() || flat < best) best = flat;
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.push_back(d);
  best.push_back(q);
  return best;
}

KernelPtr power_log_kernel(SingularSet set, double p, int q) {
  return std::make_shared<PowerLogKernel>(std::move(set), p, q);
}

KernelPtr constant_kernel(SingularSet set, double c) {
  return std::make_shared<ConstantKernel>(std::move(set), c);
}

KernelPtr function_kernel(SingularSet set, SmoothFnPtr f) {
  return std::make_shared<FunctionKernel>(std::move(set), std::move(f));
}

KernelPtr multiply(const KernelPtr& f, const KernelPtr& g) {
  require(f->dim() == g->dim(), "multiply: ambient dimension mismatch");
  return std::make_shared<ProductKernel>(f, g);
}

KernelPtr graph_amplitude(const FeynmanGraph& graph) {
  return std::make_shared<AmplitudeKernel>(graph);
}

SmoothFnPtr propagator_function(int d, int n, int i, int j, double p, int q, int mult) {
  return std::make_shared<PropagatorFunction>(d, n, i, j, p, q, mult);
}

std::pair<double, int> massless_green_exponents(int d) {
  require(d >= 2, "massless_green_exponents: need d >= 2");
  if (d == 2) return {0.0, 1};
  return {static_cast<double>(d - 2), 0};
}

}  // namespace renorm
