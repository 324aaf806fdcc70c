#ifndef RENORM_KERNEL_HPP
#define RENORM_KERNEL_HPP

#include "renorm/testfn.hpp"

namespace renorm {

/* Singular kernels: functions smooth off a singular set with a declared
   growth exponent s in the tempered-function estimate
   |f(x)| <= C (1 + d(x,X)^-s). Log factors are recorded as a flag and
   enter tail bounds through a fixed 0.1 margin, never through s itself. */

class SingularKernel {
 public:
  virtual ~SingularKernel() = default;

  int dim() const { return set_.ambient_dim(); }
  const SingularSet& set() const { return set_; }
  double declared_growth() const { return growth_; }
  bool log_flag() const { return log_flag_; }

  virtual double eval(std::span<const double> x) const = 0;

 protected:
  SingularKernel(SingularSet set, double growth, bool log_flag)
      : set_(std::move(set)), growth_(growth), log_flag_(log_flag) {
    require(growth >= 0.0, "kernel: declared growth must be >= 0");
  }

 private:
  SingularSet set_;
  double growth_;
  bool log_flag_;
};

using KernelPtr = std::shared_ptr<const SingularKernel>;

/// d(x,X)^-p * (log d(x,X))^q.
KernelPtr power_log_kernel(SingularSet set, double p, int q = 0);

/// Constant c, declared growth 0, singular nowhere (set kept for bookkeeping).
KernelPtr constant_kernel(SingularSet set, double c);

/// Kernel from a smooth function (growth 0).
KernelPtr function_kernel(SingularSet set, SmoothFnPtr f);

/// Pointwise product off the union set; growth exponents add.
KernelPtr multiply(const KernelPtr& f, const KernelPtr& g);

/// Feynman graph on the configuration space (R^d)^n: n_ij lines between
/// vertices i and j, each line contributing |x_i - x_j|^-p (log ...)^q.
struct FeynmanGraph {
  int d = 1;
  int n = 2;
  std::vector<std::vector<int>> multiplicity;  // symmetric, zero diagonal
  double p = 1.0;
  int q = 0;

  FeynmanGraph() = default;
  FeynmanGraph(int d_, int n_, double p_, int q_ = 0)
      : d(d_), n(n_), multiplicity(n_, std::vector<int>(n_, 0)), p(p_), q(q_) {}

  void add_edge(int i, int j, int mult = 1) {
    require(i != j && i >= 0 && j >= 0 && i < n && j < n, "graph edge: bad vertex indices");
    multiplicity[i][j] += mult;
    multiplicity[j][i] += mult;
  }

  int total_multiplicity() const {
    int s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += multiplicity[i][j];
    return s;
  }

  void validate() const;

  /// Induced subgraph on the listed vertices (labels keep list order).
  FeynmanGraph induced(const std::vector<int>& vertices) const;

  /// Lexicographically minimal flattened multiplicity matrix over vertex
  /// permutations; memoization key for isomorphic sub-amplitudes.
  std::vector<int> canonical_key() const;
};

/// The amplitude prod_{i<j} G^{n_ij}(x_i, x_j) as a kernel off the big
/// diagonal, declared growth p * sum n_ij.
KernelPtr graph_amplitude(const FeynmanGraph& graph);

/// One propagator factor G^{mult}(x_i, x_j) as a smooth function on the
/// full configuration space (jets available off the pair diagonal).
SmoothFnPtr propagator_function(int d, int n, int i, int j, double p, int q, int mult);

/// Massless flat-space Green function exponents: p = d-2, q = 0 for d >= 3;
/// p = 0, q = 1 for d = 2.
std::pair<double, int> massless_green_exponents(int d);

}  // namespace renorm

#endif
