#ifndef RENORM_TESTFN_HPP
#define RENORM_TESTFN_HPP

#include <memory>

#include "renorm/geometry.hpp"
#include "renorm/jet.hpp"

namespace renorm {

/* Smooth functions with exact derivative evaluation.

   Everything the engine differentiates (test functions, cutoffs, Taylor
   projections, partition weights) implements this interface. jet() returns
   the truncated Taylor expansion of t -> f(x0 + sum_k t_k dirs[k]) at
   t = 0; derivatives are read off its coefficients, so no numeric
   differencing happens anywhere in the library. Test functions are the
   compactly supported members of the hierarchy. */

class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;

  int dim() const { return dim_; }
  const Box& support_box() const { return box_; }
  bool compact_support() const { return box_.bounded(); }
  int max_order() const { return max_order_; }

  virtual double value(std::span<const double> x) const = 0;
  virtual Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const = 0;

  /// Partial derivative d^alpha f(x), |alpha| <= max_order().
  double derivative(std::span<const int> alpha, std::span<const double> x) const;

 protected:
  SmoothFunction(int dim, Box box, int max_order) : dim_(dim), box_(std::move(box)), max_order_(max_order) {}

 private:
  int dim_;
  Box box_;
  int max_order_;
};

using SmoothFnPtr = std::shared_ptr<const SmoothFunction>;

/// exp(-1/(1-|u|^2)) with u = (x - center)/radius for |u| < 1, else 0.
SmoothFnPtr standard_bump(Vec center, double radius);

/// Polynomial sum_t coef_t * x^alpha_t. Not compactly supported; probe use.
SmoothFnPtr polynomial(int dim, std::vector<std::pair<double, std::vector<int>>> terms);

/// Pointwise product of functions of the same dimension.
SmoothFnPtr product(SmoothFnPtr a, SmoothFnPtr b);

/// Linear combination sum_k coeffs[k] * fs[k].
SmoothFnPtr linear_combination(std::vector<double> coeffs, std::vector<SmoothFnPtr> fs);

inline SmoothFnPtr scaled(double c, SmoothFnPtr f) { return linear_combination({c}, {std::move(f)}); }

/// Tensor product f_1(x_1) ... f_k(x_k) over consecutive coordinate blocks.
SmoothFnPtr tensor_product(std::vector<SmoothFnPtr> factors);

/// |normal(x)|^(2 ceil((m+1)/2)) * phi(x); vanishes on X to order >= m+1.
SmoothFnPtr with_vanishing_jets(SmoothFnPtr phi, const SingularSet& set, int m);

/// Same function, redeclared over a larger support box (restriction tests).
SmoothFnPtr redeclare_box(SmoothFnPtr f, Box box);

/// Grid-approximated seminorm sup_{x in K, |alpha| <= m} |d^alpha phi(x)|.
/// A lower bound of the true sup, converging under grid refinement.
double seminorm_value(const SmoothFunction& phi, int m, const Box& K, int grid_density);

}  // namespace renorm

#endif
