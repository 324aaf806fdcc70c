#ifndef RENORM_QUAD_HPP
#define RENORM_QUAD_HPP

#include <functional>

#include "renorm/geometry.hpp"

namespace renorm {

/* Numerical pairing substrate. Boxes of dimension <= 3 go through iterated
   adaptive Gauss-Kronrod 7-15; higher dimensions use randomized Halton
   quasi-Monte Carlo with a fixed sample budget. All results are
   deterministic given the config (the QMC randomization is seeded).

   Integrands may be singular on a set X as long as either the caller's
   weights vanish near X or the singularity is integrable; per-axis split
   knots place such loci at panel boundaries, where Gauss nodes never
   sample. */

struct QuadConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-13;
  int max_subdivisions = 4000;  // per 1-D pass
  long qmc_budget = 1L << 16;
  int qmc_shifts = 8;
  unsigned seed = 0;
  int max_tensor_dim = 3;

  QuadConfig with_tol(double rel, double abs) const {
    QuadConfig c = *this;
    c.rel_tol = rel;
    c.abs_tol = abs;
    return c;
  }
};

struct QuadResult {
  double value = 0.0;
  double err = 0.0;
  bool converged = true;
  long evals = 0;

  QuadResult& operator+=(const QuadResult& o) {
    value += o.value;
    err += o.err;
    converged = converged && o.converged;
    evals += o.evals;
    return *this;
  }
};

using Integrand = std::function<double(std::span<const double>)>;

/// Axis split knots, possibly depending on the already-fixed outer
/// coordinates (axes are integrated outermost-first in index order).
using KnotFn = std::function<void(int axis, std::span<const double> outer_prefix, std::vector<double>& out)>;

/// Integral of f over box. strict=false returns best effort with
/// converged=false on budget exhaustion instead of throwing.
QuadResult integrate(const Integrand& f, const Box& box, const QuadConfig& cfg,
                     const KnotFn* knots = nullptr);

/// Same, with split knots derived from the singular set (axis-aligned
/// shadows of X), so integrable singularities sit on panel boundaries.
QuadResult integrate_near_set(const Integrand& f, const Box& box, const SingularSet& set,
                              const QuadConfig& cfg);

/// 1-D convenience.
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadConfig& cfg, const std::vector<double>& knots = {});

}  // namespace renorm

#endif
