#ifndef RENORM_EXTEND_HPP
#define RENORM_EXTEND_HPP

#include "renorm/scheme.hpp"

namespace renorm {

/* The extension engine. A renormalized pairing is evaluated as

     <R t, phi> = Q[(1 - chi_B) t phi] + sum_j Q[psi_j t (I_m phi)] + tail

   with psi_j = chi_{B 2^-j} - chi_{B 2^-j-1}, the Taylor remainder I_m
   applied inside the dyadic ladder, and a geometric tail extrapolation.
   Telescoping gives <R t, phi> = integral of t (phi - chi_B P_m phi): the
   scheme subtracts the jets of phi on X under the base-scale window.

   Kernels integrable across X (effective growth below zero) short-circuit
   to plain quadrature: the extension of an integrable kernel is the
   ordinary integral, and no subtraction is performed. */

/// declared growth, log margin, and codimension combined: the exponent
/// governing the dyadic decay 2^{-(m+1-s_eff)}.
inline double effective_growth(double declared, bool log_flag, int codim) {
  return declared + (log_flag ? 0.1 : 0.0) - codim;
}

/// Smallest order m with m + 1 > s_eff.
inline int required_order(double s_eff) {
  if (s_eff < 0.0) return 0;
  int m = static_cast<int>(std::floor(s_eff));
  if (static_cast<double>(m) + 1.0 <= s_eff) ++m;
  return m;
}

/// The default scheme order max(0, ceil(s - codim)).
inline int default_order(double declared, bool log_flag, int codim) {
  double s = declared + (log_flag ? 0.1 : 0.0) - codim;
  return std::max(0, static_cast<int>(std::ceil(s - 1e-12)));
}

struct PairResult {
  double value = 0.0;
  double err = 0.0;
  bool converged = true;
  // diagnostics
  double outer_value = 0.0, outer_err = 0.0;
  std::vector<double> terms, term_errs;
  double tail = 0.0;
  double observed_ratio = 0.0;
  double model_ratio = 0.0;
  bool plain_path = false;  // integrable kernel short-circuit taken
  long evals = 0;
};

/// A distribution paired against compactly supported smooth functions.
class PairingDistribution {
 public:
  virtual ~PairingDistribution() = default;
  virtual int dim() const = 0;
  virtual PairResult pair(const SmoothFnPtr& phi) const = 0;
};

using DistributionPtr = std::shared_ptr<const PairingDistribution>;

/// The underlying object the dyadic ladder integrates against: either a
/// kernel (function off X) or a nested tensor pairing. fine_scale > 0
/// flags integrands localized in a shell of that width around the set.
class Pairable {
 public:
  virtual ~Pairable() = default;
  virtual int dim() const = 0;
  virtual QuadResult pair_fn(const SmoothFunction& g, const Box& region, double fine_scale) const = 0;
};

using PairablePtr = std::shared_ptr<const Pairable>;

/// Kernel pairings by quadrature, in set-adapted coordinates when the
/// integrand is shell-localized and the set has a tubular splitting.
class KernelPairable final : public Pairable {
 public:
  KernelPairable(KernelPtr kernel, SingularSet set, QuadConfig quad)
      : kernel_(std::move(kernel)), set_(std::move(set)), quad_(quad) {}

  int dim() const override { return kernel_->dim(); }
  QuadResult pair_fn(const SmoothFunction& g, const Box& region, double fine_scale) const override;

  const KernelPtr& kernel() const { return kernel_; }

 private:
  KernelPtr kernel_;
  SingularSet set_;
  QuadConfig quad_;
};

struct ExtendConfig {
  QuadConfig quad;
  int j_min = 0;  // always compute at least this many ladder terms
  int j_max = 60;
  bool tail_extrapolation = true;
};

class RenormalizedDistribution final : public PairingDistribution {
 public:
  /// Extension of a singular kernel along the scheme's set.
  RenormalizedDistribution(KernelPtr kernel, RenormScheme scheme, ExtendConfig cfg);

  /// Extension of a generic pairable (nested use). growth/log describe the
  /// tempered factor along the scheme's set; hard refusal is skipped since
  /// the distribution order of the underlying is not known a priori.
  RenormalizedDistribution(PairablePtr underlying, double growth, bool log_flag, RenormScheme scheme,
                           ExtendConfig cfg);

  int dim() const override { return scheme_.set.ambient_dim(); }
  PairResult pair(const SmoothFnPtr& phi) const override;

  const RenormScheme& scheme() const { return scheme_; }
  const ExtendConfig& config() const { return cfg_; }
  const KernelPtr& kernel() const { return kernel_; }  // null for nested underlying
  double growth() const { return growth_; }
  bool log_flag() const { return log_flag_; }
  double effective() const {
    return effective_growth(growth_, log_flag_, scheme_.set.normal_dim());
  }

 private:
  PairablePtr underlying_;
  KernelPtr kernel_;
  double growth_ = 0.0;
  bool log_flag_ = false;
  bool strict_refusal_ = true;
  RenormScheme scheme_;
  ExtendConfig cfg_;
};

/// Plain integral pairing (smooth or absent kernel; single-vertex blocks).
class PlainIntegralDistribution final : public PairingDistribution {
 public:
  PlainIntegralDistribution(int dim, QuadConfig quad, KernelPtr kernel = nullptr)
      : dim_(dim), quad_(quad), kernel_(std::move(kernel)) {}
  int dim() const override { return dim_; }
  PairResult pair(const SmoothFnPtr& phi) const override;

 private:
  int dim_;
  QuadConfig quad_;
  KernelPtr kernel_;
};

struct GrowthFit {
  double C = 0.0;
  double s = 0.0;
  int m = 0;
  double residual = 0.0;
  bool all_probes_zero = false;
};

struct ProbeConfig {
  int k_min = 2;
  int k_max = 9;
  double tangent_halfwidth = 0.5;  // tangential extent of the probe family
  QuadConfig quad;
};

/// Empirical moderate-growth fit: pairings against probes localized at
/// normal distance 2^-k (radius 2^-k / 4) and spread tangentially, divided
/// by the probe mass; slope of log of that against -log r.
GrowthFit fit_growth(const SingularKernel& kernel, const SingularSet& set, const ProbeConfig& cfg);

/// Meyer scaling degree: slope of log |<t, lambda^{-n2} Phi^{1/lambda*}phi>|
/// against log lambda for a fixed corona-supported probe.
double scaling_degree(const SingularKernel& kernel, const SingularSet& set, const ProbeConfig& cfg);

/// Predicted moderate-growth exponent max(0, -(degree + n2)).
inline double moderate_from_scaling(double degree, int codim) {
  return std::max(0.0, -(degree + codim));
}

struct MeasureExtendResult {
  double value = 0.0;
  double err = 0.0;
  bool locally_finite = true;
  int steps = 0;
};

/// Monotone extension of a positive measure kernel: the increasing limit of
/// Q[(1 - chi_{2^-n}) k phi]. No Taylor subtraction, no scheme dependence.
MeasureExtendResult extend_positive_measure(const SingularKernel& kernel, const SingularSet& set,
                                            const SmoothFnPtr& phi, const QuadConfig& quad,
                                            double mass_bound = 1e8);

/// Renormalized product R(f t): pointwise product kernel, scheme order
/// raised to cover the combined growth.
RenormalizedDistribution renormalized_product(const KernelPtr& f, const RenormalizedDistribution& rd);

}  // namespace renorm

#endif
