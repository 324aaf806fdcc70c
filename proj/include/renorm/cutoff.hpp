#ifndef RENORM_CUTOFF_HPP
#define RENORM_CUTOFF_HPP

#include "renorm/testfn.hpp"

namespace renorm {

/* The cutoff family chi_lambda(x) = theta(d(x, X)/lambda) and the dyadic
   annulus weights psi_j = chi_{lambda} - chi_{lambda/2} built from it.

   theta is a smoothstep with theta = 1 on [0, lo] and theta = 0 on
   [hi, inf), assembled from g(t) = exp(-1/t). The paper constructs
   chi_lambda by mollifying an indicator; composing a fixed profile with
   d(x,X)/lambda gives the same plateau and derivative-bound contracts in
   closed form for the set variants supported here. */

class SmoothstepProfile {
 public:
  SmoothstepProfile(double lo, double hi) : lo_(lo), hi_(hi) {
    require(0.0 <= lo && lo < hi, "SmoothstepProfile: need 0 <= lo < hi");
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  double value(double r) const {
    double tau = (r - lo_) / (hi_ - lo_);
    if (tau <= kGuard) return 1.0;
    if (tau >= 1.0 - kGuard) return 0.0;
    double g1 = std::exp(-1.0 / (1.0 - tau));
    double g2 = std::exp(-1.0 / tau);
    return g1 / (g1 + g2);
  }

  /// theta applied to a jet of r (exact plateau handling).
  Jet apply(const Jet& r) const {
    double tau0 = (r.value() - lo_) / (hi_ - lo_);
    if (tau0 <= kGuard) return Jet::constant(r.shape_ptr(), 1.0);
    if (tau0 >= 1.0 - kGuard) return Jet(r.shape_ptr());
    Jet tau = r * (1.0 / (hi_ - lo_));
    tau += -lo_ / (hi_ - lo_);
    Jet one_minus = tau * -1.0;
    one_minus += 1.0;
    Jet g1 = (one_minus.recip() * -1.0).exp_();
    Jet g2 = (tau.recip() * -1.0).exp_();
    return g1 * (g1 + g2).recip();
  }

  /// k-th derivative of theta at r (exact, via a univariate jet).
  double derivative(int k, double r) const {
    if (k == 0) return value(r);
    auto shape = make_shape({k}, k);
    Jet rj = Jet::variable(shape, r, 0);
    std::vector<int> alpha{k};
    return apply(rj).derivative(alpha);
  }

  /// max over a scan grid of |theta^(k)|; the constants C_k of the family.
  double derivative_bound(int k, int scan_points = 4001) const {
    double best = 0.0;
    for (int i = 0; i < scan_points; ++i) {
      double r = lo_ + (hi_ - lo_) * i / (scan_points - 1.0);
      best = std::max(best, std::abs(derivative(k, r)));
    }
    return best;
  }

 private:
  static constexpr double kGuard = 1e-9;
  double lo_, hi_;
};

/// The profile used by chi_lambda: plateau below 1/8, zero above 1.
inline SmoothstepProfile standard_cutoff_profile() { return SmoothstepProfile(0.125, 1.0); }
/// The corona profile of the scaling argument: 1 below 1/2, 0 above 2.
inline SmoothstepProfile corona_profile() { return SmoothstepProfile(0.5, 2.0); }

struct CutoffFamily {
  SingularSet set;
  SmoothstepProfile profile = standard_cutoff_profile();

  /// chi_lambda(x); equals 1 when d(x,X) <= lambda/8 and 0 when d >= lambda.
  double chi(double lambda, std::span<const double> x) const {
    require(lambda > 0.0, "chi: lambda must be positive");
    return profile.value(set.distance(x) / lambda);
  }

  /// psi_j = chi_{2^-j} - chi_{2^-j-1}; supported in 2^-j-4 <= d <= 2^-j.
  double annulus_weight(int j, std::span<const double> x) const {
    require(j >= 0, "annulus_weight: j must be nonnegative");
    double d = set.distance(x);
    double lam = std::ldexp(1.0, -j);
    return profile.value(d / lam) - profile.value(2.0 * d / lam);
  }
};

/// psi(x2) = -|x2| * d(chi)/dr at r = |x2| for the corona profile chi;
/// supported in the corona 1/2 <= |x2| <= 2 and integrates to 1 against
/// dlambda/lambda along scaling orbits.
double scaling_window(const SmoothstepProfile& corona, std::span<const double> x2);

/// chi_lambda as a smooth function (offset + scale * theta(d/lambda)):
/// scale=1, offset=0 gives chi; scale=-1, offset=1 gives 1 - chi.
SmoothFnPtr cutoff_field(SingularSet set, SmoothstepProfile profile, double lambda, double offset,
                         double scale);

/// chi_lambda - chi_{lambda/2} as a smooth function (one dyadic annulus).
SmoothFnPtr annulus_field(SingularSet set, SmoothstepProfile profile, double lambda);

}  // namespace renorm

#endif
