#ifndef RENORM_SCHEME_HPP
#define RENORM_SCHEME_HPP

#include "renorm/cutoff.hpp"
#include "renorm/kernel.hpp"
#include "renorm/quad.hpp"

namespace renorm {

/* Renormalization schemes: the fiberwise Taylor projection P_m onto jets
   of order <= m along X and its complementary remainder I_m = Id - P_m.
   A scheme is the pair (P_m, I_m) together with the cutoff profile and the
   base scale anchoring the dyadic ladder; changing base_scale or profile
   moves along the scheme orbit without changing the extension off X. */

struct RenormScheme {
  SingularSet set;  // must support transverse_split
  int order = 0;    // m
  SmoothstepProfile profile = standard_cutoff_profile();
  double base_scale = 1.0;  // in (0, 1]

  RenormScheme(SingularSet set_, int order_, double base_scale_ = 1.0,
               SmoothstepProfile profile_ = standard_cutoff_profile())
      : set(std::move(set_)), order(order_), profile(profile_), base_scale(base_scale_) {
    require(set.splittable(), "scheme: set must support transverse_split");
    require(order >= 0, "scheme: order must be >= 0");
    require(base_scale > 0.0 && base_scale <= 1.0, "scheme: base_scale must lie in (0, 1]");
  }
};

/// P_m phi: x -> sum_{|alpha| <= m} h(x)^alpha / alpha! (d_nu^alpha phi)(base(x)).
/// Not compactly supported; always consumed multiplied by annulus weights.
SmoothFnPtr taylor_project(const RenormScheme& scheme, SmoothFnPtr phi);

/// I_m phi = phi - P_m phi; vanishes on X to order m+1.
SmoothFnPtr taylor_remainder(const RenormScheme& scheme, SmoothFnPtr phi);

/// Quadrature of the scheme's singular part t((1 - chi_lambda) P_m phi)
/// over the support box of phi enlarged to the base-scale shell. Diverges
/// as lambda -> 0 for non-integrable kernels; diagnostic use.
QuadResult counterterm_pairing(const RenormScheme& scheme, const SingularKernel& kernel,
                               const SmoothFnPtr& phi, double lambda, const QuadConfig& cfg);

}  // namespace renorm

#endif
