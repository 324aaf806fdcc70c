#include "renorm/scheme.hpp"

#include <algorithm>

namespace renorm {

namespace {

// Fiberwise Taylor polynomial of phi along the normal frame of the scheme
// set. For a Point set the jet at the single base point is precomputed.
class TaylorProjection final : public SmoothFunction {
 public:
  TaylorProjection(RenormScheme scheme, SmoothFnPtr phi)
      : SmoothFunction(phi->dim(), Box::unbounded(phi->dim()), phi->max_order() - scheme.order),
        scheme_(std::move(scheme)),
        phi_(std::move(phi)),
        nu_(normal_frame_of(scheme_.set)),
        tau_(tangent_frame_of(scheme_.set)),
        fiber_shape_(make_shape_total(static_cast<int>(nu_.size()), scheme_.order)) {
    require(phi_->dim() == scheme_.set.ambient_dim(), "taylor_project: dimension mismatch");
    require(phi_->max_order() >= scheme_.order, "taylor_project: phi max_order below scheme order");
    if (scheme_.set.variant() == SetVariant::Point)
      point_jet_ = phi_->jet(scheme_.set.basepoint(), nu_, fiber_shape_);
  }

  double value(std::span<const double> x) const override {
    Vec base, nrm;
    scheme_.set.transverse_split(x, base, nrm);
    const int n2 = static_cast<int>(nu_.size());
    Vec h(n2);
    for (int k = 0; k < n2; ++k) h[k] = dot(nrm, nu_[k]);

    const Jet& jet_at_base = (scheme_.set.variant() == SetVariant::Point)
                                 ? point_jet_
                                 : (scratch_ = phi_->jet(base, nu_, fiber_shape_));
    // jet coefficients are d^alpha phi / alpha!, exactly the P_m weights
    double s = 0.0;
    const JetShape& sh = jet_at_base.shape();
    std::vector<int> alpha(n2, 0);
    for (int f = 0; f < sh.size; ++f) {
      if (sh.order_of[f] >= 0) {
        double mono = 1.0;
        for (int k = 0; k < n2; ++k)
          for (int p = 0; p < alpha[k]; ++p) mono *= h[k];
        s += jet_at_base.coeff_flat(f) * mono;
      }
      for (int k = n2 - 1; k >= 0; --k) {
        if (++alpha[k] <= sh.degs[k]) break;
        alpha[k] = 0;
      }
    }
    return s;
  }

  Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const override {
    Vec base, nrm;
    scheme_.set.transverse_split(x, base, nrm);
    const int n2 = static_cast<int>(nu_.size());
    const int m = scheme_.order;
    const int kdirs = static_cast<int>(dirs.size());

    // Joint jet of phi at base(x): fiber variables first, then the
    // tangent-projected requested directions.
    std::vector<int> degs;
    for (int k = 0; k < n2; ++k) degs.push_back(m);
    for (int t = 0; t < kdirs; ++t) degs.push_back(shape->degs[t]);
    auto joint_shape = make_shape(degs, m + shape->total_cap);

    std::vector<Vec> joint_dirs = nu_;
    for (int t = 0; t < kdirs; ++t) {
      Vec proj(dim(), 0.0);
      for (const auto& tv : tau_) {
        double c = dot(dirs[t], tv);
        for (int i = 0; i < dim(); ++i) proj[i] += c * tv[i];
      }
      joint_dirs.push_back(std::move(proj));
    }
    Jet big = phi_->jet(base, joint_dirs, joint_shape);

    // h_k(x) is affine with gradient nu_k.
    Vec lin(kdirs);
    std::vector<Jet> hjet;
    hjet.reserve(n2);
    for (int k = 0; k < n2; ++k) {
      for (int t = 0; t < kdirs; ++t) lin[t] = dot(dirs[t], nu_[k]);
      hjet.push_back(Jet::affine(shape, dot(nrm, nu_[k]), lin));
    }

    Jet acc(shape);
    std::vector<int> alpha(n2, 0);
    std::vector<int> joint_idx(n2 + kdirs, 0);
    while (true) {
      int tot = 0;
      for (int a : alpha) tot += a;
      if (tot <= m) {
        // coefficient function of h^alpha, as a jet in the requested dirs
        Jet coeff(shape);
        std::vector<int> beta(kdirs, 0);
        bool any = false;
        while (true) {
          int btot = 0;
          bool inbox = true;
          for (int t = 0; t < kdirs; ++t) {
            btot += beta[t];
            if (beta[t] > shape->degs[t]) inbox = false;
          }
          if (inbox && btot <= shape->total_cap - 0 && tot + btot <= m + shape->total_cap) {
            for (int k = 0; k < n2; ++k) joint_idx[k] = alpha[k];
            for (int t = 0; t < kdirs; ++t) joint_idx[n2 + t] = beta[t];
            double c = big.coeff(joint_idx);
            if (c != 0.0) {
              int flat = 0;
              for (int t = 0; t < kdirs; ++t) flat += beta[t] * shape->strides[t];
              if (shape->order_of[flat] >= 0) {
                coeff.coeff_flat(flat) += c;
                any = true;
              }
            }
          }
          int t = kdirs - 1;
          for (; t >= 0; --t) {
            if (++beta[t] <= shape->degs[t]) break;
            beta[t] = 0;
          }
          if (t < 0) break;
          if (kdirs == 0) break;
        }
        if (kdirs == 0) {
          for (int k = 0; k < n2; ++k) joint_idx[k] = alpha[k];
          double c = big.coeff(std::span<const int>(joint_idx.data(), n2));
          if (c != 0.0) {
            coeff.coeff_flat(0) = c;
            any = true;
          }
        }
        if (any) {
          Jet mono = Jet::constant(shape, 1.0);
          for (int k = 0; k < n2; ++k)
            for (int pw = 0; pw < alpha[k]; ++pw) mono = mono * hjet[k];
          acc += coeff * mono;
        }
      }
      int k = n2 - 1;
      for (; k >= 0; --k) {
        if (++alpha[k] <= m) break;
        alpha[k] = 0;
      }
      if (k < 0) break;
    }
    return acc;
  }

 private:
  RenormScheme scheme_;
  SmoothFnPtr phi_;
  std::vector<Vec> nu_, tau_;
  JetShapePtr fiber_shape_;
  Jet point_jet_;
  mutable Jet scratch_;
};

class TaylorRemainder final : public SmoothFunction {
 public:
  TaylorRemainder(SmoothFnPtr phi, SmoothFnPtr proj)
      : SmoothFunction(phi->dim(), Box::unbounded(phi->dim()), proj->max_order()),
        phi_(std::move(phi)),
        proj_(std::move(proj)) {}

  double value(std::span<const double> x) const override {
    return phi_->value(x) - proj_->value(x);
  }
  Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const override {
    return phi_->jet(x, dirs, shape) - proj_->jet(x, dirs, shape);
  }

 private:
  SmoothFnPtr phi_, proj_;
};

}  // namespace

SmoothFnPtr taylor_project(const RenormScheme& scheme, SmoothFnPtr phi) {
  return std::make_shared<TaylorProjection>(scheme, std::move(phi));
}

SmoothFnPtr taylor_remainder(const RenormScheme& scheme, SmoothFnPtr phi) {
  auto proj = taylor_project(scheme, phi);
  return std::make_shared<TaylorRemainder>(std::move(phi), std::move(proj));
}

QuadResult counterterm_pairing(const RenormScheme& scheme, const SingularKernel& kernel,
                               const SmoothFnPtr& phi, double lambda, const QuadConfig& cfg) {
  require(lambda > 0.0 && lambda <= 1.0, "counterterm_pairing: lambda must lie in (0, 1]");
  require(scheme.set.same_set(kernel.set()), "counterterm_pairing: scheme and kernel sets differ");
  require(phi->compact_support(), "counterterm_pairing: phi must be compactly supported");
  auto proj = taylor_project(scheme, phi);
  auto beta = cutoff_field(scheme.set, scheme.profile, lambda, 1.0, -1.0);  // 1 - chi_lambda

  Box region = phi->support_box();
  if (scheme.set.variant() == SetVariant::Point) {
    Vec lo = scheme.set.basepoint(), hi = scheme.set.basepoint();
    for (auto& v : lo) v -= scheme.base_scale;
    for (auto& v : hi) v += scheme.base_scale;
    region = region.hull(Box(std::move(lo), std::move(hi)));
  } else {
    region = region.expanded(scheme.base_scale);
  }

  auto f = [&](std::span<const double> x) {
    double b = beta->value(x);
    if (b == 0.0) return 0.0;
    return kernel.eval(x) * b * proj->value(x);
  };
  return integrate_near_set(f, region, scheme.set, cfg);
}

}  // namespace renorm
