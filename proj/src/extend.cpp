#include "renorm/extend.hpp"

#include <algorithm>
#include <sstream>

namespace renorm {

namespace {

Box chart_tangent_range(const Box& region, const std::vector<Vec>& tau, const Vec& anchor) {
  const int n1 = static_cast<int>(tau.size());
  Vec lo(n1, 0.0), hi(n1, 0.0);
  if (n1 == 0) return Box(lo, hi);
  const int N = region.dim();
  const long corners = 1L << N;
  for (long c = 0; c < corners; ++c) {
    Vec x(N);
    for (int i = 0; i < N; ++i) x[i] = (c >> i & 1) ? region.hi[i] : region.lo[i];
    for (int k = 0; k < n1; ++k) {
      double u = 0.0;
      for (int i = 0; i < N; ++i) u += (x[i] - anchor[i]) * tau[k][i];
      if (c == 0) {
        lo[k] = hi[k] = u;
      } else {
        lo[k] = std::min(lo[k], u);
        hi[k] = std::max(hi[k], u);
      }
    }
  }
  return Box(lo, hi);
}

}  // namespace

QuadResult KernelPairable::pair_fn(const SmoothFunction& g, const Box& region, double fine_scale) const {
  if (region.empty()) return {};
  const auto& k = *kernel_;
  if (fine_scale > 0.0 && set_.splittable()) {
    // Adapted chart x = anchor + T u + fine_scale * N w; the annulus
    // geometry is j-independent in w.
    auto nu = normal_frame_of(set_);
    auto tau = tangent_frame_of(set_);
    Vec anchor = base_anchor_of(set_);
    const int n1 = static_cast<int>(tau.size()), n2 = static_cast<int>(nu.size());
    Box ubox = chart_tangent_range(region, tau, anchor);
    Vec lo = ubox.lo, hi = ubox.hi;
    for (int i = 0; i < n2; ++i) {
      lo.push_back(-1.0);
      hi.push_back(1.0);
    }
    Box cbox(std::move(lo), std::move(hi));
    const double jac = std::pow(fine_scale, n2);
    Vec x(dim());
    auto f = [&](std::span<const double> c) {
      for (int i = 0; i < dim(); ++i) x[i] = anchor[i];
      for (int t = 0; t < n1; ++t)
        for (int i = 0; i < dim(); ++i) x[i] += c[t] * tau[t][i];
      for (int w = 0; w < n2; ++w)
        for (int i = 0; i < dim(); ++i) x[i] += fine_scale * c[n1 + w] * nu[w][i];
      double gv = g.value(x);
      if (gv == 0.0) return 0.0;
      return k.eval(x) * gv * jac;
    };
    KnotFn knots = [n1](int axis, std::span<const double>, std::vector<double>& out) {
      if (axis >= n1) {
        out.push_back(-0.0625);
        out.push_back(0.0625);
        out.push_back(0.0);
      }
    };
    return integrate(f, cbox, quad_, &knots);
  }
  auto f = [&](std::span<const double> x) {
    double gv = g.value(x);
    if (gv == 0.0) return 0.0;
    return k.eval(x) * gv;
  };
  return integrate_near_set(f, region, set_, quad_);
}

RenormalizedDistribution::RenormalizedDistribution(KernelPtr kernel, RenormScheme scheme, ExtendConfig cfg)
    : underlying_(std::make_shared<KernelPairable>(kernel, scheme.set, cfg.quad)),
      kernel_(kernel),
      growth_(kernel->declared_growth()),
      log_flag_(kernel->log_flag()),
      strict_refusal_(true),
      scheme_(std::move(scheme)),
      cfg_(std::move(cfg)) {
  require(kernel_->dim() == scheme_.set.ambient_dim(), "extend: kernel/scheme dimension mismatch");
}

RenormalizedDistribution::RenormalizedDistribution(PairablePtr underlying, double growth, bool log_flag,
                                                   RenormScheme scheme, ExtendConfig cfg)
    : underlying_(std::move(underlying)),
      kernel_(nullptr),
      growth_(growth),
      log_flag_(log_flag),
      strict_refusal_(false),
      scheme_(std::move(scheme)),
      cfg_(std::move(cfg)) {
  require(underlying_->dim() == scheme_.set.ambient_dim(), "extend: underlying/scheme dimension mismatch");
}

PairResult RenormalizedDistribution::pair(const SmoothFnPtr& phi) const {
  require(phi->dim() == dim(), "pair: phi dimension mismatch");
  require(phi->compact_support(), "pair: phi must be compactly supported");
  const int m = scheme_.order;
  require(phi->max_order() >= m, "pair: phi max_order below scheme order");

  const double s_eff = effective();
  PairResult res;

  // Integrable kernels: the extension is the ordinary integral.
  if (kernel_ && s_eff < 0.0) {
    QuadResult q = underlying_->pair_fn(*phi, phi->support_box(), 0.0);
    res.value = q.value;
    res.err = q.err;
    res.converged = q.converged;
    res.evals = q.evals;
    res.plain_path = true;
    return res;
  }

  if (static_cast<double>(m) + 1.0 <= s_eff) {
    std::ostringstream os;
    os << "pair: divergent configuration, scheme order " << m << " too small for effective growth "
       << s_eff << "; required order " << required_order(s_eff);
    if (strict_refusal_) throw DivergentSchemeError(os.str());
  }

  const double B = scheme_.base_scale;
  res.model_ratio = std::pow(2.0, -(m + 1.0 - s_eff));

  // Outer region: raw phi against (1 - chi_B).
  auto beta = cutoff_field(scheme_.set, scheme_.profile, B, 1.0, -1.0);
  {
    QuadResult q = underlying_->pair_fn(*product(beta, phi), phi->support_box(), 0.0);
    res.outer_value = q.value;
    res.outer_err = q.err;
    res.converged = res.converged && q.converged;
    res.evals += q.evals;
  }

  SmoothFnPtr remainder = taylor_remainder(scheme_, phi);
  const double dmin = scheme_.set.min_distance_over_box(phi->support_box());

  double acc = res.outer_value;
  double errs = res.outer_err;
  int stagnant = 0;
  for (int j = 0; j <= cfg_.j_max; ++j) {
    const double lam = B * std::ldexp(1.0, -j);
    if (lam <= dmin) break;  // annuli no longer meet the support
    auto window = annulus_field(scheme_.set, scheme_.profile, lam);
    QuadResult q = underlying_->pair_fn(*product(window, remainder), phi->support_box(), lam);
    res.terms.push_back(q.value);
    res.term_errs.push_back(q.err);
    res.evals += q.evals;
    res.converged = res.converged && q.converged;
    acc += q.value;
    errs += q.err;
    if (j < cfg_.j_min) continue;
    const double cut = 0.05 * std::max(cfg_.quad.abs_tol * 10.0, cfg_.quad.rel_tol * std::abs(acc));
    if (std::abs(q.value) <= cut) {
      if (++stagnant >= 2) break;
    } else {
      stagnant = 0;
    }
    if (!q.converged && j > 4) break;  // do not compound a failing ladder
  }

  // Geometric tail from the last observed ratio, with the model ratio as
  // fallback; the tail magnitude is charged to the error estimate.
  double tail = 0.0;
  const std::size_t nt = res.terms.size();
  if (nt >= 1) {
    double rho = res.model_ratio;
    if (nt >= 2 && res.terms[nt - 2] != 0.0) {
      double r = res.terms[nt - 1] / res.terms[nt - 2];
      res.observed_ratio = r;
      if (std::abs(r) < 0.97 && std::abs(r) > 1e-6) rho = r;
    }
    if (std::abs(rho) < 0.97) tail = res.terms[nt - 1] * rho / (1.0 - rho);
    if (cfg_.tail_extrapolation) acc += tail;
    errs += std::abs(tail);
    res.tail = tail;
    if (nt == static_cast<std::size_t>(cfg_.j_max) + 1) res.converged = false;
  }

  res.value = acc;
  res.err = errs;
  return res;
}

PairResult PlainIntegralDistribution::pair(const SmoothFnPtr& phi) const {
  require(phi->dim() == dim_, "pair: phi dimension mismatch");
  require(phi->compact_support(), "pair: phi must be compactly supported");
  auto f = [&](std::span<const double> x) {
    double v = phi->value(x);
    if (v == 0.0 || !kernel_) return v;
    return v * kernel_->eval(x);
  };
  QuadResult q = integrate(f, phi->support_box(), quad_);
  PairResult res;
  res.value = q.value;
  res.err = q.err;
  res.converged = q.converged;
  res.evals = q.evals;
  res.plain_path = true;
  return res;
}

namespace {

// Probe for fit_growth: tangentially extended, normally localized bump in
// the adapted chart of a splittable set.
class ChartProbe final : public SmoothFunction {
 public:
  ChartProbe(const SingularSet& set, double tangent_halfwidth, double dist, double radius)
      : SmoothFunction(set.ambient_dim(), Box::unbounded(set.ambient_dim()), 12),
        nu_(normal_frame_of(set)),
        tau_(tangent_frame_of(set)),
        anchor_(base_anchor_of(set)) {
    Vec tc(tau_.size(), 0.0);
    if (!tau_.empty()) tangent_ = standard_bump(tc, tangent_halfwidth);
    Vec nc(nu_.size(), 0.0);
    nc[0] = dist;
    normal_ = standard_bump(nc, radius);
  }

  double value(std::span<const double> x) const override {
    Vec u(tau_.size()), v(nu_.size());
    for (std::size_t k = 0; k < tau_.size(); ++k) {
      u[k] = 0.0;
      for (int i = 0; i < dim(); ++i) u[k] += (x[i] - anchor_[i]) * tau_[k][i];
    }
    for (std::size_t k = 0; k < nu_.size(); ++k) {
      v[k] = 0.0;
      for (int i = 0; i < dim(); ++i) v[k] += (x[i] - anchor_[i]) * nu_[k][i];
    }
    double t = tangent_ ? tangent_->value(u) : 1.0;
    if (t == 0.0) return 0.0;
    return t * normal_->value(v);
  }

  Jet jet(std::span<const double>, std::span<const Vec>, const JetShapePtr& shape) const override {
    throw std::logic_error("ChartProbe: jets not needed");
    return Jet(shape);
  }

  /// Integration box in chart coordinates and the chart frames.
  Box chart_box(double tangent_halfwidth, double dist, double radius) const {
    Vec lo, hi;
    for (std::size_t k = 0; k < tau_.size(); ++k) {
      lo.push_back(-tangent_halfwidth);
      hi.push_back(tangent_halfwidth);
    }
    for (std::size_t k = 0; k < nu_.size(); ++k) {
      lo.push_back((k == 0 ? dist : 0.0) - radius);
      hi.push_back((k == 0 ? dist : 0.0) + radius);
    }
    return Box(std::move(lo), std::move(hi));
  }

  Vec to_ambient(std::span<const double> c) const {
    Vec x = anchor_;
    for (std::size_t k = 0; k < tau_.size(); ++k)
      for (int i = 0; i < dim(); ++i) x[i] += c[k] * tau_[k][i];
    for (std::size_t k = 0; k < nu_.size(); ++k)
      for (int i = 0; i < dim(); ++i) x[i] += c[tau_.size() + k] * nu_[k][i];
    return x;
  }

  const SmoothFnPtr& tangent_factor() const { return tangent_; }
  const SmoothFnPtr& normal_factor() const { return normal_; }
  std::size_t n1() const { return tau_.size(); }
  std::size_t n2() const { return nu_.size(); }

 private:
  std::vector<Vec> nu_, tau_;
  Vec anchor_;
  SmoothFnPtr tangent_, normal_;
};

struct LineFit {
  double slope = 0.0, intercept = 0.0, residual = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  LineFit f;
  double det = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy * sxx - sx * sxy) / det;
  for (std::size_t i = 0; i < n; ++i)
    f.residual = std::max(f.residual, std::abs(ys[i] - f.slope * xs[i] - f.intercept));
  return f;
}

}  // namespace

GrowthFit fit_growth(const SingularKernel& kernel, const SingularSet& set, const ProbeConfig& cfg) {
  std::vector<double> xs, ys;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    const double r = std::ldexp(1.0, -k);
    const double radius = r / 4.0;
    double pairing = 0.0, mass = 0.0;
    if (set.splittable()) {
      ChartProbe probe(set, cfg.tangent_halfwidth, r, radius);
      Box cbox = probe.chart_box(cfg.tangent_halfwidth, r, radius);
      auto f = [&](std::span<const double> c) {
        Vec x = probe.to_ambient(c);
        double pv = probe.value(x);
        if (pv == 0.0) return 0.0;
        return kernel.eval(x) * pv;
      };
      auto fm = [&](std::span<const double> c) { return probe.value(probe.to_ambient(c)); };
      pairing = integrate(f, cbox, cfg.quad).value;
      mass = integrate(fm, cbox, cfg.quad).value;
    } else {
      // Localized probe at a staggered configuration with pair (0,1) at
      // normal distance r from the collision locus.
      const int d = set.particle_dim(), n = set.particle_count();
      Vec center(set.ambient_dim(), 0.0);
      for (int i = 0; i < n; ++i) center[i * d] = static_cast<double>(i);
      center[1 * d] = std::sqrt(2.0) * r;  // particle 1 next to particle 0
      auto probe = standard_bump(center, radius / 2.0);
      auto f = [&](std::span<const double> x) {
        double pv = probe->value(x);
        if (pv == 0.0) return 0.0;
        return kernel.eval(x) * pv;
      };
      auto fm = [&](std::span<const double> x) { return probe->value(x); };
      pairing = integrate(f, probe->support_box(), cfg.quad).value;
      mass = integrate(fm, probe->support_box(), cfg.quad).value;
    }
    if (std::abs(pairing) > 1e-280 && mass > 0.0) {
      xs.push_back(k * std::log(2.0));  // -log r
      ys.push_back(std::log(std::abs(pairing) / mass));
    }
  }
  GrowthFit fit;
  if (xs.size() < 2) {
    fit.all_probes_zero = true;
    return fit;
  }
  LineFit lf = least_squares(xs, ys);
  fit.s = std::max(0.0, lf.slope);
  fit.C = std::exp(lf.intercept);
  fit.residual = lf.residual;
  fit.m = required_order(fit.s);
  return fit;
}

double scaling_degree(const SingularKernel& kernel, const SingularSet& set, const ProbeConfig& cfg) {
  require(set.splittable(), "scaling_degree: set must have a linear scaling structure");
  auto nu = normal_frame_of(set);
  auto tau = tangent_frame_of(set);
  Vec anchor = base_anchor_of(set);
  const int n1 = static_cast<int>(tau.size()), n2 = static_cast<int>(nu.size());

  // Corona probe in the normal variable, fixed bump in the tangent variable.
  Vec nc(n2, 0.0);
  nc[0] = 1.25;
  auto corona = standard_bump(nc, 0.5);
  SmoothFnPtr tangent;
  if (n1 > 0) tangent = standard_bump(Vec(n1, 0.0), cfg.tangent_halfwidth);

  Vec lo, hi;
  for (int k = 0; k < n1; ++k) {
    lo.push_back(-cfg.tangent_halfwidth);
    hi.push_back(cfg.tangent_halfwidth);
  }
  for (int k = 0; k < n2; ++k) {
    lo.push_back((k == 0 ? 1.25 : 0.0) - 0.5);
    hi.push_back((k == 0 ? 1.25 : 0.0) + 0.5);
  }
  Box cbox(std::move(lo), std::move(hi));

  std::vector<double> xs, ys;
  Vec x(set.ambient_dim());
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    const double lam = std::ldexp(1.0, -k);
    auto f = [&](std::span<const double> c) {
      for (int i = 0; i < set.ambient_dim(); ++i) x[i] = anchor[i];
      for (int t = 0; t < n1; ++t)
        for (int i = 0; i < set.ambient_dim(); ++i) x[i] += c[t] * tau[t][i];
      for (int w = 0; w < n2; ++w)
        for (int i = 0; i < set.ambient_dim(); ++i) x[i] += lam * c[n1 + w] * nu[w][i];
      double pv = corona->value(std::span<const double>(c.data() + n1, n2));
      if (pv == 0.0) return 0.0;
      if (tangent) {
        double tv = tangent->value(std::span<const double>(c.data(), n1));
        if (tv == 0.0) return 0.0;
        pv *= tv;
      }
      return kernel.eval(x) * pv;
    };
    double v = integrate(f, cbox, cfg.quad).value;
    if (std::abs(v) > 1e-280) {
      xs.push_back(std::log(lam));
      ys.push_back(std::log(std::abs(v)));
    }
  }
  require(xs.size() >= 2, "scaling_degree: all probes vanished");
  return least_squares(xs, ys).slope;
}

MeasureExtendResult extend_positive_measure(const SingularKernel& kernel, const SingularSet& set,
                                            const SmoothFnPtr& phi, const QuadConfig& quad,
                                            double mass_bound) {
  require(phi->compact_support(), "extend_positive_measure: phi must be compactly supported");
  auto profile = standard_cutoff_profile();
  MeasureExtendResult out;

  // Opportunistic positivity check on a coarse sample of the support.
  {
    const Box& b = phi->support_box();
    Vec x(b.dim());
    for (int s = 0; s < 64; ++s) {
      for (int i = 0; i < b.dim(); ++i) {
        double t = ((s * 2654435761u + i * 40503u) % 1000u) / 999.0;
        x[i] = b.lo[i] + (b.hi[i] - b.lo[i]) * t;
      }
      double pv = phi->value(x);
      require(pv >= -1e-12, "extend_positive_measure: phi must be nonnegative");
      if (pv > 0.0 && set.distance(x) > 1e-9)
        require(kernel.eval(x) >= -1e-12, "extend_positive_measure: kernel must be nonnegative off X");
    }
  }

  auto pair_term = [&](const SmoothFnPtr& g) {
    auto f = [&](std::span<const double> x) {
      double gv = g->value(x);
      if (gv == 0.0) return 0.0;
      return kernel.eval(x) * gv;
    };
    return integrate_near_set(f, phi->support_box(), set, quad);
  };

  auto beta = cutoff_field(set, profile, 1.0, 1.0, -1.0);
  QuadResult q0 = pair_term(product(beta, phi));
  out.value = q0.value;
  out.err = q0.err;
  int quiet = 0;
  for (int n = 0; n <= 60; ++n) {
    const double lam = std::ldexp(1.0, -n);
    auto window = annulus_field(set, profile, lam);
    QuadResult q = pair_term(product(window, phi));
    out.value += std::max(0.0, q.value);
    out.err += q.err;
    out.steps = n + 1;
    if (out.value > mass_bound) {
      out.locally_finite = false;
      return out;
    }
    if (q.value < quad.abs_tol) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
  }
  return out;
}

RenormalizedDistribution renormalized_product(const KernelPtr& f, const RenormalizedDistribution& rd) {
  require(rd.kernel() != nullptr, "renormalized_product: rd must wrap a kernel");
  require(f->dim() == rd.dim(), "renormalized_product: dimension mismatch");
  KernelPtr prod = multiply(f, rd.kernel());
  const int codim = rd.scheme().set.normal_dim();
  int m = std::max(rd.scheme().order,
                   default_order(prod->declared_growth(), prod->log_flag(), codim));
  RenormScheme scheme(rd.scheme().set, m, rd.scheme().base_scale, rd.scheme().profile);
  return RenormalizedDistribution(prod, std::move(scheme), rd.config());
}

}  // namespace renorm
