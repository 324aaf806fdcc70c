#include "renorm/cutoff.hpp"

namespace renorm {

double scaling_window(const SmoothstepProfile& corona, std::span<const double> x2) {
  double r = norm(x2);
  if (r <= corona.lo() || r >= corona.hi()) return 0.0;
  return -r * corona.derivative(1, r);
}

namespace {

// offset + scale * theta(d(x,X)/lambda)
class CutoffField final : public SmoothFunction {
 public:
  CutoffField(SingularSet set, SmoothstepProfile profile, double lambda, double offset, double scale)
      : SmoothFunction(set.ambient_dim(), Box::unbounded(set.ambient_dim()), 30),
        set_(std::move(set)),
        profile_(profile),
        lambda_(lambda),
        offset_(offset),
        scale_(scale) {
    require(lambda > 0.0, "cutoff_field: lambda must be positive");
  }

  double value(std::span<const double> x) const override {
    return offset_ + scale_ * profile_.value(set_.distance(x) / lambda_);
  }

  Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const override {
    double r0 = set_.distance(x) / lambda_;
    Jet theta(shape);
    if (r0 <= profile_.lo()) {
      theta = Jet::constant(shape, 1.0);
    } else if (r0 >= profile_.hi()) {
      theta = Jet(shape);
    } else {
      Jet d = set_.distance_sq_jet(x, dirs, shape).sqrt_();
      theta = profile_.apply(d * (1.0 / lambda_));
    }
    theta *= scale_;
    theta += offset_;
    return theta;
  }

 private:
  SingularSet set_;
  SmoothstepProfile profile_;
  double lambda_, offset_, scale_;
};

// chi_lambda - chi_{lambda/2}: the dyadic annulus window at scale lambda.
class AnnulusField final : public SmoothFunction {
 public:
  AnnulusField(SingularSet set, SmoothstepProfile profile, double lambda)
      : SmoothFunction(set.ambient_dim(), Box::unbounded(set.ambient_dim()), 30),
        set_(std::move(set)),
        profile_(profile),
        lambda_(lambda) {
    require(lambda > 0.0, "annulus_field: lambda must be positive");
  }

  double value(std::span<const double> x) const override {
    double d = set_.distance(x);
    if (d >= lambda_ || d <= lambda_ * 0.5 * profile_.lo()) return 0.0;
    return profile_.value(d / lambda_) - profile_.value(2.0 * d / lambda_);
  }

  Jet jet(std::span<const double> x, std::span<const Vec> dirs, const JetShapePtr& shape) const override {
    double d0 = set_.distance(x);
    if (d0 >= lambda_ * profile_.hi() || d0 <= lambda_ * 0.5 * profile_.lo()) return Jet(shape);
    Jet d = set_.distance_sq_jet(x, dirs, shape).sqrt_();
    return profile_.apply(d * (1.0 / lambda_)) - profile_.apply(d * (2.0 / lambda_));
  }

 private:
  SingularSet set_;
  SmoothstepProfile profile_;
  double lambda_;
};

}  // namespace

SmoothFnPtr cutoff_field(SingularSet set, SmoothstepProfile profile, double lambda, double offset,
                         double scale) {
  return std::make_shared<CutoffField>(std::move(set), profile, lambda, offset, scale);
}

SmoothFnPtr annulus_field(SingularSet set, SmoothstepProfile profile, double lambda) {
  return std::make_shared<AnnulusField>(std::move(set), profile, lambda);
}

}  // namespace renorm
