#include "renorm/quad.hpp"

#include <algorithm>
#include <queue>

namespace renorm {

namespace {

// Gauss-Kronrod 7-15 on [-1, 1].
constexpr double kXgk[15] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr double kWk[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

constexpr double kWg[7] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
                           0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
                           0.129484966168869693270611432679082};

struct Segment {
  double a, b, value, err;
  bool operator<(const Segment& o) const { return err < o.err; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b, long& evals) {
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double vk = 0.0, vg = 0.0;
  for (int i = 0; i < 15; ++i) {
    double fx = f(c + h * kXgk[i]);
    vk += kWk[i] * fx;
    if (i % 2 == 1) vg += kWg[i / 2] * fx;
  }
  evals += 15;
  double value = vk * h;
  double diff = std::abs((vk - vg) * h);
  // quadpack-style sharpening of the raw K-G difference
  double err = diff;
  if (diff > 0.0) err = std::min(diff, 200.0 * diff * std::sqrt(diff));
  return {a, b, value, err};
}

QuadResult adapt_1d(const std::function<double(double)>& f, double a, double b,
                    const QuadConfig& cfg, const std::vector<double>& knots) {
  QuadResult res;
  if (!(b > a)) return res;
  std::priority_queue<Segment> queue;
  std::vector<double> cuts{a};
  for (double k : knots)
    if (k > a && k < b) cuts.push_back(k);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0, toterr = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    Segment s = gk15(f, cuts[i], cuts[i + 1], res.evals);
    total += s.value;
    toterr += s.err;
    queue.push(s);
  }
  int splits = 0;
  while (toterr > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)) &&
         splits < cfg.max_subdivisions && !queue.empty()) {
    Segment worst = queue.top();
    queue.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) continue;  // interval at roundoff floor
    Segment left = gk15(f, worst.a, mid, res.evals);
    Segment right = gk15(f, mid, worst.b, res.evals);
    total += left.value + right.value - worst.value;
    toterr += left.err + right.err - worst.err;
    queue.push(left);
    queue.push(right);
    ++splits;
  }
  res.value = total;
  res.err = toterr;
  res.converged = toterr <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)) ||
                  toterr <= 1e-14 * std::abs(total) + 1e-300;
  return res;
}

// Iterated adaptive integration over axes [axis, N).
QuadResult iterated(const Integrand& f, const Box& box, const QuadConfig& cfg, const KnotFn* knots,
                    int axis, Vec& point) {
  const int N = box.dim();
  std::vector<double> axis_knots;
  if (knots) (*knots)(axis, std::span<const double>(point.data(), axis), axis_knots);
  if (axis == N - 1) {
    auto f1 = [&](double x) {
      point[axis] = x;
      return f(point);
    };
    return adapt_1d(f1, box.lo[axis], box.hi[axis], cfg, axis_knots);
  }
  // Inner passes run at a tighter tolerance; their worst error estimate is
  // propagated through the outer weights.
  QuadConfig inner_cfg = cfg;
  inner_cfg.rel_tol = cfg.rel_tol * 0.2;
  inner_cfg.abs_tol = cfg.abs_tol * 0.2 / std::max(1.0, box.hi[axis] - box.lo[axis]);
  double inner_err_max = 0.0;
  bool inner_converged = true;
  long evals = 0;
  auto f1 = [&](double x) {
    point[axis] = x;
    QuadResult inner = iterated(f, box, inner_cfg, knots, axis + 1, point);
    inner_err_max = std::max(inner_err_max, inner.err);
    inner_converged = inner_converged && inner.converged;
    evals += inner.evals;
    return inner.value;
  };
  QuadResult outer = adapt_1d(f1, box.lo[axis], box.hi[axis], cfg, axis_knots);
  outer.err += inner_err_max * std::max(0.0, box.hi[axis] - box.lo[axis]);
  outer.converged = outer.converged && inner_converged;
  outer.evals = evals;
  return outer;
}

constexpr int kPrimes[9] = {2, 3, 5, 7, 11, 13, 17, 19, 23};

double radical_inverse(long n, int base) {
  double inv = 1.0 / base, r = 0.0, f = inv;
  while (n > 0) {
    r += f * (n % base);
    n /= base;
    f *= inv;
  }
  return r;
}

uint64_t splitmix64(uint64_t& s) {
  uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

QuadResult qmc(const Integrand& f, const Box& box, const QuadConfig& cfg) {
  const int N = box.dim();
  require(N <= 9, "quad: dimensions beyond 9 are out of scope");
  const int shifts = std::max(2, cfg.qmc_shifts);
  const long per_shift = std::max(16L, cfg.qmc_budget / shifts);
  uint64_t state = 0x243f6a8885a308d3ULL ^ (0x9e3779b9ULL * (cfg.seed + 1));
  Vec x(N);
  std::vector<double> means(shifts, 0.0);
  QuadResult res;
  const double vol = box.volume();
  for (int s = 0; s < shifts; ++s) {
    Vec rot(N);
    for (int i = 0; i < N; ++i) rot[i] = (splitmix64(state) >> 11) * 0x1.0p-53;
    double acc = 0.0;
    for (long k = 0; k < per_shift; ++k) {
      for (int i = 0; i < N; ++i) {
        double u = radical_inverse(k + 1, kPrimes[i]) + rot[i];
        u -= std::floor(u);
        x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * u;
      }
      acc += f(x);
      ++res.evals;
    }
    means[s] = acc / per_shift * vol;
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= shifts;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (shifts - 1);
  res.value = mean;
  res.err = std::sqrt(var / shifts);
  res.converged = res.err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(mean));
  return res;
}

}  // namespace

QuadResult integrate(const Integrand& f, const Box& box, const QuadConfig& cfg, const KnotFn* knots) {
  require(box.bounded(), "integrate: box must be bounded");
  if (box.empty()) return {};
  const int N = box.dim();
  if (N <= cfg.max_tensor_dim) {
    Vec point(N, 0.0);
    return iterated(f, box, cfg, knots, 0, point);
  }
  return qmc(f, box, cfg);
}

namespace {

void set_knots(const SingularSet& set, int axis, std::span<const double> prefix,
               std::vector<double>& out) {
  switch (set.variant()) {
    case SetVariant::Point:
      out.push_back(set.basepoint()[axis]);
      break;
    case SetVariant::AffineSubspace:
      // Knots only for axis-aligned normal directions.
      for (const auto& nu : set.normal_frame())
        if (std::abs(std::abs(nu[axis]) - 1.0) < 1e-14) out.push_back(set.basepoint()[axis]);
      break;
    case SetVariant::PairwiseDiagonal:
    case SetVariant::BigDiagonal:
    case SetVariant::SmallDiagonal:
      // d = 1: the collision loci shadow onto earlier particle coordinates.
      if (set.particle_dim() == 1)
        for (double v : prefix) out.push_back(v);
      break;
    case SetVariant::Union:
      for (const auto& m : set.members()) set_knots(m, axis, prefix, out);
      break;
  }
}

}  // namespace

QuadResult integrate_near_set(const Integrand& f, const Box& box, const SingularSet& set,
                              const QuadConfig& cfg) {
  KnotFn knots = [&set](int axis, std::span<const double> prefix, std::vector<double>& out) {
    set_knots(set, axis, prefix, out);
  };
  return integrate(f, box, cfg, &knots);
}

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadConfig& cfg, const std::vector<double>& knots) {
  return adapt_1d(f, a, b, cfg, knots);
}

}  // namespace renorm
