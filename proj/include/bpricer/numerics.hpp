#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bpricer::numerics {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Tolerances and budgets for adaptive quadrature.  Semi-infinite integrals are
// truncated once the integrand has decayed and the running block contributions
// fall below abs_tol / 100; truncation_bound caps how far the truncation point
// may wander from the finite endpoint.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
  double truncation_bound = 1e4;
};

// Thrown when the subdivision budget is exhausted or a semi-infinite integrand
// fails to decay.  Carries the best available estimate so callers can decide
// whether it is still usable.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& message, double best_estimate,
                  double error_estimate)
      : std::runtime_error(message),
        best_estimate_(best_estimate),
        error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

namespace detail {

// Gauss-Kronrod 7-15 pair.  Nodes are the positive half of the symmetric rule;
// the embedded 7-point Gauss rule sits on nodes 1, 3, 5 and the center.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct PanelEstimate {
  double a = 0.0;
  double b = 0.0;
  double integral = 0.0;
  double error = 0.0;
};

template <class F>
PanelEstimate gauss_kronrod_panel(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double halfwidth = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = halfwidth * kKronrodNodes[i];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kKronrodWeights[i] * (f1 + f2);
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
  }
  PanelEstimate out;
  out.a = a;
  out.b = b;
  out.integral = halfwidth * kronrod;
  out.error = std::abs(halfwidth * (kronrod - gauss));
  return out;
}

struct PanelWorse {
  bool operator()(const PanelEstimate& x, const PanelEstimate& y) const {
    return x.error < y.error;
  }
};

// Adaptive bisection over a finite interval.  `breakpoints` seeds the initial
// panel edges (useful for integrands with narrow features the first panel scan
// would miss).  `subdivisions` is a shared budget decremented in place.
template <class F>
double integrate_finite_adaptive(const F& f, double a, double b,
                                 const QuadratureSpec& spec,
                                 std::span<const double> breakpoints,
                                 int& subdivisions) {
  std::vector<double> edges;
  edges.push_back(a);
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<PanelEstimate, std::vector<PanelEstimate>, PanelWorse>
      queue;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    PanelEstimate p = gauss_kronrod_panel(f, edges[i], edges[i + 1]);
    total += p.integral;
    total_error += p.error;
    queue.push(p);
  }

  while (true) {
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (total_error <= tol || queue.empty()) return total;
    if (subdivisions <= 0) {
      throw QuadratureError("quadrature subdivision budget exhausted", total,
                            total_error);
    }
    PanelEstimate worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval at floating-point resolution: keep its estimate as final.
      continue;
    }
    --subdivisions;
    PanelEstimate left = gauss_kronrod_panel(f, worst.a, mid);
    PanelEstimate right = gauss_kronrod_panel(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b].  Either endpoint may be
// infinite; semi-infinite ranges are integrated in geometrically growing
// blocks and truncated once the remaining contributions are negligible
// relative to spec.abs_tol.  `hints` lists interior abscissae near which the
// integrand has structure (peaks, kinks); they become initial panel edges.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {},
                 std::span<const double> hints = {}) {
  if (std::isnan(a) || std::isnan(b)) {
    throw std::invalid_argument("integrate: NaN endpoint");
  }
  if (a == b) return 0.0;
  if (a > b) return -integrate(std::forward<F>(f), b, a, spec, hints);

  int budget = spec.max_subdivisions;

  if (std::isinf(a) && std::isinf(b)) {
    double split = 0.0;
    if (!hints.empty()) {
      std::vector<double> hs(hints.begin(), hints.end());
      std::sort(hs.begin(), hs.end());
      split = hs[hs.size() / 2];
    }
    QuadratureSpec half = spec;
    half.abs_tol = 0.5 * spec.abs_tol;
    half.rel_tol = 0.5 * spec.rel_tol;
    auto mirrored = [&f](double x) { return f(-x); };
    double upper = integrate(f, split, kInfinity, half, hints);
    std::vector<double> neg_hints;
    for (double h : hints) neg_hints.push_back(-h);
    double lower =
        integrate(mirrored, -split, kInfinity, half, neg_hints);
    return upper + lower;
  }

  if (std::isinf(a)) {
    std::vector<double> neg_hints;
    for (double h : hints) neg_hints.push_back(-h);
    auto mirrored = [&f](double x) { return f(-x); };
    return integrate(mirrored, -b, kInfinity, spec, neg_hints);
  }

  if (!std::isinf(b)) {
    return detail::integrate_finite_adaptive(f, a, b, spec, hints, budget);
  }

  // [a, inf): integrate geometrically growing blocks until two consecutive
  // blocks contribute less than abs_tol / 100 and the integrand has decayed.
  QuadratureSpec block_spec = spec;
  block_spec.abs_tol = spec.abs_tol / 50.0;
  block_spec.rel_tol = spec.rel_tol / 4.0;

  double first_len = 1.0;
  std::vector<double> sorted_hints(hints.begin(), hints.end());
  std::sort(sorted_hints.begin(), sorted_hints.end());
  if (!sorted_hints.empty() && sorted_hints.back() > a) {
    first_len = std::max(first_len, sorted_hints.back() - a);
  }

  const double cutoff = spec.abs_tol / 100.0;
  double total = 0.0;
  double lo = a;
  double len = first_len;
  int quiet_blocks = 0;
  while (true) {
    const double hi = lo + len;
    double block = detail::integrate_finite_adaptive(f, lo, hi, block_spec,
                                                     sorted_hints, budget);
    total += block;
    const double envelope =
        std::max(std::abs(block), std::abs(f(hi)) * std::min(len, 1.0));
    quiet_blocks = (envelope < cutoff) ? quiet_blocks + 1 : 0;
    if (quiet_blocks >= 2) return total;
    lo = hi;
    if (lo - a >= spec.truncation_bound) {
      throw QuadratureError(
          "integrand has not decayed within the truncation bound", total,
          envelope);
    }
    len = std::min(2.0 * len, 0.5 * spec.truncation_bound);
  }
}

// Standard normal density.
inline double std_normal_pdf(double x) {
  static const double inv_sqrt_2pi = 0.39894228040143267793994605993438;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

// Standard normal distribution function, accurate in both tails.
inline double std_normal_cdf(double x) {
  static const double inv_sqrt2 = 0.70710678118654752440084436210485;
  return 0.5 * std::erfc(-x * inv_sqrt2);
}

namespace detail {

// Rational approximations for K1 on the real axis (relative error below
// 1e-15 over the double range), split at x = 1.  Polynomials are evaluated
// by Horner's rule with coefficients in ascending order.
inline double eval_poly(const double* c, int n, double y) {
  double r = c[n - 1];
  for (int i = n - 2; i >= 0; --i) r = r * y + c[i];
  return r;
}

inline constexpr double kK1P1[6] = {
    -2.2149374878243304548e+06, 7.1938920065420586101e+05,
    1.7733324035147015630e+05,  7.1885382604084798576e+03,
    9.9991373567429309922e+01,  4.8127070456878442310e-01,
};
inline constexpr double kK1Q1[4] = {
    -2.2149374878243304548e+06,
    3.7264298672067697862e+04,
    -2.8143915754538725829e+02,
    1.0,
};
inline constexpr double kK1P2[6] = {
    0.0,
    -1.3531161492785421328e+06,
    -1.4758069205414222471e+05,
    -4.5051623763436087023e+03,
    -5.3103913335180275253e+01,
    -2.2795590826955002390e-01,
};
inline constexpr double kK1Q2[4] = {
    -2.7062322985570842656e+06,
    4.3117653211351080007e+04,
    -3.0507151578787595807e+02,
    1.0,
};
inline constexpr double kK1P3[11] = {
    2.2196792496874548962e+00, 4.4137176114230414036e+01,
    3.4122953486801312910e+02, 1.3319486433183221990e+03,
    2.8590657697910288226e+03, 3.4540675585544584407e+03,
    2.3123742209168871550e+03, 8.1094256146537402173e+02,
    1.3182609918569941308e+02, 7.5584584631176030810e+00,
    6.4257745859173138767e-02,
};
inline constexpr double kK1Q3[10] = {
    1.7710478032601086579e+00, 3.4552228452758912848e+01,
    2.5951223655579051357e+02, 9.6929165726802648634e+02,
    1.9448440788918006154e+03, 2.1181000487171943810e+03,
    1.2082692316002348638e+03, 3.3031020088765390854e+02,
    3.6001069306861518855e+01, 1.0,
};

}  // namespace detail

// Modified Bessel function of the second kind, order one, for x > 0.
// Throws std::domain_error for x <= 0.  For x large enough that e^{-x}
// underflows, returns 0 and sets *underflowed (when given) to true.
inline double bessel_k1(double x, bool* underflowed = nullptr) {
  if (underflowed != nullptr) *underflowed = false;
  if (!(x > 0.0)) {
    throw std::domain_error("bessel_k1: argument must be positive");
  }
  if (x <= 1.0) {
    const double y = x * x;
    const double r1 = detail::eval_poly(detail::kK1P1, 6, y) /
                      detail::eval_poly(detail::kK1Q1, 4, y);
    const double r2 = detail::eval_poly(detail::kK1P2, 6, y) /
                      detail::eval_poly(detail::kK1Q2, 4, y);
    return (r1 + std::log(x) * r2) / x;
  }
  const double decay = std::exp(-x);
  if (decay == 0.0) {
    if (underflowed != nullptr) *underflowed = true;
    return 0.0;
  }
  const double y = 1.0 / x;
  const double r = detail::eval_poly(detail::kK1P3, 11, y) /
                   detail::eval_poly(detail::kK1Q3, 10, y);
  return decay / std::sqrt(x) * r;
}

namespace detail {

// K0 and K1 for complex argument with Re z > 0: ascending series for
// |z| <= 2, Steed's continued fraction for the rest.  Used to evaluate
// characteristic functions along shifted contours.
inline std::pair<std::complex<double>, std::complex<double>>
bessel_k01_series(std::complex<double> z) {
  using C = std::complex<double>;
  const C z2_4 = 0.25 * z * z;
  const C logz2 = std::log(0.5 * z);
  const double euler_gamma = 0.57721566490153286060651209008240243;

  C i0 = 1.0, i1 = 1.0;
  C k0_sum = -euler_gamma;
  C k1_sum = 1.0 - 2.0 * euler_gamma;  // psi(1) + psi(2)
  C term_i0 = 1.0, term_i1 = 1.0;
  double psi_k1 = -euler_gamma;  // psi(k + 1)
  double psi_k2 = 1.0 - euler_gamma;  // psi(k + 2)
  for (int k = 1; k < 60; ++k) {
    term_i0 *= z2_4 / double(k * k);
    term_i1 *= z2_4 / double(k * (k + 1));
    psi_k1 += 1.0 / k;
    psi_k2 += 1.0 / (k + 1);
    i0 += term_i0;
    i1 += term_i1;
    k0_sum += term_i0 * psi_k1;
    k1_sum += term_i1 * (psi_k1 + psi_k2);
    if (std::abs(term_i0) < 1e-18 * std::abs(i0) &&
        std::abs(term_i1) < 1e-18 * std::abs(i1)) {
      break;
    }
  }
  i1 *= 0.5 * z;
  const C k0 = -logz2 * i0 + k0_sum;
  const C k1 = 1.0 / z + logz2 * i1 - 0.25 * z * k1_sum;
  return {k0, k1};
}

inline std::pair<std::complex<double>, std::complex<double>>
bessel_k01_continued_fraction(std::complex<double> z) {
  using C = std::complex<double>;
  C b = 2.0 * (1.0 + z);
  C d = 1.0 / b;
  C delh = d;
  C h = d;
  C q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  C q = a1, c = a1;
  double a = -a1;
  C s = 1.0 + q * delh;
  for (int i = 2; i <= 20000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / double(i);
    const C qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const C dels = q * delh;
    s += dels;
    if (std::abs(dels) < 1e-17 * std::abs(s)) break;
  }
  h *= a1;
  const C k0 = std::sqrt(kPi / (2.0 * z)) * std::exp(-z) / s;
  const C k1 = k0 * (z + 0.5 - h) / z;
  return {k0, k1};
}

inline std::complex<double> bessel_k1_complex(std::complex<double> z) {
  if (!(z.real() > 0.0)) {
    throw std::domain_error("bessel_k1_complex: requires Re z > 0");
  }
  if (std::abs(z) <= 2.0) return bessel_k01_series(z).second;
  return bessel_k01_continued_fraction(z).second;
}

inline std::complex<double> bessel_k0_complex(std::complex<double> z) {
  if (!(z.real() > 0.0)) {
    throw std::domain_error("bessel_k0_complex: requires Re z > 0");
  }
  if (std::abs(z) <= 2.0) return bessel_k01_series(z).first;
  return bessel_k01_continued_fraction(z).first;
}

}  // namespace detail

// Recovers a density at x from a real, even, integrable characteristic
// function phi via f(x) = (1/pi) * int_0^inf cos(u x) phi(u) du.  For |x|
// away from zero the integral is accumulated over half-periods of the cosine
// so the alternating partial sums reveal when the tail is negligible.  Throws
// QuadratureError when phi does not decay.
template <class Phi>
double fourier_cosine_density(Phi&& phi, double x, const QuadratureSpec& spec = {}) {
  const double phi0 = phi(0.0);
  if (!std::isfinite(phi0)) {
    throw std::invalid_argument("fourier_cosine_density: phi(0) not finite");
  }
  const double ax = std::abs(x);

  if (ax < 0.5) {
    auto integrand = [&phi, ax](double u) { return std::cos(u * ax) * phi(u); };
    QuadratureSpec tail_spec = spec;
    tail_spec.abs_tol = spec.abs_tol * kPi;
    tail_spec.rel_tol = spec.rel_tol;
    return integrate(integrand, 0.0, kInfinity, tail_spec) / kPi;
  }

  const double half_period = kPi / ax;
  QuadratureSpec term_spec = spec;
  term_spec.abs_tol = spec.abs_tol * kPi / 4.0;
  term_spec.rel_tol = std::max(spec.rel_tol, 1e-13);
  int budget = spec.max_subdivisions;
  auto integrand = [&phi, ax](double u) { return std::cos(u * ax) * phi(u); };

  const long max_terms = 16L * std::max(spec.max_subdivisions, 1000);
  double total = 0.0;
  int quiet_terms = 0;
  for (long k = 0; k < max_terms; ++k) {
    const double lo = k * half_period;
    const double hi = lo + half_period;
    const double term = detail::integrate_finite_adaptive(
        integrand, lo, hi, term_spec, {}, budget);
    total += term;
    quiet_terms =
        (std::abs(term) < spec.abs_tol * kPi / 2.0) ? quiet_terms + 1 : 0;
    if (quiet_terms >= 2) return total / kPi;
    if (hi > spec.truncation_bound && quiet_terms == 0 && k > 8) {
      throw QuadratureError(
          "fourier_cosine_density: characteristic function does not decay",
          total / kPi, std::abs(term) / kPi);
    }
  }
  throw QuadratureError(
      "fourier_cosine_density: half-period sum did not converge", total / kPi,
      spec.abs_tol);
}

// Minimizes a continuous function on [lo, hi]: a coarse scan over
// grid_size + 1 equally spaced points locates the basin, then golden-section
// search narrows the bracket below tol.  Returns {argmin, minimum}.
inline std::pair<double, double> minimize_scalar(
    const std::function<double(double)>& g, double lo, double hi,
    double tol = 1e-10, int grid_size = 512) {
  if (!(hi > lo)) {
    throw std::invalid_argument("minimize_scalar: requires lo < hi");
  }
  if (grid_size < 2) grid_size = 2;
  const double h = (hi - lo) / grid_size;
  double best_x = lo, best_g = g(lo);
  std::vector<double> values(grid_size + 1);
  values[0] = best_g;
  for (int i = 1; i <= grid_size; ++i) {
    const double x = (i == grid_size) ? hi : lo + i * h;
    values[i] = g(x);
    if (values[i] < best_g) {
      best_g = values[i];
      best_x = x;
    }
  }
  int best_i = int(std::lround((best_x - lo) / h));
  best_i = std::clamp(best_i, 0, grid_size);
  double a = lo + std::max(0, best_i - 1) * h;
  double b = lo + std::min(grid_size, best_i + 1) * h;
  a = std::max(a, lo);
  b = std::min(b, hi);

  const double invphi = 0.61803398874989484820458683436564;
  const double width_floor =
      std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() *
                        (std::abs(lo) + std::abs(hi) + 1.0));
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double g1 = g(x1), g2 = g(x2);
  for (int iter = 0; iter < 200 && (b - a) > width_floor; ++iter) {
    if (g1 <= g2) {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - invphi * (b - a);
      g1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + invphi * (b - a);
      g2 = g(x2);
    }
  }
  double mid = 0.5 * (a + b);
  double gmid = g(mid);
  if (g1 < gmid) {
    mid = x1;
    gmid = g1;
  }
  if (g2 < gmid) {
    mid = x2;
    gmid = g2;
  }
  if (best_g < gmid) {
    mid = best_x;
    gmid = best_g;
  }
  return {mid, gmid};
}

// Monotone (Fritsch-Carlson) piecewise-cubic Hermite interpolant.  Evaluation
// outside the knot range clamps to the end values; integral() integrates the
// cubic segments exactly.
class PchipInterpolant {
 public:
  PchipInterpolant() = default;

  PchipInterpolant(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
      throw std::invalid_argument("PchipInterpolant: need >= 2 knots");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!(x_[i + 1] > x_[i])) {
        throw std::invalid_argument(
            "PchipInterpolant: knots must be strictly increasing");
      }
    }
    d_.resize(n);
    std::vector<double> hseg(n - 1), slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      hseg[i] = x_[i + 1] - x_[i];
      slope[i] = (y_[i + 1] - y_[i]) / hseg[i];
    }
    if (n == 2) {
      d_[0] = d_[1] = slope[0];
      return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (slope[i - 1] * slope[i] <= 0.0) {
        d_[i] = 0.0;
      } else {
        const double w1 = 2.0 * hseg[i] + hseg[i - 1];
        const double w2 = hseg[i] + 2.0 * hseg[i - 1];
        d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
      }
    }
    d_[0] = edge_derivative(hseg[0], hseg[1], slope[0], slope[1]);
    d_[n - 1] =
        edge_derivative(hseg[n - 2], hseg[n - 3], slope[n - 2], slope[n - 3]);
  }

  double operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const std::size_t i = segment_of(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
  }

  double integral(double a, double b) const {
    if (a > b) return -integral(b, a);
    const double lo = std::clamp(a, x_.front(), x_.back());
    const double hi = std::clamp(b, x_.front(), x_.back());
    double total = (lo - a) * y_.front() + (b - hi) * y_.back();
    if (lo >= hi) return total;
    std::size_t i = segment_of(lo);
    double left = lo;
    while (left < hi) {
      const double right = std::min(hi, x_[i + 1]);
      total += segment_integral(i, left, right);
      left = right;
      ++i;
      if (i + 1 >= x_.size()) break;
    }
    return total;
  }

  const std::vector<double>& knots() const noexcept { return x_; }
  const std::vector<double>& values() const noexcept { return y_; }

 private:
  static double edge_derivative(double h0, double h1, double s0, double s1) {
    double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d * s0 <= 0.0) return 0.0;
    if (s0 * s1 < 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
    return d;
  }

  std::size_t segment_of(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t idx = std::size_t(it - x_.begin());
    return std::clamp<std::size_t>(idx, 1, x_.size() - 1) - 1;
  }

  // Antiderivative of the Hermite cubic on segment i between two points
  // inside [x_i, x_{i+1}].
  double segment_integral(std::size_t i, double a, double b) const {
    const double h = x_[i + 1] - x_[i];
    auto anti = [&](double x) {
      const double t = (x - x_[i]) / h;
      const double t2 = t * t;
      const double t3 = t2 * t;
      const double t4 = t2 * t2;
      const double i00 = 0.5 * t4 - t3 + t;
      const double i10 = 0.25 * t4 - (2.0 / 3.0) * t3 + 0.5 * t2;
      const double i01 = -0.5 * t4 + t3;
      const double i11 = 0.25 * t4 - t3 / 3.0;
      return h * (i00 * y_[i] + h * i10 * d_[i] + i01 * y_[i + 1] +
                  h * i11 * d_[i + 1]);
    };
    return anti(b) - anti(a);
  }

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

// Builds a knot set on [lo, hi] such that a cubic interpolant of f through the
// knots reproduces f at segment midpoints within tol (absolute).  `seeds`
// forces initial knots near known features.  Used to tabulate smooth but
// expensive functions before interpolation.
template <class F>
std::vector<double> adaptive_knots(const F& f, double lo, double hi,
                                   double tol,
                                   std::span<const double> seeds = {},
                                   int max_depth = 24) {
  struct Node {
    double a, b, fa, fb;
    int depth;
  };
  std::vector<double> edges{lo, hi};
  for (double s : seeds) {
    if (s > lo && s < hi) edges.push_back(s);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<double> knots;
  std::vector<Node> stack;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    stack.push_back({edges[i], edges[i + 1], f(edges[i]), f(edges[i + 1]), 0});
  }
  knots.reserve(1024);
  while (!stack.empty()) {
    Node n = stack.back();
    stack.pop_back();
    const double m = 0.5 * (n.a + n.b);
    const double fm = f(m);
    const double linear = 0.5 * (n.fa + n.fb);
    const bool resolved =
        n.depth >= max_depth || std::abs(fm - linear) <= tol;
    if (resolved) {
      knots.push_back(n.a);
      knots.push_back(m);
    } else {
      stack.push_back({m, n.b, fm, n.fb, n.depth + 1});
      stack.push_back({n.a, m, n.fa, fm, n.depth + 1});
    }
  }
  knots.push_back(hi);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  return knots;
}

}  // namespace bpricer::numerics
