#include "lilfields/scalars.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "lilfields/errors.hpp"
#include "lilfields/quadrature.hpp"

namespace lilfields {

double slow_log(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("slow_log: argument must be positive, got " + std::to_string(x));
  }
  return std::max(std::log(x), 1.0);
}

double slow_log_log(double x) { return slow_log(slow_log(x)); }

OrliczParams::OrliczParams(double p_, double r_) : p(p_), r(r_) {
  if (!(p > 1.0)) throw std::invalid_argument("OrliczParams: p must exceed 1");
  if (!(r >= 0.0)) throw std::invalid_argument("OrliczParams: r must be nonnegative");
}

double phi(double p, double r, double x) {
  if (!(p >= 1.0)) throw std::invalid_argument("phi: p must be >= 1");
  if (!(r >= 0.0)) throw std::invalid_argument("phi: r must be nonnegative");
  if (!(x >= 0.0)) throw std::domain_error("phi: argument must be nonnegative");
  if (x == 0.0) return 0.0;
  const double base = std::pow(x, p);
  if (r == 0.0) return base;
  return base * std::pow(1.0 + std::log1p(x), r);
}

double phi(const OrliczParams& params, double x) { return phi(params.p, params.r, x); }

double phi_prime(const OrliczParams& params, double x) {
  if (!(x >= 0.0)) throw std::domain_error("phi_prime: argument must be nonnegative");
  if (x == 0.0) return 0.0;
  const double lg = 1.0 + std::log1p(x);
  const double base = std::pow(x, params.p - 1.0);
  if (params.r == 0.0) return params.p * base;
  return params.p * base * std::pow(lg, params.r) +
         std::pow(x, params.p) * params.r * std::pow(lg, params.r - 1.0) / (1.0 + x);
}

namespace {

void require_finite(std::span<const double> values, const char* what) {
  if (values.empty()) throw std::invalid_argument(std::string(what) + ": empty sample set");
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + ": non-finite sample value");
    }
  }
}

double mean_phi(std::span<const double> values, const OrliczParams& params, double lambda) {
  double acc = 0.0;
  for (double v : values) acc += phi(params, std::abs(v) / lambda);
  return acc / static_cast<double>(values.size());
}

// Bisection on the decreasing map lambda -> mean phi(|x|/lambda), bracketed
// by geometric expansion. Runs until the residual is below tol and the
// bracket below 1e-12 relative width, so homogeneity holds to ~2*tol.
double luxemburg_bisect(const OrliczParams& params, double tol, double scale,
                        const std::function<double(double)>& expectation) {
  double lo = 1e-12 * scale;
  double hi = scale * (1.0 + params.r) * 4.0;
  while (expectation(hi) > 1.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::runtime_error("orlicz norm: bracket expansion diverged");
  }
  while (expectation(lo) < 1.0 && lo > 1e-300) {
    hi = lo;
    lo *= 0.5;
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 256; ++it) {
    mid = 0.5 * (lo + hi);
    const double e = expectation(mid);
    if (e > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12 * hi && std::abs(e - 1.0) <= tol) break;
  }
  return mid;
}

}  // namespace

double orlicz_norm_samples(std::span<const double> values, const OrliczParams& params,
                           double tol) {
  require_finite(values, "orlicz_norm_samples");
  if (!(tol > 0.0)) throw std::invalid_argument("orlicz_norm_samples: tol must be positive");
  double max_abs = 0.0;
  for (double v : values) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) return 0.0;  // infimum over an empty constraint set
  return luxemburg_bisect(params, tol, max_abs,
                          [&](double lambda) { return mean_phi(values, params, lambda); });
}

double orlicz_norm_samples(const SampleSet& s, const OrliczParams& params, double tol) {
  return orlicz_norm_samples(std::span<const double>(s.values), params, tol);
}

double orlicz_norm_delta_se(std::span<const double> values, const OrliczParams& params,
                            double lambda) {
  require_finite(values, "orlicz_norm_delta_se");
  if (!(lambda > 0.0)) return 0.0;
  const double n = static_cast<double>(values.size());
  double sum = 0.0, sum_sq = 0.0, slope = 0.0;
  for (double v : values) {
    const double a = std::abs(v);
    const double f = phi(params, a / lambda);
    sum += f;
    sum_sq += f * f;
    slope += (a / (lambda * lambda)) * phi_prime(params, a / lambda);
  }
  const double var = std::max(0.0, sum_sq / n - (sum / n) * (sum / n));
  const double g_prime = slope / n;  // |d/dlambda mean phi|
  if (g_prime <= 0.0) return 0.0;
  return std::sqrt(var / n) / g_prime;
}

double orlicz_norm_quadrature(const InnovationSpec& dist, const OrliczParams& params, int nodes) {
  if (nodes < 2) throw std::invalid_argument("orlicz_norm_quadrature: nodes must be >= 2");
  std::function<double(double)> expectation;
  double scale = 1.0;
  switch (dist.tag()) {
    case InnovationTag::standard_normal: {
      // phi(|x|/lambda) has a kink at 0, which plain Gauss-Hermite resolves
      // poorly; the segmented Gaussian expectation is exact to roundoff.
      expectation = [params](double lambda) {
        return gaussian_expectation(
            [&](double x) { return phi(params, std::abs(x) / lambda); }, {0.0});
      };
      scale = 8.0;  // tail scale of |Z|
      break;
    }
    case InnovationTag::rademacher: {
      expectation = [params](double lambda) { return phi(params, 1.0 / lambda); };
      scale = 1.0;
      break;
    }
    case InnovationTag::two_point: {
      const double q = dist.two_point_q();
      const double hi = dist.two_point_hi();
      const double lo = -dist.two_point_lo();
      expectation = [params, q, hi, lo](double lambda) {
        return q * phi(params, hi / lambda) + (1.0 - q) * phi(params, lo / lambda);
      };
      scale = dist.support_bound();
      break;
    }
    case InnovationTag::centered_uniform: {
      const double b = std::sqrt(3.0);
      const QuadratureRule rule = gauss_legendre(nodes, 0.0, b);
      expectation = [rule, params, b](double lambda) {
        double acc = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          acc += rule.weights[k] * phi(params, rule.nodes[k] / lambda);
        }
        return acc / b;  // density 1/(2*sqrt(3)) over both half-lines
      };
      scale = b;
      break;
    }
    default:
      throw capability_error("orlicz_norm_quadrature: unsupported distribution tag");
  }
  return luxemburg_bisect(params, 1e-12, scale, expectation);
}

double weak_lp_norm_samples(std::span<const double> values, double p) {
  require_finite(values, "weak_lp_norm_samples");
  if (!(p > 1.0 && p < 2.0)) {
    throw std::invalid_argument("weak_lp_norm_samples: p must lie in (1,2)");
  }
  std::vector<double> abs_sorted(values.begin(), values.end());
  for (double& v : abs_sorted) v = std::abs(v);
  std::sort(abs_sorted.begin(), abs_sorted.end(), std::greater<double>());
  const double n = static_cast<double>(abs_sorted.size());
  double best = 0.0;
  for (std::size_t k = 0; k < abs_sorted.size(); ++k) {
    const double t = abs_sorted[k];
    best = std::max(best, std::pow(t, p) * (static_cast<double>(k + 1) / n));
  }
  return std::pow(best, 1.0 / p);
}

double weak_lp_norm_samples(const SampleSet& s, double p) {
  return weak_lp_norm_samples(std::span<const double>(s.values), p);
}

}  // namespace lilfields
