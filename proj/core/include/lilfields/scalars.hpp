#pragma once

#include <span>
#include <string>
#include <vector>

#include "lilfields/innovations.hpp"

namespace lilfields {

/// L(x) = max(ln x, 1) on (0, inf); throws std::domain_error for x <= 0.
double slow_log(double x);

/// LL(x) = L(L(x)); always >= 1.
double slow_log_log(double x);

/// Parameters of the Young function phi_{p,r}(x) = x^p (1 + log(1+x))^r.
struct OrliczParams {
  double p;
  double r;

  OrliczParams(double p_, double r_);
};

/// phi_{p,r}(x) for x >= 0; phi(0) = 0, strictly increasing. The raw overload
/// admits p >= 1 (the p = 1 variant appears in auxiliary estimates);
/// Luxemburg norms always go through the validated OrliczParams with p > 1.
double phi(double p, double r, double x);
double phi(const OrliczParams& params, double x);

/// d/dx phi_{p,r}(x); used for delta-method standard errors.
double phi_prime(const OrliczParams& params, double x);

struct SampleSet {
  std::vector<double> values;
  std::string provenance;
};

/// Luxemburg norm of the empirical distribution: the lambda with
/// mean_i phi(|x_i|/lambda) = 1, located by bracketed bisection. The
/// expectation residual is driven below tol and the bracket below 1e-12
/// relative width. All-zero input returns 0.
double orlicz_norm_samples(const SampleSet& s, const OrliczParams& params, double tol = 1e-10);
double orlicz_norm_samples(std::span<const double> values, const OrliczParams& params,
                           double tol = 1e-10);

/// Delta-method standard error of orlicz_norm_samples at the fitted lambda,
/// treating the samples as i.i.d. draws.
double orlicz_norm_delta_se(std::span<const double> values, const OrliczParams& params,
                            double lambda);

/// Luxemburg norm of an innovation law. The expectation is a finite sum for
/// two-point laws, an n-node Gauss-Legendre rule for the uniform, and a
/// segmented Gauss-Legendre rule against the normal density for the normal
/// (phi(|x|/lambda) has a kink at 0 that plain Gauss-Hermite resolves
/// poorly; nodes is ignored on that path).
double orlicz_norm_quadrature(const InnovationSpec& dist, const OrliczParams& params,
                              int nodes = 128);

/// Exact weak-L^p norm of the empirical measure:
/// (max_k |x|_(k)^p * k/n)^(1/p) over descending order statistics, p in (1,2).
double weak_lp_norm_samples(const SampleSet& s, double p);
double weak_lp_norm_samples(std::span<const double> values, double p);

}  // namespace lilfields
