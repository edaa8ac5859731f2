#pragma once

#include <functional>
#include <vector>

namespace lilfields {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule for expectations against the standard normal density:
/// E[g(Z)] ~= sum_i w_i g(x_i), weights summing to one. Exact for
/// polynomials of degree <= 2n-1. Nodes are eigenvalue estimates polished by
/// Newton steps on the orthonormal recurrence.
QuadratureRule gauss_hermite_probabilists(int n);

/// Rule for the plain integral over [a,b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// E[f(Z)] for a piecewise-smooth f: composite Gauss-Legendre against the
/// normal density over [-12, 12], with panels split at the supplied
/// breakpoints (kinks of f). Gauss-Hermite loses accuracy on kinked
/// integrands like |x|^gamma; this does not.
double gaussian_expectation(const std::function<double(double)>& f,
                            const std::vector<double>& breakpoints = {});

}  // namespace lilfields
