#include "lilfields/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lilfields {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
// orthogonal-polynomial recurrence, weights come from the first components
// of the eigenvectors scaled by the total mass mu0.
QuadratureRule golub_welsch(const std::vector<double>& alpha, const std::vector<double>& beta,
                            double mu0) {
  const int n = static_cast<int>(alpha.size());
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jacobi(k, k) = alpha[static_cast<std::size_t>(k)];
    if (k + 1 < n) {
      const double off = std::sqrt(beta[static_cast<std::size_t>(k + 1)]);
      jacobi(k, k + 1) = off;
      jacobi(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("golub_welsch: eigensolver failed");
  }
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    rule.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
  }
  return rule;
}

// Orthonormal Hermite functions p_k = He_k / sqrt(k!) evaluated up to p_n;
// overflow-free for any n. Returns (p_{n-1}(x), p_n(x)).
std::pair<double, double> orthonormal_hermite_pair(int n, double x) {
  double prev = 1.0;  // p_0
  double cur = x;     // p_1
  if (n == 0) return {0.0, prev};
  for (int k = 1; k < n; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                        std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
  }
  return {prev, cur};
}

}  // namespace

QuadratureRule gauss_hermite_probabilists(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_probabilists: n must be >= 1");
  // Monic recurrence He_{k+1} = x He_k - k He_{k-1}: alpha_k = 0, beta_k = k.
  std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
  std::vector<double> beta(static_cast<std::size_t>(n), 0.0);
  for (int k = 1; k < n; ++k) beta[static_cast<std::size_t>(k)] = static_cast<double>(k);
  QuadratureRule rule = golub_welsch(alpha, beta, 1.0);
  // Polish each node on He_n(x) = 0: the eigenvalue estimates carry ~1e-13
  // errors that the huge H_q values amplify in moment computations.
  // Newton step He_n/He_n' = p_n / (sqrt(n) p_{n-1}).
  for (double& x : rule.nodes) {
    for (int it = 0; it < 3; ++it) {
      const auto [p_prev, p_cur] = orthonormal_hermite_pair(n, x);
      const double slope = std::sqrt(static_cast<double>(n)) * p_prev;
      if (slope == 0.0) break;
      x -= p_cur / slope;
    }
  }
  std::sort(rule.nodes.begin(), rule.nodes.end());
  // Christoffel weights from the orthonormal basis: w = 1 / sum_k p_k(x)^2.
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    double sum = 1.0;  // p_0^2
    double prev = 1.0, cur = x;
    for (int k = 1; k < n; ++k) {
      sum += cur * cur;
      const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                          std::sqrt(static_cast<double>(k + 1));
      prev = cur;
      cur = next;
    }
    rule.weights[i] = 1.0 / sum;
  }
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");
  std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
  std::vector<double> beta(static_cast<std::size_t>(n), 0.0);
  for (int k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    beta[static_cast<std::size_t>(k)] = kk * kk / (4.0 * kk * kk - 1.0);
  }
  QuadratureRule rule = golub_welsch(alpha, beta, 2.0);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    rule.nodes[k] = mid + half * rule.nodes[k];
    rule.weights[k] *= half;
  }
  return rule;
}

double gaussian_expectation(const std::function<double(double)>& f,
                            const std::vector<double>& breakpoints) {
  constexpr double kRange = 12.0;  // N(0,1) mass beyond is ~2e-33
  std::vector<double> edges;
  for (double e = -kRange; e <= kRange + 0.5; e += 1.0) edges.push_back(e);
  for (double b : breakpoints) {
    if (b <= -kRange || b >= kRange) continue;
    edges.push_back(b);
    // Geometric grading toward the breakpoint: integrands like |x-b|^alpha
    // have unbounded derivatives there and plain panels only converge
    // algebraically; graded panels restore near-machine accuracy.
    for (int k = 0; k <= 45; ++k) {
      const double h = std::ldexp(1.0, -k);
      if (b + h < kRange) edges.push_back(b + h);
      if (b - h > -kRange) edges.push_back(b - h);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  static const QuadratureRule panel = gauss_legendre(32, 0.0, 1.0);
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double a = edges[s];
    const double width = edges[s + 1] - a;
    if (width <= 0.0) continue;
    double acc = 0.0;
    for (std::size_t k = 0; k < panel.nodes.size(); ++k) {
      const double x = a + width * panel.nodes[k];
      acc += panel.weights[k] * f(x) * std::exp(-0.5 * x * x);
    }
    total += acc * width * inv_sqrt_2pi;
  }
  return total;
}

}  // namespace lilfields
