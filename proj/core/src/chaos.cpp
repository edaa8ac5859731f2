#include "lilfields/chaos.hpp"

#include <cmath>
#include <stdexcept>

#include "lilfields/quadrature.hpp"

namespace lilfields {

double hermite_eval(int q, double x) {
  if (q < 0) throw std::invalid_argument("hermite_eval: q must be >= 0");
  if (q == 0) return 1.0;
  double prev = 1.0;  // H_0
  double cur = x;     // H_1
  for (int k = 1; k < q; ++k) {
    const double next = x * cur - static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double log_factorial(int q) {
  if (q < 0) throw std::invalid_argument("log_factorial: q must be >= 0");
  return std::lgamma(static_cast<double>(q) + 1.0);
}

HermiteCoeffs hermite_coeffs(const std::function<double(double)>& f, int Q, int nodes) {
  if (Q < 1) throw std::invalid_argument("hermite_coeffs: Q must be >= 1");
  if (nodes < 2) throw std::invalid_argument("hermite_coeffs: nodes must be >= 2");
  const QuadratureRule rule = gauss_hermite_probabilists(nodes);
  const std::size_t m = rule.nodes.size();

  std::vector<double> wf(m);
  for (std::size_t i = 0; i < m; ++i) wf[i] = rule.weights[i] * f(rule.nodes[i]);

  HermiteCoeffs out;
  out.precision_warning = nodes < 2 * Q;
  out.c.assign(static_cast<std::size_t>(Q), 0.0);
  for (std::size_t i = 0; i < m; ++i) out.c0 += wf[i];

  // One recurrence sweep per node, accumulating S_q = sum_i w_i f(x_i) H_q(x_i).
  std::vector<double> h_prev(m, 1.0), h_cur(m);
  for (std::size_t i = 0; i < m; ++i) h_cur[i] = rule.nodes[i];
  for (int q = 1; q <= Q; ++q) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += wf[i] * h_cur[i];
    if (s == 0.0) {
      out.c[static_cast<std::size_t>(q - 1)] = 0.0;
    } else {
      const double log_c = std::log(std::abs(s)) - log_factorial(q);
      out.c[static_cast<std::size_t>(q - 1)] = std::copysign(std::exp(log_c), s);
    }
    if (q < Q) {
      for (std::size_t i = 0; i < m; ++i) {
        const double next = rule.nodes[i] * h_cur[i] - static_cast<double>(q) * h_prev[i];
        h_prev[i] = h_cur[i];
        h_cur[i] = next;
      }
    }
  }
  return out;
}

HermiteCoeffs hermite_delta(int q, int Q) {
  if (q < 1) throw std::invalid_argument("hermite_delta: q must be >= 1");
  HermiteCoeffs out;
  out.c.assign(static_cast<std::size_t>(Q > q ? Q : q), 0.0);
  out.c[static_cast<std::size_t>(q - 1)] = 1.0;
  return out;
}

SeriesConstant series_constant(const HermiteCoeffs& coeffs, int d, SumProfile profile) {
  if (d < 1) throw std::invalid_argument("series_constant: d must be >= 1");
  const double e = profile == SumProfile::rectangles ? static_cast<double>(d) - 0.5 : 0.5;
  SeriesConstant out;
  double last_term = 0.0;
  for (int q = 1; q <= coeffs.order(); ++q) {
    const double cq = coeffs.cq(q);
    double term = 0.0;
    if (cq != 0.0) {
      term = std::exp(0.5 * log_factorial(q) + e * std::log(static_cast<double>(q)) +
                      std::log(std::abs(cq)));
    }
    out.value += term;
    last_term = term;
  }
  out.tail_flag = out.value > 0.0 && last_term > 1e-6 * out.value;
  return out;
}

double conditional_hermite_projection(int q, double s, double u) {
  if (q < 0) throw std::invalid_argument("conditional_hermite_projection: q must be >= 0");
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::domain_error("conditional_hermite_projection: s must lie in [0,1]");
  }
  if (q == 0) return 1.0;
  if (s == 0.0) return 0.0;
  return std::pow(s, q) * hermite_eval(q, u);
}

}  // namespace lilfields
