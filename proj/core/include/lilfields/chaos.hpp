#pragma once

#include <functional>
#include <vector>

namespace lilfields {

/// Probabilists' Hermite polynomial H_q(x) by the three-term recurrence
/// H_{q+1} = x H_q - q H_{q-1}, H_0 = 1, H_1 = x; E[H_q(Z)^2] = q!.
double hermite_eval(int q, double x);

/// ln(q!) via lgamma; series assembled in log space to dodge overflow.
double log_factorial(int q);

/// Expansion coefficients c_q = E[f(Z) H_q(Z)] / q!, q = 1..Q, plus the
/// centering term c0 = E[f(Z)]. precision_warning records nodes < 2Q.
struct HermiteCoeffs {
  std::vector<double> c;  // c[q-1] holds c_q
  double c0 = 0.0;
  bool precision_warning = false;

  int order() const { return static_cast<int>(c.size()); }
  double cq(int q) const { return c[static_cast<std::size_t>(q - 1)]; }
};

HermiteCoeffs hermite_coeffs(const std::function<double(double)>& f, int Q, int nodes = 128);

/// Convenience: coefficients that put all mass on a single chaos level.
HermiteCoeffs hermite_delta(int q, int Q = 0);

enum class SumProfile { rectangles, set_sequence };

/// Truncated series sum_q sqrt(q!) q^e |c_q| with e = d - 1/2 for summation
/// on rectangles and e = 1/2 for set sequences. tail_flag is set when the
/// last term still exceeds 1e-6 of the partial sum.
struct SeriesConstant {
  double value = 0.0;
  bool tail_flag = false;
};

SeriesConstant series_constant(const HermiteCoeffs& coeffs, int d, SumProfile profile);

/// s^q H_q(u): the conditional expectation E[H_q(Y) | U = u] for
/// Y = s U + t V with s^2 + t^2 = 1 and U, V independent standard normals.
/// s = 0 with q >= 1 gives 0.
double conditional_hermite_projection(int q, double s, double u);

}  // namespace lilfields
