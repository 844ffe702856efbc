#pragma once

#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "pfword/errors.hpp"

namespace pfword::detail {

// 15-point Gauss-Kronrod rule with the embedded 7-point Gauss rule as the
// error reference. Nodes/weights are the standard QUADPACK constants.
inline constexpr double kGk15Nodes[8] = {
    0.99145537112081263920685469752633, 0.94910791234275852452618968404785,
    0.86486442335976907278971278864093, 0.74153118559939443986386477328079,
    0.58608723546769113029414483825873, 0.40584515137739716690660641207696,
    0.20778495500789846760068940377324, 0.0};
inline constexpr double kGk15KronrodWeights[8] = {
    0.02293532201052922496373200805897, 0.06309209262997855329070066318920,
    0.10479001032225018383987632254152, 0.14065325971552591874518959051024,
    0.16900472663926790282658342659855, 0.19035057806478540991325640242101,
    0.20443294007529889241416199923465, 0.20948214108472782801299917489171};
inline constexpr double kGk15GaussWeights[4] = {
    0.12948496616886969327061143267908, 0.27970539148927666790146777142378,
    0.38183005050511894495036977548898, 0.41795918367346938775510204081633};

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename F>
Panel gk15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = kGk15KronrodWeights[7] * f(center);
  double gauss = kGk15GaussWeights[3] * f(center);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kGk15Nodes[i];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kGk15KronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += kGk15GaussWeights[i / 2] * fsum;
  }
  return Panel{a, b, kronrod * half, std::abs(kronrod - gauss) * half};
}

// Globally adaptive integration over the union of the seeded panels.
// Subdivides the worst panel until the summed error estimate drops below
// rel_tol * |integral|. Throws NumericError when the panel budget runs out.
template <typename F>
double integrate_adaptive(const F& f, const std::vector<double>& breakpoints,
                          double rel_tol, std::size_t max_panels,
                          double* achieved_error = nullptr) {
  if (breakpoints.size() < 2)
    throw DomainError("integrate_adaptive: need at least one interval");
  std::priority_queue<Panel> panels;
  double total = 0.0;
  double total_error = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) continue;
    Panel p = gk15(f, breakpoints[i], breakpoints[i + 1]);
    total += p.value;
    total_error += p.error;
    panels.push(p);
    ++count;
  }
  while (total_error > rel_tol * std::abs(total) && total_error > 1e-300) {
    if (count >= max_panels || panels.empty())
      throw NumericError("quadrature failed to reach its error target", total,
                         total_error);
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b))
      throw NumericError("quadrature interval too small to subdivide", total,
                         total_error);
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  if (achieved_error != nullptr) *achieved_error = total_error;
  return total;
}

}  // namespace pfword::detail
