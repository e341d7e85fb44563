#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/math/tools/roots.hpp>

namespace ellmem {

// Samples below 1e-13 of the largest sample count as zeros; a run of them is one root.
// Roots are simple for the linear second-order equations, so every sign flip is one root.
template <class F>
std::vector<double> scan_roots(const F& f, double lo, double hi, int n) {
  std::vector<double> xs(n + 1), vs(n + 1);
  double vmax = 0;
  for (int k = 0; k <= n; ++k) {
    xs[k] = (k == n) ? hi : lo + (hi - lo) * k / n;
    vs[k] = f(xs[k]);
    vmax = std::max(vmax, std::abs(vs[k]));
  }
  std::vector<double> roots;
  if (vmax == 0) return roots;
  const double eps = 1e-13 * vmax;
  auto sgn = [&](int k) { return std::abs(vs[k]) <= eps ? 0 : (vs[k] > 0 ? 1 : -1); };
  int k = 0;
  while (k < n) {
    if (sgn(k) == 0) {
      int j = k;
      while (j + 1 <= n && sgn(j + 1) == 0) ++j;
      if (j == n) break;  // run reaching hi is excluded
      int best = k;
      for (int m = k; m <= j; ++m)
        if (std::abs(vs[m]) < std::abs(vs[best])) best = m;
      roots.push_back(xs[best]);
      k = j + 1;
      continue;
    }
    if (sgn(k + 1) != 0 && sgn(k + 1) != sgn(k)) {
      std::uintmax_t it = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(50);
      auto r = boost::math::tools::toms748_solve(f, xs[k], xs[k + 1], vs[k], vs[k + 1], tol, it);
      roots.push_back(0.5 * (r.first + r.second));
    }
    ++k;
  }
  return roots;
}

}  // namespace ellmem
