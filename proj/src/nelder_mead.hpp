#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace qdiscord::detail {

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// Stops when the spread of simplex values drops to `ftol` or the budget runs out.
template <typename Objective>
SimplexResult nelder_mead(Objective&& f, const Eigen::VectorXd& x0, double step, double ftol,
                          int max_evaluations) {
  const Eigen::Index n = x0.size();
  std::vector<Eigen::VectorXd> pts(static_cast<size_t>(n + 1), x0);
  std::vector<double> vals(static_cast<size_t>(n + 1));
  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    return f(x);
  };
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<size_t>(i + 1)](i) += step;
  for (size_t i = 0; i < pts.size(); ++i) vals[i] = eval(pts[i]);

  std::vector<size_t> order(pts.size());
  bool converged = false;
  while (true) {
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return vals[a] < vals[b]; });
    const size_t best = order.front();
    const size_t worst = order.back();
    const size_t second = order[order.size() - 2];
    if (vals[worst] - vals[best] <= ftol) {
      converged = true;
      break;
    }
    if (evals >= max_evaluations) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (size_t i = 0; i < pts.size(); ++i)
      if (i != worst) centroid += pts[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd xc =
        outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  const size_t b = static_cast<size_t>(it - vals.begin());
  return {pts[b], vals[b], evals, converged};
}

}  // namespace qdiscord::detail
