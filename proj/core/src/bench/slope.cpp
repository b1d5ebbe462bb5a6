#include "rapg/bench/slope.hpp"

#include <cmath>
#include <sstream>

#include "rapg/errors.hpp"

namespace rapg::bench {

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw InsufficientTail("need at least two paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double condition_number(const RapgParams& p) { return p.c() * p.xi / p.m(); }

SlopeFit fit_slope(const std::vector<double>& F, double F_star, double kappa,
                   double tail_fraction) {
  const std::size_t total = F.size();
  if (total < 50) throw InsufficientTail("need at least 50 iterates, got " + std::to_string(total));
  const std::size_t start = total - static_cast<std::size_t>(std::floor(tail_fraction * total));
  if (total - start < 10) throw InsufficientTail("tail has fewer than 10 points");
  std::vector<double> ks, logs;
  for (std::size_t k = start; k < total; ++k) {
    const double gap = F[k] - F_star;
    if (!(gap > 0.0)) {
      std::ostringstream msg;
      msg << "F_" << k << " - F* = " << gap;
      throw NonPositiveGap(msg.str());
    }
    ks.push_back(static_cast<double>(k));
    logs.push_back(std::log(gap));
  }
  SlopeFit out;
  out.s = ols(ks, logs).slope;
  out.kappa = kappa;
  out.transformed = 1.0 / (1.0 - std::exp(out.s));
  out.points = static_cast<int>(ks.size());
  return out;
}

SlopeFit fit_slope(const RunRecord& rec, double F_star, const RapgParams& p,
                   double tail_fraction) {
  std::vector<double> F;
  F.reserve(rec.rows.size());
  for (const auto& r : rec.rows) F.push_back(r.F);
  if (rec.reason == StopReason::kReferenceMinimum && !F.empty() && F.back() <= F_star) F.pop_back();
  return fit_slope(F, F_star, condition_number(p), tail_fraction);
}

}  // namespace rapg::bench
