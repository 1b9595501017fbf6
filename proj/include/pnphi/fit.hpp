#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "pnphi/errors.hpp"

namespace pnphi {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double corr = 0.0;      // Pearson correlation coefficient
  double ss_resid = 0.0;  // residual sum of squares
};

inline LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) throw PreconditionError("linear fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw PreconditionError("linear fit is degenerate: all x equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.corr = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (f.slope * xs[i] + f.intercept);
    f.ss_resid += r * r;
  }
  return f;
}

enum class GrowthModel { polynomial, exponential };

struct GrowthFit {
  GrowthModel model = GrowthModel::polynomial;
  double degree_or_rate = 0.0;  // log-log slope, or log-linear slope
  double corr = 0.0;            // Pearson correlation of the winning fit
  double resid_poly = 0.0;
  double resid_exp = 0.0;
};

// Model choice on the top half of radii: exponential fits log(count)
// against r, polynomial fits log(count) against log(r); the smaller
// residual wins. Reproducible from the counts alone.
inline GrowthFit fit_growth(const std::vector<std::uint64_t>& counts) {
  const int rmax = static_cast<int>(counts.size()) - 1;
  if (rmax < 4) throw PreconditionError("growth fit needs counts up to radius >= 4");
  const int lo = (rmax + 1) / 2;
  std::vector<double> rs, logrs, logc;
  for (int r = lo; r <= rmax; ++r) {
    rs.push_back(static_cast<double>(r));
    logrs.push_back(std::log(static_cast<double>(r)));
    logc.push_back(std::log(static_cast<double>(counts[r])));
  }
  const LinearFit exp_fit = linear_fit(rs, logc);
  const LinearFit poly_fit = linear_fit(logrs, logc);
  GrowthFit g;
  g.resid_exp = exp_fit.ss_resid;
  g.resid_poly = poly_fit.ss_resid;
  if (exp_fit.ss_resid < poly_fit.ss_resid) {
    g.model = GrowthModel::exponential;
    g.degree_or_rate = exp_fit.slope;
    g.corr = exp_fit.corr;
  } else {
    g.model = GrowthModel::polynomial;
    g.degree_or_rate = poly_fit.slope;
    g.corr = poly_fit.corr;
  }
  return g;
}

struct SupportLineFit {
  double slope = 0.0;      // C
  double intercept = 0.0;  // A
  std::size_t n_samples = 0;
};

// Largest line y = C x + A lying under every sample point, "largest"
// meaning it maximizes the value at the mean abscissa. Computed from the
// lower convex hull; the optimum is the hull edge spanning the mean.
// Violations are impossible by construction.
inline SupportLineFit support_line_fit(std::vector<std::pair<double, double>> pts) {
  if (pts.empty()) throw PreconditionError("support-line fit needs samples");
  std::sort(pts.begin(), pts.end());
  // Per abscissa only the minimal ordinate constrains.
  std::vector<std::pair<double, double>> mins;
  for (const auto& p : pts) {
    if (!mins.empty() && mins.back().first == p.first) {
      mins.back().second = std::min(mins.back().second, p.second);
    } else {
      mins.push_back(p);
    }
  }
  if (mins.size() < 2) {
    throw PreconditionError("support-line fit is undefined: fewer than two distinct abscissae");
  }
  double xbar = 0.0;
  for (const auto& p : pts) xbar += p.first;
  xbar /= static_cast<double>(pts.size());

  std::vector<std::pair<double, double>> hull;
  for (const auto& p : mins) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // Drop b if it lies on or above segment a->p.
      if ((b.second - a.second) * (p.first - a.first) >=
          (p.second - a.second) * (b.first - a.first)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }

  SupportLineFit f;
  f.n_samples = pts.size();
  if (hull.size() == 1) {
    f.slope = 0.0;
    f.intercept = hull[0].second;
    return f;
  }
  std::size_t edge = hull.size() - 2;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    if (hull[i].first <= xbar && xbar <= hull[i + 1].first) {
      edge = i;
      break;
    }
  }
  f.slope = (hull[edge + 1].second - hull[edge].second) /
            (hull[edge + 1].first - hull[edge].first);
  f.intercept = hull[edge].second - f.slope * hull[edge].first;
  return f;
}

struct ExpBoundFit {
  double b = 1.0;      // B
  double alpha = 1.0;  // minimal alpha with f(r) <= B * alpha^r given B = f(0)
};

// Exponential majorant for a nondecreasing series with f(0) >= 1:
// B = f(0) and alpha = max_r (f(r)/B)^{1/r}, so the bound holds at every
// computed radius and is tight at one of them.
inline ExpBoundFit fit_exp_bound(const std::vector<std::uint64_t>& series) {
  if (series.empty() || series[0] == 0) {
    throw PreconditionError("exponential bound fit needs a series with f(0) >= 1");
  }
  ExpBoundFit f;
  f.b = static_cast<double>(series[0]);
  f.alpha = 1.0;
  for (std::size_t r = 1; r < series.size(); ++r) {
    const double ratio = static_cast<double>(series[r]) / f.b;
    if (ratio > 0.0) {
      f.alpha = std::max(f.alpha, std::pow(ratio, 1.0 / static_cast<double>(r)));
    }
  }
  return f;
}

}  // namespace pnphi
