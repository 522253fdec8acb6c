#include "rings/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <limits>

namespace rings {

EnsembleStats summarize(std::span<const double> values) {
  EnsembleStats s;
  s.n = values.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(s.n - 1);
  }
  s.radius3 = 3.0 * std::sqrt(s.variance / static_cast<double>(s.n));
  return s;
}

double binomial_sigma(double p, std::uint64_t n) {
  if (n == 0) throw std::domain_error("binomial_sigma with n = 0");
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double hoeffding_radius(double range, std::uint64_t m) {
  if (m == 0) throw std::domain_error("hoeffding_radius with m = 0");
  return range / std::sqrt(2.0 * static_cast<double>(m));
}

double chi_square_sf(double stat, double dof) {
  if (!std::isfinite(stat)) return 0.0;
  if (dof <= 0) return 1.0;
  if (stat <= 0) return 1.0;
  const boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

ChiSquare chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> probs) {
  if (observed.size() != probs.size()) throw std::invalid_argument("chi_square_test: size mismatch");
  std::uint64_t total = 0;
  for (auto o : observed) total += o;
  ChiSquare r;
  if (total == 0) return r;
  int cells = 0;
  for (std::size_t c = 0; c < observed.size(); ++c) {
    const double expected = probs[c] * static_cast<double>(total);
    if (expected <= 0.0) {
      if (observed[c] != 0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    const double diff = static_cast<double>(observed[c]) - expected;
    r.statistic += diff * diff / expected;
    ++cells;
  }
  r.dof = cells - 1;
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line needs two or more points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("correlation: size mismatch");
  if (a.empty()) return 0.0;
  const auto n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace rings
