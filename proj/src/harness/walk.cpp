#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "harness/replicas.hpp"
#include "rings/harness.hpp"
#include "rings/lazywalk.hpp"
#include "rings/prf.hpp"

namespace rings::harness {

namespace {

constexpr std::uint64_t kMaxWalkSteps = 100000000;
constexpr int kTrendDim = 7;

// Seed purposes of the Monte Carlo sections.
enum Purpose : std::uint32_t {
  kMgf = 11,
  kGambler = 12,
  kExitMean = 13,
  kTail = 14,
  kLoop = 15,
  kIntersect = 16,
};

Point at_layer(int layer0, const Dims& dims) {
  Point p{};
  p[dims.d - 1] = layer0;
  return p;
}

std::uint64_t exit_time(const WalkParams& wp, const Point& start, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  const WalkPath path = simulate_to_exit(wp, start, rng, kMaxWalkSteps);
  if (!path.tau_b) throw std::runtime_error("walk did not exit within the step cap");
  return *path.tau_b;
}

nlohmann::ordered_json stats_json(const EnsembleStats& s) {
  return {{"n", s.n}, {"mean", s.mean}, {"variance", s.variance}, {"radius3", s.radius3}};
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

}  // namespace

Report run_walk(const ExperimentConfig& c) {
  c.validate();
  Report rep;
  rep.experiment = "walk";
  rep.config = config_json(c);
  const double nu = c.nu.value_or(kappa(c.mu, c.d));
  const std::uint64_t walks = c.walks;
  rep.results["nu"] = nu;
  rep.results["walks"] = walks;
  std::ostringstream series;
  series.precision(17);
  series << "section,N,x,value\n";

  // Closed form vs tridiagonal solve.
  {
    double worst = 0.0;
    bool zero_ok = true;
    for (int n : {4, 8, 16}) {
      const double lambda = nu / (static_cast<double>(n) * n);
      for (int x = 1; x <= n; ++x) {
        const double a = exit_mgf_analytic(x, lambda, n, nu);
        const double s = exit_mgf_solve(x, lambda, n, nu);
        worst = std::max(worst, std::abs(a - s));
        if (exit_mgf_analytic(x, 0.0, n, nu) != 1.0 || std::abs(exit_mgf_solve(x, 0.0, n, nu) - 1.0) > c.tol.exact_abs) {
          zero_ok = false;
        }
        series << "mgf," << n << ',' << x << ',' << a << '\n';
      }
    }
    rep.results["mgf_grid_max_abs"] = worst;
    rep.add("mgf_analytic_matches_solve", worst <= c.tol.mgf_abs, {{"max_abs", worst}, {"tolerance", c.tol.mgf_abs}});
    rep.add("mgf_at_zero_is_one", zero_ok);
  }

  // Monte Carlo MGF at N = 6 from the middle.
  {
    const int n = 6;
    const int x = 3;
    const double lambda = nu / 36.0;
    const WalkParams wp{nu, Dims(c.d, n), Geometry::slab};
    const auto taus = map_replicas<double>(walks, c.threads, [&](std::uint64_t w) {
      return std::exp(lambda * static_cast<double>(exit_time(wp, at_layer(x - 1, wp.dims), derive_seed(c.seed, w, kMgf))));
    });
    const EnsembleStats s = summarize(taus);
    const double a = exit_mgf_analytic(x, lambda, n, nu);
    const double v = exit_mgf_solve(x, lambda, n, nu);
    const double radius = c.tol.sigma * std::sqrt(s.variance / static_cast<double>(s.n));
    rep.results["mgf_monte_carlo"] = {{"N", n}, {"layer", x}, {"lambda", lambda}, {"estimate", stats_json(s)},
                                      {"analytic", a}, {"solve", v}};
    rep.add("mgf_monte_carlo_within_sigma", std::abs(s.mean - a) <= radius && std::abs(s.mean - v) <= radius,
            {{"estimate", s.mean}, {"analytic", a}, {"radius", radius}});
  }

  // Gambler's ruin: exact table and simulated crossings.
  {
    double worst = 0.0;
    for (int n = 3; n <= 10; ++n) {
      for (int x = 1; x <= n; ++x) worst = std::max(worst, std::abs(gambler_crossing(x, n) - gambler_crossing_solve(x, n, nu)));
    }
    rep.add("gambler_exact_matches_solve", worst <= c.tol.exact_abs, {{"max_abs", worst}});
    bool mc_ok = true;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int n : {3, 5, 9}) {
      const WalkParams wp{nu, Dims(c.d, n), Geometry::slab};
      const auto hits = map_replicas<std::uint8_t>(walks, c.threads, [&](std::uint64_t w) -> std::uint8_t {
        CounterRng rng(derive_seed(c.seed, w, kGambler + 100 * static_cast<std::uint32_t>(n)), 0);
        const WalkPath path = simulate_to_exit(wp, at_layer(1, wp.dims), rng, kMaxWalkSteps, true);
        if (!path.tau_b) throw std::runtime_error("walk did not exit within the step cap");
        return path.positions.back()[wp.dims.d - 1] == n - 1;
      });
      std::uint64_t crossed = 0;
      for (auto h : hits) crossed += h;
      const double p = gambler_crossing(2, n);
      const double freq = static_cast<double>(crossed) / static_cast<double>(walks);
      const double radius = c.tol.sigma * binomial_sigma(p, walks);
      const bool ok = std::abs(freq - p) <= radius;
      mc_ok = mc_ok && ok;
      rows.push_back({{"N", n}, {"frequency", freq}, {"exact", p}, {"radius", radius}, {"pass", ok}});
      series << "gambler," << n << ",2," << freq << '\n';
    }
    rep.results["gambler"] = rows;
    rep.add("gambler_monte_carlo_within_sigma", mc_ok);
  }

  // Mean exit time from the layer next to a face: exact (N - 2) / (2 nu), at most N / (2 nu).
  {
    bool ok = true;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int n : {4, 8, 16}) {
      const WalkParams wp{nu, Dims(c.d, n), Geometry::slab};
      const auto taus = map_replicas<double>(walks, c.threads, [&](std::uint64_t w) {
        return static_cast<double>(
            exit_time(wp, at_layer(1, wp.dims), derive_seed(c.seed, w, kExitMean + 100 * static_cast<std::uint32_t>(n))));
      });
      const EnsembleStats s = summarize(taus);
      const double exact = (n - 2) / (2.0 * nu);
      const double radius = c.tol.sigma * std::sqrt(s.variance / static_cast<double>(s.n));
      const bool row_ok = std::abs(s.mean - exact) <= radius && s.mean <= n / (2.0 * nu) + radius;
      ok = ok && row_ok;
      rows.push_back({{"N", n}, {"estimate", stats_json(s)}, {"exact", exact}, {"mean_over_N", s.mean / n},
                      {"pass", row_ok}});
      series << "exit_mean," << n << ",2," << s.mean << '\n';
    }
    rep.results["exit_mean"] = rows;
    rep.add("exit_mean_linear_in_N", ok);
  }

  // Exit-time tail from the middle of an N = 8 slab.
  {
    const int n = 8;
    const WalkParams wp{nu, Dims(c.d, n), Geometry::slab};
    const auto taus = map_replicas<std::uint64_t>(walks, c.threads, [&](std::uint64_t w) {
      return exit_time(wp, at_layer(n / 2 - 1, wp.dims), derive_seed(c.seed, w, kTail));
    });
    std::uint64_t tmax = 0;
    for (auto t : taus) tmax = std::max(tmax, t);
    std::vector<std::uint64_t> hist(tmax + 2, 0);
    for (auto t : taus) ++hist[t];
    std::vector<double> fx, fy;
    std::uint64_t alive = walks;
    for (std::uint64_t t = 0; t <= tmax; ++t) {
      alive -= hist[t];
      const double surv = static_cast<double>(alive) / static_cast<double>(walks);
      // Fit where the slowest mode dominates and counts are large.
      if (surv <= 0.5 && alive >= 100) {
        fx.push_back(static_cast<double>(t));
        fy.push_back(std::log(surv));
      }
    }
    const double rate = -std::log(1.0 - 2.0 * nu * (1.0 - std::cos(std::numbers::pi / (n - 1))));
    nlohmann::ordered_json tail{{"N", n}, {"exact_rate", rate}, {"points", fx.size()}};
    bool ok = false;
    if (fx.size() >= 2) {
      const LineFit fit = fit_line(fx, fy);
      tail["slope"] = fit.slope;
      tail["intercept"] = fit.intercept;
      tail["relative_error"] = std::abs(-fit.slope - rate) / rate;
      ok = std::abs(-fit.slope - rate) <= c.tol.tail_rate * rate;
    }
    rep.results["exit_tail"] = tail;
    rep.add("exit_tail_rate", ok, tail);
  }

  // Loop-before-exit and intersection-before-exit trends in dimension 7.
  {
    const double nu7 = std::min(nu, 1.0 / (2.0 * kTrendDim));
    rep.results["trend_nu"] = nu7;
    std::vector<double> loop_p;
    nlohmann::ordered_json loop_rows = nlohmann::ordered_json::array();
    for (int n : {4, 6, 8}) {
      const WalkParams wp{nu7, Dims(kTrendDim, n), Geometry::slab};
      const auto hit = map_replicas<std::uint8_t>(walks, c.threads, [&](std::uint64_t w) -> std::uint8_t {
        const std::uint64_t seed = derive_seed(c.seed, w, kLoop + 100 * static_cast<std::uint32_t>(n));
        const Point start = at_layer(1, wp.dims);
        const std::uint64_t tau_b = exit_time(wp, start, seed);
        CounterRng rng(seed, 0);
        return walk_loop_time(wp, start, static_cast<std::uint64_t>(n), tau_b, rng).has_value();
      });
      std::uint64_t k = 0;
      for (auto h : hit) k += h;
      const double p = static_cast<double>(k) / static_cast<double>(walks);
      loop_p.push_back(p);
      loop_rows.push_back({{"N", n}, {"p_loop_before_exit", p}});
      series << "loop_before_exit," << n << ",2," << p << '\n';
    }
    rep.results["loop_before_exit"] = loop_rows;
    rep.add("loop_before_exit_decreasing_in_N", strictly_decreasing(loop_p), {{"p", loop_p}});

    std::vector<double> meet_p;
    nlohmann::ordered_json meet_rows = nlohmann::ordered_json::array();
    for (int n : {4, 6}) {
      const Dims dims(kTrendDim, n);
      const WalkParams wp{nu7, dims, Geometry::slab};
      const double min_dist = std::pow(static_cast<double>(n), 0.75);
      const auto hit = map_replicas<std::uint8_t>(walks, c.threads, [&](std::uint64_t w) -> std::uint8_t {
        const std::uint64_t seed = derive_seed(c.seed, w, kIntersect + 100 * static_cast<std::uint32_t>(n));
        CounterRng pick(seed, 0, StreamTag::start);
        auto draw = [&] {
          Point p{};
          for (int a = 0; a + 1 < dims.d; ++a) p[a] = static_cast<int>(pick.below(static_cast<std::uint64_t>(n)));
          p[dims.d - 1] = 1 + static_cast<int>(pick.below(static_cast<std::uint64_t>(n - 2)));
          return p;
        };
        const Point a = draw();
        Point b = draw();
        while (torus_distance(a, b, dims) <= min_dist) b = draw();
        const std::uint64_t sa = derive_seed(seed, 1);
        const std::uint64_t sb = derive_seed(seed, 2);
        const std::uint64_t tb = std::max(exit_time(wp, a, sa), exit_time(wp, b, sb));
        if (tb == 0) return 0;
        CounterRng ra(sa, 0), rb(sb, 0);
        return walk_intersection_time(wp, a, b, static_cast<std::uint64_t>(n), tb - 1, ra, rb).has_value();
      });
      std::uint64_t k = 0;
      for (auto h : hit) k += h;
      const double p = static_cast<double>(k) / static_cast<double>(walks);
      meet_p.push_back(p);
      meet_rows.push_back({{"N", n}, {"p_intersect_before_exit", p}, {"min_distance", min_dist}});
      series << "intersect_before_exit," << n << ",0," << p << '\n';
    }
    rep.results["intersect_before_exit"] = meet_rows;
    rep.add("intersect_before_exit_decreasing_in_N", strictly_decreasing(meet_p), {{"p", meet_p}});
  }

  rep.csv["series.csv"] = series.str();
  return rep;
}

}  // namespace rings::harness
