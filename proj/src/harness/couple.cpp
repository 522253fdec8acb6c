#include <array>
#include <cmath>
#include <sstream>

#include "harness/replicas.hpp"
#include "rings/harness.hpp"
#include "rings/lazywalk.hpp"
#include "rings/prf.hpp"

namespace rings::harness {

namespace {

enum Class { kInterior = 0, kMinus = 1, kPlus = 2 };
constexpr const char* kClassNames[3] = {"interior", "minus_face", "plus_face"};

int class_of(const Point& p, const Dims& dims) {
  const int layer = p[dims.d - 1];
  if (layer == 0) return kMinus;
  if (layer == dims.n - 1) return kPlus;
  return kInterior;
}

// Cell of the move a -> b: 2 axis + (delta > 0), or 2d for a stay.
int cell_of(const Point& a, const Point& b, const Dims& dims) {
  if (a == b) return 2 * dims.d;
  for (int axis = 0; axis < dims.d; ++axis) {
    for (int delta : {-1, 1}) {
      if (shifted(a, axis, delta, dims) == b) return 2 * axis + (delta > 0 ? 1 : 0);
    }
  }
  throw std::logic_error("orbit made a horizontal move longer than one lattice step");
}

bool loops_at(const std::vector<Point>& h, std::uint64_t t, const Dims& dims) {
  const auto n = static_cast<std::uint64_t>(dims.n);
  for (std::uint64_t back = n; back <= t; back += n) {
    if (torus_distance(h[t], h[t - back], dims) <= kProximityRadius) return true;
  }
  return false;
}

bool meets_at(const std::vector<Point>& a, const std::vector<Point>& b, std::uint64_t offset, std::uint64_t t,
              const Dims& dims) {
  const auto n = static_cast<std::uint64_t>(dims.n);
  for (std::uint64_t back = offset; back <= t; back += n) {
    if (torus_distance(a[t], b[t - back], dims) <= kProximityRadius) return true;
  }
  return false;
}

struct StartResult {
  std::uint64_t seed = 0;
  std::uint64_t start = 0;
  std::uint64_t loop_time = 0;  // 0 = none within the horizon
  std::uint64_t steps = 0;
  bool truncation_ok = true;
  std::vector<std::array<std::uint64_t, 2 * kMaxDim + 1>> counts;
  std::vector<std::uint8_t> moved_x;
  std::vector<std::uint8_t> moved_y;
};

}  // namespace

Report run_couple(const ExperimentConfig& c) {
  c.validate();
  const Dims dims = c.dims();
  check_feasible(dims);
  Report rep;
  rep.experiment = "couple";
  rep.config = config_json(c);
  const double nu = c.field == FieldKind::random ? kappa(c.mu, c.d) : 0.0;
  const std::uint64_t horizon = c.horizon.value_or(dims.site_count());
  const int cells = 2 * dims.d + 1;

  const auto outs = map_replicas<StartResult>(c.starts, c.threads, [&](std::uint64_t r) {
    StartResult o;
    o.seed = derive_seed(c.seed, r);
    o.counts.assign(3, {});
    const ScattererField field = replica_field(c, dims, o.seed, Storage::key_derived);
    CounterRng rng(o.seed, 0, StreamTag::start);
    const std::uint64_t sx = rng.below(dims.site_count());
    std::uint64_t sy = sx;
    while (sy == sx) sy = rng.below(dims.site_count());
    o.start = sx;

    // Track of x truncated at its loop time.
    Site x = site_from_index(sx, dims);
    std::vector<Point> hx{x.i};
    std::uint64_t end = horizon;
    for (std::uint64_t t = 1; t <= horizon; ++t) {
      x = step(field, x);
      hx.push_back(x.i);
      if (loops_at(hx, t, dims)) {
        o.loop_time = t;
        end = t;
        break;
      }
    }
    o.steps = end;
    o.truncation_ok = o.loop_time == 0 || hx.size() == o.loop_time + 1;
    for (std::uint64_t s = 0; s < end; ++s) {
      ++o.counts[static_cast<std::size_t>(class_of(hx[s], dims))]
               [static_cast<std::size_t>(cell_of(hx[s], hx[s + 1], dims))];
    }

    // Two orbits truncated at their first proximity or either loop time.
    Site a = site_from_index(sx, dims);
    Site b = site_from_index(sy, dims);
    const auto off_ab = static_cast<std::uint64_t>(((b.k - a.k) % dims.n + dims.n) % dims.n);
    const auto off_ba = static_cast<std::uint64_t>(((a.k - b.k) % dims.n + dims.n) % dims.n);
    std::vector<Point> ha{a.i}, hb{b.i};
    if (meets_at(ha, hb, off_ab, 0, dims) || meets_at(hb, ha, off_ba, 0, dims)) return o;
    for (std::uint64_t t = 1; t <= horizon; ++t) {
      a = step(field, a);
      b = step(field, b);
      ha.push_back(a.i);
      hb.push_back(b.i);
      o.moved_x.push_back(ha[t] != ha[t - 1]);
      o.moved_y.push_back(hb[t] != hb[t - 1]);
      if (loops_at(ha, t, dims) || loops_at(hb, t, dims) || meets_at(ha, hb, off_ab, t, dims) ||
          meets_at(hb, ha, off_ba, t, dims)) {
        break;
      }
    }
    return o;
  });

  std::vector<std::array<std::uint64_t, 2 * kMaxDim + 1>> counts(3);
  std::vector<double> mx, my;
  bool truncation_ok = true;
  std::uint64_t looped = 0;
  std::ostringstream census;
  census << "start,seed,site,loop_time,steps\n";
  for (std::uint64_t r = 0; r < outs.size(); ++r) {
    const StartResult& o = outs[r];
    for (int cl = 0; cl < 3; ++cl) {
      for (int k = 0; k < cells; ++k) counts[cl][k] += o.counts[cl][k];
    }
    for (std::size_t s = 0; s < o.moved_x.size(); ++s) {
      mx.push_back(o.moved_x[s]);
      my.push_back(o.moved_y[s]);
    }
    truncation_ok = truncation_ok && o.truncation_ok;
    if (o.loop_time) ++looped;
    census << r << ',' << o.seed << ',' << o.start << ',' << o.loop_time << ',' << o.steps << '\n';
  }

  // Expected cell probabilities of the lazy walk with rate nu.
  std::array<std::vector<double>, 3> probs;
  std::array<Point, 3> representative;
  representative[kMinus][dims.d - 1] = 0;
  representative[kPlus][dims.d - 1] = dims.n - 1;
  representative[kInterior][dims.d - 1] = std::min(1, dims.n - 1);
  for (int cl = 0; cl < 3; ++cl) {
    probs[cl].assign(static_cast<std::size_t>(cells), 0.0);
    for (const auto& [q, p] : walk_step_distribution<double>(dims, Geometry::slab, nu, representative[cl])) {
      probs[cl][static_cast<std::size_t>(cell_of(representative[cl], q, dims))] += p;
    }
  }

  int tested = 0;
  for (int cl = 0; cl < 3; ++cl) {
    std::uint64_t total = 0;
    for (int k = 0; k < cells; ++k) total += counts[cl][k];
    if (total > 0 && !(cl == kInterior && dims.n == 2)) ++tested;
  }
  const double alpha = c.tol.chi_alpha / std::max(1, tested);
  bool chi_ok = true;
  bool dir_ok = true;
  bool enough = true;
  nlohmann::ordered_json classes = nlohmann::ordered_json::array();
  for (int cl = 0; cl < 3; ++cl) {
    std::uint64_t total = 0;
    for (int k = 0; k < cells; ++k) total += counts[cl][k];
    if (total == 0) continue;
    const std::span<const std::uint64_t> obs(counts[cl].data(), static_cast<std::size_t>(cells));
    const ChiSquare chi = chi_square_test(obs, probs[cl]);
    nlohmann::ordered_json cj;
    cj["class"] = kClassNames[cl];
    cj["steps"] = total;
    cj["observed"] = std::vector<std::uint64_t>(obs.begin(), obs.end());
    cj["expected_probability"] = probs[cl];
    cj["chi_square"] = {{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}};
    if (chi.p_value < alpha) chi_ok = false;
    nlohmann::ordered_json dirs = nlohmann::ordered_json::array();
    for (int k = 0; k < cells - 1; ++k) {
      const double p = probs[cl][static_cast<std::size_t>(k)];
      const double freq = static_cast<double>(counts[cl][k]) / static_cast<double>(total);
      if (p <= 0.0) continue;
      const double sigma = binomial_sigma(p, total);
      const bool ok = std::abs(freq - p) <= c.tol.sigma * sigma;
      if (!ok) dir_ok = false;
      if (p * static_cast<double>(total) < 5.0) enough = false;
      dirs.push_back({{"cell", k}, {"frequency", freq}, {"expected", p}, {"sigma", sigma}, {"pass", ok}});
    }
    cj["directions"] = dirs;
    classes.push_back(cj);
  }

  const double rho = correlation(mx, my);
  const double rho_radius = mx.empty() ? 0.0 : c.tol.sigma / std::sqrt(static_cast<double>(mx.size()));

  rep.results["nu"] = nu;
  rep.results["starts"] = c.starts;
  rep.results["horizon"] = horizon;
  rep.results["loops_within_horizon"] = looped;
  rep.results["classes"] = classes;
  rep.results["bonferroni_alpha"] = alpha;
  rep.results["pair_steps"] = mx.size();
  rep.results["step_correlation"] = rho;
  rep.add("chi_square_vs_lazy_walk", chi_ok, {{"alpha_per_class", alpha}});
  rep.add("per_direction_within_sigma", dir_ok, {{"sigma", c.tol.sigma}});
  rep.add("sufficient_samples", enough);
  rep.add("tracks_truncated_at_loop_time", truncation_ok);
  rep.add("pair_step_correlation_near_zero", std::abs(rho) <= rho_radius, {{"correlation", rho}, {"radius", rho_radius}});
  rep.csv["census.csv"] = census.str();
  return rep;
}

}  // namespace rings::harness
