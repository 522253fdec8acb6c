#include <algorithm>
#include <cmath>
#include <sstream>

#include "harness/replicas.hpp"
#include "rings/harness.hpp"
#include "rings/prf.hpp"

namespace rings::harness {

namespace {

struct FickReplica {
  std::uint64_t seed = 0;
  std::uint64_t n_cross = 0;
};

nlohmann::ordered_json stats_json(const EnsembleStats& s) {
  nlohmann::ordered_json j;
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["radius3"] = s.radius3;
  return j;
}

}  // namespace

Report run_fick(const ExperimentConfig& c) {
  c.validate();
  Report rep;
  rep.experiment = "fick";
  rep.config = config_json(c);

  std::vector<int> sizes = c.sizes.empty() ? std::vector<int>{c.n} : c.sizes;
  if (std::find(sizes.begin(), sizes.end(), c.n) == sizes.end()) sizes.push_back(c.n);
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (int n : sizes) check_feasible(Dims(c.d, n));

  const double k = c.field == FieldKind::random ? kappa(c.mu, c.d) : 0.0;
  const double drho = c.reservoir.rho_minus - c.reservoir.rho_plus;
  rep.results["kappa"] = k;
  rep.results["target"] = {{"crossing_statistic", k}, {"n_times_current", k * drho}};

  std::string census_csv = "N,replica,seed,n_cross\n";
  std::string series_csv = "t,l,J,replica,seed\n";
  nlohmann::ordered_json per_size = nlohmann::ordered_json::array();
  std::vector<double> gaps;
  std::vector<double> variances;

  for (int n : sizes) {
    const Dims dims(c.d, n);
    const auto outs = map_replicas<FickReplica>(c.replicas, c.threads, [&](std::uint64_t r) {
      FickReplica o;
      o.seed = derive_seed(c.seed, r, static_cast<std::uint32_t>(n));
      const ScattererField field = replica_field(c, dims, o.seed);
      const Dynamics dyn(field);
      o.n_cross = crossing_census(excursions(dyn)).n_cross;
      return o;
    });
    const double nd = static_cast<double>(dims.box_points());
    std::vector<double> crossing_stat, current_stat, scaled;
    for (std::uint64_t r = 0; r < outs.size(); ++r) {
      const double nc = static_cast<double>(outs[r].n_cross);
      crossing_stat.push_back((n - 1) * nc / nd);
      current_stat.push_back(n * nc / nd * drho);
      scaled.push_back(nc * static_cast<double>(n) / nd);
      census_csv += std::to_string(n) + "," + std::to_string(r) + "," + std::to_string(outs[r].seed) + "," +
                    std::to_string(outs[r].n_cross) + "\n";
      if (n == c.n) {
        std::ostringstream row;
        row.precision(17);
        for (int l = 0; l + 1 < n; ++l) {
          row << dims.site_count() << ',' << l << ',' << nc / nd * drho << ',' << r << ',' << outs[r].seed << '\n';
        }
        series_csv += row.str();
      }
    }
    const EnsembleStats cs = summarize(crossing_stat);
    const EnsembleStats js = summarize(current_stat);
    const EnsembleStats vs = summarize(scaled);
    gaps.push_back(std::abs(cs.mean - k));
    variances.push_back(vs.variance);
    nlohmann::ordered_json entry;
    entry["N"] = n;
    entry["sites"] = dims.site_count();
    entry["crossing_statistic"] = stats_json(cs);
    entry["n_times_current"] = stats_json(js);
    entry["n_cross_over_N_d_minus_1"] = stats_json(vs);
    entry["gap_to_kappa"] = std::abs(cs.mean - k);
    per_size.push_back(entry);

    if (n == c.n) {
      const double allowed = c.tol.sigma / 3.0 * cs.radius3 + c.tol.fick_relative * k;
      rep.add("crossing_statistic_near_kappa", std::abs(cs.mean - k) <= allowed,
              {{"N", n}, {"mean", cs.mean}, {"kappa", k}, {"allowed", allowed}});
    }
  }
  rep.results["sizes"] = per_size;

  if (sizes.size() >= 2) {
    bool gap_ok = true;
    bool var_ok = true;
    for (std::size_t s = 1; s < sizes.size(); ++s) {
      if (gaps[s] > gaps[s - 1]) gap_ok = false;
      if (!(variances[s] < variances[s - 1])) var_ok = false;
    }
    rep.add("gap_non_increasing_in_N", gap_ok, {{"sizes", sizes}, {"gaps", gaps}});
    rep.add("variance_decreasing_in_N", var_ok, {{"sizes", sizes}, {"variances", variances}});
  }

  if (c.histories > 0) {
    // Monte Carlo check of the stationary current of each replica field.
    const Dims dims = c.dims();
    const std::uint64_t t = dims.site_count();
    bool ok = true;
    double worst = 0.0;
    nlohmann::ordered_json fields = nlohmann::ordered_json::array();
    for (std::uint64_t r = 0; r < c.replicas; ++r) {
      const std::uint64_t seed = derive_seed(c.seed, r, static_cast<std::uint32_t>(c.n));
      const ScattererField field = replica_field(c, dims, seed);
      const CurrentEstimate est = mc_current(field, c.reservoir, t, c.histories, seed, c.threads);
      const CrossingCensus census = crossing_census(excursions(Dynamics(field)));
      const double stationary =
          static_cast<double>(census.n_cross) * drho / static_cast<double>(dims.box_points());
      nlohmann::ordered_json fj;
      fj["replica"] = r;
      fj["stationary"] = stationary;
      fj["mean"] = est.mean;
      for (std::size_t l = 0; l < est.mean.size(); ++l) {
        const double radius = c.tol.sigma * hoeffding_radius(est.range[l], c.histories);
        const double dev = std::abs(est.mean[l] - stationary);
        if (dev > radius || std::abs(est.exact[l] - stationary) > c.tol.exact_abs) ok = false;
        if (radius > 0) worst = std::max(worst, dev / radius);
      }
      fields.push_back(fj);
    }
    rep.results["stationary_current_mc"] = {{"t", t}, {"histories", c.histories}, {"fields", fields}};
    rep.add("stationary_current_matches_oracle", ok, {{"worst_deviation_in_radii", worst}});
  }

  rep.csv["census.csv"] = std::move(census_csv);
  rep.csv["series.csv"] = std::move(series_csv);
  return rep;
}

}  // namespace rings::harness
