#include <map>
#include <sstream>

#include "harness/replicas.hpp"
#include "rings/harness.hpp"
#include "rings/prf.hpp"

namespace rings::harness {

namespace {

struct OrbitsReplica {
  std::uint64_t seed = 0;
  std::map<std::uint64_t, std::uint64_t> periods;
  std::uint64_t orbits = 0;
  std::uint64_t period_sum = 0;
  std::uint64_t excursions = 0;
  std::uint64_t internal = 0;
  CrossingCensus census;
};

}  // namespace

Report run_orbits(const ExperimentConfig& c) {
  c.validate();
  const Dims dims = c.dims();
  check_feasible(dims);
  Report rep;
  rep.experiment = "orbits";
  rep.config = config_json(c);

  const auto outs = map_replicas<OrbitsReplica>(c.replicas, c.threads, [&](std::uint64_t r) {
    OrbitsReplica o;
    o.seed = derive_seed(c.seed, r);
    const Dynamics dyn(replica_field(c, dims, o.seed));
    const std::uint64_t count = dims.site_count();
    std::vector<std::uint8_t> seen(count, 0);
    for (std::uint64_t s = 0; s < count; ++s) {
      if (seen[s]) continue;
      std::uint64_t period = 0;
      std::uint64_t cur = s;
      do {
        seen[cur] = 1;
        cur = dyn.forward(cur);
        ++period;
      } while (cur != s);
      ++o.periods[period];
      ++o.orbits;
      o.period_sum += period;
    }
    const Partition part = excursions(dyn);
    o.excursions = part.excursions.size();
    o.internal = part.internal.size();
    o.census = crossing_census(part);
    return o;
  });

  std::map<std::uint64_t, std::uint64_t> hist;
  std::uint64_t ll = 0, rr = 0, lr = 0, rl = 0, internal = 0, orbits = 0;
  bool sum_ok = true, count_ok = true, balance_ok = true;
  std::ostringstream census;
  census << "replica,seed,n_cross,orbits,left_left,right_right,left_right,right_left,internal\n";
  for (std::uint64_t r = 0; r < outs.size(); ++r) {
    const OrbitsReplica& o = outs[r];
    for (const auto& [p, k] : o.periods) hist[p] += k;
    ll += o.census.left_left;
    rr += o.census.right_right;
    lr += o.census.left_right;
    rl += o.census.right_left;
    internal += o.internal;
    orbits += o.orbits;
    sum_ok = sum_ok && o.period_sum == dims.site_count();
    count_ok = count_ok && o.excursions == 2 * dims.box_points();
    balance_ok = balance_ok && o.census.left_right == o.census.right_left;
    census << r << ',' << o.seed << ',' << o.census.n_cross << ',' << o.orbits << ',' << o.census.left_left << ','
           << o.census.right_right << ',' << o.census.left_right << ',' << o.census.right_left << ',' << o.internal
           << '\n';
  }
  std::ostringstream series;
  series << "period,count\n";
  nlohmann::ordered_json hist_json = nlohmann::ordered_json::array();
  for (const auto& [p, k] : hist) {
    series << p << ',' << k << '\n';
    hist_json.push_back({p, k});
  }

  rep.results["sites_per_replica"] = dims.site_count();
  rep.results["orbits"] = orbits;
  rep.results["period_histogram"] = hist_json;
  rep.results["kinds"] = {{"left_left", ll}, {"right_right", rr}, {"left_right", lr}, {"right_left", rl},
                          {"internal", internal}};
  rep.add("periods_sum_to_sites", sum_ok, {{"sites", dims.site_count()}});
  rep.add("one_excursion_per_boundary_site", count_ok, {{"expected", 2 * dims.box_points()}});
  rep.add("left_right_eq_right_left", balance_ok);
  rep.csv["series.csv"] = series.str();
  rep.csv["census.csv"] = census.str();
  return rep;
}

}  // namespace rings::harness
