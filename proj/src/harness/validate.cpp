#include <algorithm>
#include <cmath>
#include <sstream>

#include "harness/replicas.hpp"
#include "rings/harness.hpp"
#include "rings/prf.hpp"

namespace rings::harness {

namespace {

const std::vector<std::string> kValidateChecks{
    "bijective",        "self_avoiding",   "orbits_disjoint", "partition",        "crossing_balance",
    "n_plus_eq_n_minus", "current_formulas", "remainder_bound", "remainder_vanishes"};

std::string site_witness(std::uint64_t s, const Dims& dims) { return "site " + to_string(site_from_index(s, dims), dims); }

}  // namespace

void FieldValidation::fail(const std::string& check, const std::string& what) {
  if (pass[check]) {
    pass[check] = false;
    witness[check] = what;
  }
}

FieldValidation validate_dynamics(const Dynamics& dyn) {
  FieldValidation v;
  for (const char* name : {"bijective", "self_avoiding", "orbits_disjoint", "crossing_balance"}) v.pass[name] = true;
  const Dims& dims = dyn.dims();
  const std::uint64_t count = dims.site_count();
  const auto table = dyn.forward_table();
  if (const auto bad = find_non_bijective(table)) {
    v.fail("bijective", site_witness(*bad, dims) + " maps onto an image already taken or out of range");
  }
  if (!v.pass["bijective"]) {
    v.fail("self_avoiding", "not a permutation");
    v.fail("orbits_disjoint", "not a permutation");
    v.fail("crossing_balance", "not a permutation");
    return v;
  }
  std::vector<std::uint32_t> owner(count, UINT32_MAX);
  std::vector<std::int64_t> balance(static_cast<std::size_t>(dims.n - 1));
  for (std::uint64_t s = 0; s < count; ++s) {
    if (owner[s] != UINT32_MAX) continue;
    std::fill(balance.begin(), balance.end(), 0);
    std::uint64_t cur = s;
    std::uint64_t steps = 0;
    do {
      if (owner[cur] == s) {
        v.fail("self_avoiding", site_witness(cur, dims) + " repeats before the orbit of " + site_witness(s, dims) +
                                    " closes");
        break;
      }
      if (owner[cur] != UINT32_MAX) {
        v.fail("orbits_disjoint", site_witness(cur, dims) + " lies on two orbits");
        break;
      }
      owner[cur] = static_cast<std::uint32_t>(s);
      const int a = layer_of_index(cur, dims);
      const std::uint64_t nxt = table[cur];
      const int b = layer_of_index(nxt, dims);
      if (b == a + 1) ++balance[static_cast<std::size_t>(a)];
      if (b == a - 1) --balance[static_cast<std::size_t>(b)];
      cur = nxt;
      ++steps;
    } while (cur != s && steps <= count);
    if (steps > count) v.fail("self_avoiding", "orbit of " + site_witness(s, dims) + " longer than N^(d+1)");
    for (std::size_t l = 0; l < balance.size(); ++l) {
      if (balance[l] != 0) {
        v.fail("crossing_balance", "orbit of " + site_witness(s, dims) + " has net crossing " +
                                       std::to_string(balance[l]) + " on interface " + std::to_string(l));
      }
    }
  }
  return v;
}

FieldValidation validate_field(const ScattererField& field, const ReservoirParams& params, std::uint64_t seed,
                               std::uint64_t replica) {
  const Dims& dims = field.dims();
  const std::uint64_t count = dims.site_count();

  // F evaluated locally from the scatterers, independent of the tables.
  std::vector<std::uint32_t> local(count);
  bool roundtrip = true;
  std::string roundtrip_witness;
  for (std::uint64_t s = 0; s < count; ++s) {
    const Site x = site_from_index(s, dims);
    const Site y = step(field, x);
    local[s] = static_cast<std::uint32_t>(site_index(y, dims));
    if (roundtrip && inverse_step(field, y) != x) {
      roundtrip = false;
      roundtrip_witness = site_witness(s, dims) + ": inverse_step(step(x)) != x";
    }
  }
  FieldValidation v = validate_dynamics(Dynamics(dims, local));
  for (const auto& name : kValidateChecks) v.pass.try_emplace(name, true);
  if (!roundtrip) v.fail("bijective", roundtrip_witness);
  if (!v.pass["bijective"]) {
    for (const auto& name : kValidateChecks) v.fail(name, "dynamics not bijective");
    return v;
  }

  const Dynamics dyn(field);
  for (std::uint64_t s = 0; s < count; ++s) {
    if (dyn.forward(s) != local[s]) {
      v.fail("bijective", site_witness(s, dims) + ": tabulated and local step differ");
      break;
    }
  }

  const Partition part = excursions(dyn);
  {
    std::vector<std::uint8_t> hits(count, 0);
    for (std::uint32_t s : part.sites) {
      if (hits[s]++ != 0) v.fail("partition", site_witness(s, dims) + " appears twice");
    }
    if (part.sites.size() != count) v.fail("partition", "partition covers " + std::to_string(part.sites.size()) +
                                                            " of " + std::to_string(count) + " sites");
    std::uint64_t total = 0;
    for (const Segment& seg : part.excursions) {
      total += seg.length;
      for (std::uint64_t n = 0; n < seg.length; ++n) {
        const std::uint32_t s = part.sites[seg.begin + n];
        const int layer = layer_of_index(s, dims);
        const bool on_face = layer == 0 || layer == dims.n - 1;
        if (on_face != (n == 0)) {
          v.fail("partition", "excursion from " + site_witness(part.sites[seg.begin], dims) +
                                  " has a misplaced boundary point at step " + std::to_string(n));
        }
      }
    }
    for (const Segment& seg : part.internal) {
      total += seg.length;
      for (std::uint64_t n = 0; n < seg.length; ++n) {
        const int layer = layer_of_index(part.sites[seg.begin + n], dims);
        if (layer == 0 || layer == dims.n - 1) {
          v.fail("partition", "internal orbit of " + site_witness(part.sites[seg.begin], dims) + " touches a face");
        }
      }
    }
    if (part.excursions.size() != 2 * dims.box_points()) {
      v.fail("partition", "expected one excursion per boundary site");
    }
    if (total != count) v.fail("partition", "segment lengths do not sum to N^(d+1)");
  }

  const CrossingCensus census = crossing_census(part);
  if (census.left_right != census.right_left) {
    v.fail("n_plus_eq_n_minus", "LR=" + std::to_string(census.left_right) + " RL=" + std::to_string(census.right_left));
  }

  const TransportPlan plan(dyn);
  {
    OccupationState st = init_state(dims, params, derive_seed(seed, replica, 7));
    const std::uint64_t horizon = static_cast<std::uint64_t>(2 * dims.n + 2);
    for (std::uint64_t t = 0; t <= horizon; ++t) {
      for (int l = 0; l + 1 < dims.n; ++l) {
        try {
          const Rational j = current(st, plan, field, l);
          std::ostringstream row;
          row.precision(17);
          row << t << ',' << l << ',' << j.to_double() << ',' << replica << ',' << seed << '\n';
          v.series.push_back(row.str());
        } catch (const CurrentMismatch& e) {
          v.fail("current_formulas", e.what());
        }
      }
      evolve(st, plan, params, 1);
    }
  }

  std::uint64_t longest = 0;
  for (const Segment& seg : part.excursions) longest = std::max(longest, seg.length);
  for (int l = 0; l + 1 < dims.n; ++l) {
    for (std::uint64_t t = 0; t <= longest + 1; ++t) {
      const ExpectedCurrent e = expected_current_terms(part, census, l, t);
      const double rem = e.remainder(params);
      const double bound = remainder_bound(census, l, t, params);
      if (std::abs(rem) > bound + 1e-12) {
        v.fail("remainder_bound", "l=" + std::to_string(l) + " t=" + std::to_string(t) + ": |L|=" +
                                      std::to_string(std::abs(rem)) + " > " + std::to_string(bound));
      }
      if (t > longest && !e.remainder_vanishes()) {
        v.fail("remainder_vanishes", "l=" + std::to_string(l) + " t=" + std::to_string(t) + " past the longest excursion");
      }
    }
    const std::uint64_t tmax = count;
    const ExpectedCurrent e = expected_current_terms(part, census, l, tmax);
    if (!e.remainder_vanishes() || census.n_minus(l, tmax) != 0 || census.n_plus(l, tmax) != 0) {
      v.fail("remainder_vanishes", "l=" + std::to_string(l) + " at t=N^(d+1)");
    }
  }
  return v;
}

CurrentEstimate mc_current(const ScattererField& field, const ReservoirParams& params, std::uint64_t t,
                           std::uint64_t histories, std::uint64_t seed, unsigned threads) {
  const Dims& dims = field.dims();
  const Dynamics dyn(field);
  const TransportPlan plan(dyn);
  const Partition part = excursions(dyn);
  const CrossingCensus census = crossing_census(part);
  const int interfaces = dims.n - 1;
  const auto sums = map_replicas<std::vector<std::int64_t>>(histories, threads, [&](std::uint64_t h) {
    OccupationState st = init_state(dims, params, derive_seed(seed, h, 3));
    evolve(st, plan, params, t);
    std::vector<std::int64_t> num(static_cast<std::size_t>(interfaces));
    for (int l = 0; l < interfaces; ++l) num[static_cast<std::size_t>(l)] = current_delta_numerator(st, plan, l);
    return num;
  });
  CurrentEstimate est;
  const double scale = static_cast<double>(dims.box_points());
  for (int l = 0; l < interfaces; ++l) {
    std::int64_t total = 0;
    for (const auto& v : sums) total += v[static_cast<std::size_t>(l)];
    est.mean.push_back(static_cast<double>(total) / (static_cast<double>(histories) * scale));
    est.range.push_back(static_cast<double>(plan.active_sites(l)) / scale);
    est.exact.push_back(expected_current_exact(part, census, l, t, params));
  }
  return est;
}

Report run_validate(const ExperimentConfig& c) {
  c.validate();
  const Dims dims = c.dims();
  Report rep;
  rep.experiment = "validate";
  rep.config = config_json(c);
  struct Out {
    FieldValidation v;
    std::uint64_t seed = 0;
    std::uint64_t n_cross = 0;
  };
  const auto outs = map_replicas<Out>(c.replicas, c.threads, [&](std::uint64_t r) {
    Out o;
    o.seed = derive_seed(c.seed, r);
    const ScattererField field = replica_field(c, dims, o.seed);
    o.v = validate_field(field, c.reservoir, o.seed, r);
    if (o.v.pass["bijective"]) o.n_cross = crossing_census(excursions(Dynamics(field))).n_cross;
    return o;
  });
  std::string series = "t,l,J,replica,seed\n";
  std::string census = "replica,seed,n_cross\n";
  for (std::uint64_t r = 0; r < outs.size(); ++r) {
    for (const auto& row : outs[r].v.series) series += row;
    census += std::to_string(r) + "," + std::to_string(outs[r].seed) + "," + std::to_string(outs[r].n_cross) + "\n";
  }
  rep.csv["series.csv"] = std::move(series);
  rep.csv["census.csv"] = std::move(census);
  rep.results["replicas"] = c.replicas;
  rep.results["sites_per_replica"] = dims.site_count();
  for (const auto& name : kValidateChecks) {
    std::uint64_t failures = 0;
    nlohmann::ordered_json first;
    for (std::uint64_t r = 0; r < outs.size(); ++r) {
      const auto it = outs[r].v.pass.find(name);
      if (it != outs[r].v.pass.end() && !it->second) {
        if (failures == 0) {
          first["replica"] = r;
          first["seed"] = outs[r].seed;
          first["witness"] = outs[r].v.witness.at(name);
        }
        ++failures;
      }
    }
    nlohmann::ordered_json detail;
    detail["violations"] = failures;
    if (failures) detail["first"] = first;
    rep.add(name, failures == 0, detail);
  }
  return rep;
}

}  // namespace rings::harness
