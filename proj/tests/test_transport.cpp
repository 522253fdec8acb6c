#include <cmath>
#include <map>

#include "doctest.h"
#include "rings/prf.hpp"
#include "rings/stats.hpp"
#include "rings/transport.hpp"

using namespace rings;

namespace {

const ReservoirParams kRho{0.8, 0.2, 0.5};

ScattererField two_scatterers() {
  return ScattererField::from_scatterers(Dims(1, 3), {{0, make_point({0}), make_point({1})},
                                                      {1, make_point({1}), make_point({2})}});
}

void set_bit(OccupationState& st, std::uint64_t s) { st.sigma[s >> 6] |= 1ull << (s & 63); }

// E[J(l, t)] by pushing mean occupations forward; independent of the excursion sums.
double propagated_current(const Dynamics& dyn, const ReservoirParams& p, int l, std::uint64_t t) {
  const Dims& dims = dyn.dims();
  const std::uint64_t count = dims.site_count();
  auto boundary = [&](std::uint64_t s, double interior) {
    const int layer = layer_of_index(s, dims);
    return layer == 0 ? p.rho_minus : (layer == dims.n - 1 ? p.rho_plus : interior);
  };
  std::vector<double> m(count);
  for (std::uint64_t s = 0; s < count; ++s) m[s] = boundary(s, p.rho_init);
  for (std::uint64_t step = 0; step < t; ++step) {
    std::vector<double> next(count);
    for (std::uint64_t s = 0; s < count; ++s) next[s] = boundary(s, m[dyn.backward(s)]);
    m.swap(next);
  }
  double j = 0.0;
  for (std::uint64_t s = 0; s < count; ++s) j += m[s] * delta(dyn, s, l);
  return j / static_cast<double>(dims.box_points());
}

}  // namespace

TEST_CASE("initial states") {
  const Dims dims(2, 4);
  const auto a = init_state(dims, kRho, 5);
  const auto b = init_state(dims, kRho, 5);
  CHECK(a.sigma == b.sigma);
  CHECK(filled_state(dims, true).count() == dims.site_count());
  CHECK(filled_state(dims, false).count() == 0);

  const ReservoirParams p{0.5, 0.5, 0.3};
  std::uint64_t ones = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto st = init_state(dims, p, seed);
    for (std::uint64_t s = 0; s < dims.site_count(); ++s) {
      const int layer = layer_of_index(s, dims);
      if (layer == 0 || layer == dims.n - 1) continue;
      ones += st.occupied(s);
      ++total;
    }
  }
  const double mean = static_cast<double>(ones) / static_cast<double>(total);
  CHECK(std::abs(mean - 0.3) <= 3 * binomial_sigma(0.3, total));
}

TEST_CASE("evolution") {
  const Dims dims(1, 4);
  const auto empty = ScattererField::constant(dims, false);
  const Dynamics dyn(empty);
  const TransportPlan plan(dyn);
  OccupationState st = filled_state(dims, false, 3);
  set_bit(st, site_index({0, make_point({1})}, dims));
  set_bit(st, site_index({2, make_point({1})}, dims));
  evolve(st, plan, kRho, 1);
  CHECK(st.t == 1);
  CHECK(st.occupied(site_index({1, make_point({1})}, dims)));
  CHECK(st.occupied(site_index({3, make_point({1})}, dims)));
  CHECK_FALSE(st.occupied(site_index({0, make_point({1})}, dims)));

  OccupationState full = filled_state(dims, false, 4);
  evolve(full, plan, ReservoirParams{1.0, 1.0, 0.0}, 1);
  for (std::uint32_t s : plan.boundary_minus()) CHECK(full.occupied(s));
  for (std::uint32_t s : plan.boundary_plus()) CHECK(full.occupied(s));

  const Dims d2(2, 4);
  const auto f = ScattererField::sample(d2, 0.2, 8);
  const Dynamics dyn2(f);
  const TransportPlan plan2(dyn2);
  OccupationState one = init_state(d2, kRho, 12);
  OccupationState two = one;
  evolve(one, plan2, kRho, 13);
  evolve(two, plan2, kRho, 6);
  evolve(two, plan2, kRho, 7);
  CHECK(one.sigma == two.sigma);
  CHECK(one.t == two.t);
}

TEST_CASE("current examples") {
  const auto f = two_scatterers();
  const Dims& dims = f.dims();
  const Dynamics dyn(f);
  const TransportPlan plan(dyn);
  OccupationState st = filled_state(dims, false);
  set_bit(st, site_index({0, make_point({0})}, dims));
  CHECK(current(st, plan, f, 0) == Rational(1, 3));
  CHECK(current(st, plan, f, 1) == Rational(0));
  CHECK(current(filled_state(dims, false), plan, f, 0) == Rational(0));

  const auto empty = ScattererField::constant(Dims(2, 4), false);
  const Dynamics de(empty);
  const TransportPlan pe(de);
  const auto busy = init_state(Dims(2, 4), kRho, 1);
  for (int l = 0; l < 3; ++l) CHECK(current(busy, pe, empty, l) == Rational(0));
}

TEST_CASE("the two current formulas agree") {
  for (int d = 1; d <= 3; ++d) {
    for (int n = 2; n <= 5; ++n) {
      const Dims dims(d, n);
      const auto f = ScattererField::sample(dims, 0.25, derive_seed(3, static_cast<std::uint64_t>(d * 10 + n)));
      const Dynamics dyn(f);
      const TransportPlan plan(dyn);
      OccupationState st = init_state(dims, kRho, 2);
      for (int t = 0; t < 2 * n; ++t) {
        for (int l = 0; l + 1 < n; ++l) {
          REQUIRE(current_delta_numerator(st, plan, l) == current_interface_numerator(st, f, l));
        }
        evolve(st, plan, kRho, 1);
      }
    }
  }
}

TEST_CASE("expected current of the two-scatterer field") {
  const auto f = two_scatterers();
  const Dynamics dyn(f);
  const Partition part = excursions(dyn);
  const CrossingCensus c = crossing_census(part);
  // Mean-occupation propagation, exact in rationals (oracle values).
  const double j0[] = {0.1, 0.1, 0.2, 0.2, 0.2, 0.2};
  const double j1[] = {0.1, 0.2, 0.2, 0.2, 0.2, 0.2};
  for (std::uint64_t t = 0; t < 6; ++t) {
    CHECK(expected_current_exact(part, c, 0, t, kRho) == doctest::Approx(j0[t]).epsilon(1e-14));
    CHECK(expected_current_exact(part, c, 1, t, kRho) == doctest::Approx(j1[t]).epsilon(1e-14));
  }
  CHECK(finite_time_remainder(part, c, 0, 0, kRho) == doctest::Approx(-0.1).epsilon(1e-14));
  CHECK(std::abs(finite_time_remainder(part, c, 0, 0, kRho)) <= remainder_bound(c, 0, 0, kRho));
  CHECK(c.n_minus(0, 0) + c.n_plus(0, 0) >= 1);
  for (std::uint64_t t : {27u, 28u, 100u}) {
    for (int l = 0; l < 2; ++l) {
      CHECK(expected_current_exact(part, c, l, t, kRho) == doctest::Approx(0.2).epsilon(1e-14));
      CHECK(expected_current_terms(part, c, l, t).remainder_vanishes());
    }
  }
  const auto empty = ScattererField::constant(Dims(2, 3), false);
  const Partition pe = excursions(Dynamics(empty));
  const CrossingCensus ce = crossing_census(pe);
  for (std::uint64_t t = 0; t < 10; ++t) CHECK(expected_current_exact(pe, ce, 0, t, kRho) == 0.0);
}

TEST_CASE("excursion sums equal propagated mean occupations") {
  for (int d = 1; d <= 2; ++d) {
    for (int n = 2; n <= 4; ++n) {
      const Dims dims(d, n);
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto f = ScattererField::sample(dims, 0.3, derive_seed(seed, static_cast<std::uint64_t>(d * 10 + n), 1));
        const Dynamics dyn(f);
        const Partition part = excursions(dyn);
        const CrossingCensus c = crossing_census(part);
        const auto horizon = static_cast<std::uint64_t>(3 * n + 2);
        for (int l = 0; l + 1 < n; ++l) {
          for (std::uint64_t t = 0; t <= horizon; ++t) {
            const double exact = expected_current_exact(part, c, l, t, kRho);
            REQUIRE(exact == doctest::Approx(propagated_current(dyn, kRho, l, t)).epsilon(1e-12));
            REQUIRE(std::abs(finite_time_remainder(part, c, l, t, kRho)) <= remainder_bound(c, l, t, kRho) + 1e-12);
          }
          REQUIRE(expected_current_exact(part, c, l, dims.site_count(), kRho) ==
                  doctest::Approx(static_cast<double>(c.n_cross) * 0.6 / static_cast<double>(dims.box_points())));
        }
      }
    }
  }
}

TEST_CASE("currents are stationary in law after N^(d+1)") {
  const Dims dims(1, 4);
  std::uint64_t seed = 0;
  ScattererField f = ScattererField::sample(dims, 0.3, seed);
  while (crossing_census(excursions(Dynamics(f))).n_cross == 0) f = ScattererField::sample(dims, 0.3, ++seed);
  const Dynamics dyn(f);
  const TransportPlan plan(dyn);
  const std::uint64_t t1 = dims.site_count();
  const int histories = 4000;
  std::map<std::int64_t, std::pair<std::uint64_t, std::uint64_t>> table;
  for (int h = 0; h < histories; ++h) {
    OccupationState a = init_state(dims, kRho, derive_seed(1, static_cast<std::uint64_t>(h)));
    OccupationState b = init_state(dims, kRho, derive_seed(2, static_cast<std::uint64_t>(h)));
    evolve(a, plan, kRho, t1);
    evolve(b, plan, kRho, 2 * t1 + 3);
    ++table[current_delta_numerator(a, plan, 1)].first;
    ++table[current_delta_numerator(b, plan, 1)].second;
  }
  // Two-sample chi-square homogeneity test.
  REQUIRE(table.size() > 1);
  double stat = 0.0;
  for (const auto& [v, ab] : table) {
    const double row = static_cast<double>(ab.first + ab.second);
    const double e = row / 2.0;
    stat += (ab.first - e) * (ab.first - e) / e + (ab.second - e) * (ab.second - e) / e;
  }
  const double p = chi_square_sf(stat, static_cast<double>(table.size() - 1));
  CAPTURE(stat);
  CHECK(p >= 0.01);
}
