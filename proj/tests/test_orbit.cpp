#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "rings/orbit.hpp"
#include "rings/prf.hpp"
#include "rings/scatter.hpp"

using namespace rings;

namespace {

Site S(int k, std::initializer_list<int> i) { return {k, make_point(i)}; }

ScattererField two_scatterers() {
  return ScattererField::from_scatterers(Dims(1, 3), {{0, make_point({0}), make_point({1})},
                                                      {1, make_point({1}), make_point({2})}});
}

ScattererField one_scatterer() {
  return ScattererField::from_scatterers(Dims(1, 4), {{0, make_point({1}), make_point({2})}});
}

}  // namespace

TEST_CASE("empty field is a vertical shift") {
  const Dims dims(2, 4);
  const auto f = ScattererField::constant(dims, false);
  const Dynamics dyn(f);
  for (std::uint64_t s = 0; s < dims.site_count(); ++s) {
    const Site x = site_from_index(s, dims);
    CHECK(step(f, x) == Site{(x.k + 1) % 4, x.i});
    CHECK(inverse_step(f, x) == Site{(x.k + 3) % 4, x.i});
    CHECK(orbit(dyn, x).period == 4);
    CHECK(orbit_loop_time(f, x) == 4u);
  }
  CHECK(exit_time(dyn, S(0, {1, 0})) == 1u);
  CHECK_FALSE(orbit_loop_time(f, S(0, {1, 1}), 0).has_value());
  const auto full = ScattererField::constant(dims, true);
  for (std::uint64_t s = 0; s < dims.site_count(); ++s) {
    const Site x = site_from_index(s, dims);
    CHECK(step(full, x) == Site{(x.k + 1) % 4, x.i});
  }
}

TEST_CASE("single scatterer") {
  const auto f = one_scatterer();
  CHECK(step(f, S(0, {1})) == S(1, {2}));
  CHECK(step(f, S(0, {2})) == S(1, {1}));
  CHECK(inverse_step(f, S(1, {2})) == S(0, {1}));
  const Dynamics dyn(f);
  CHECK_FALSE(exit_time(dyn, S(0, {1})).has_value());
}

TEST_CASE("two-scatterer hand trace") {
  const auto f = two_scatterers();
  const Dims& dims = f.dims();
  const Dynamics dyn(f);
  const OrbitRecord o = orbit(dyn, S(0, {0}));
  const std::vector<Site> expect{S(0, {0}), S(1, {1}), S(2, {2}), S(0, {2}), S(1, {2}),
                                 S(2, {1}), S(0, {1}), S(1, {0}), S(2, {0})};
  CHECK(o.period == 9);
  CHECK(o.sites == expect);
  CHECK(o.touches_boundary);
  CHECK(exit_time(dyn, S(0, {0})) == 2u);
  CHECK(delta(f, S(0, {0}), 0) == 1);
  CHECK(delta(f, S(1, {2}), 1) == -1);
  CHECK(delta(dyn, site_index(S(0, {0}), dims), 0) == 1);

  const Partition part = excursions(dyn);
  std::vector<std::pair<SegmentKind, std::uint64_t>> kinds;
  for (const Segment& s : part.excursions) kinds.emplace_back(s.kind, s.length);
  CHECK(part.internal.empty());
  CHECK(std::count(kinds.begin(), kinds.end(), std::pair{SegmentKind::left_right, std::uint64_t{2}}) == 1);
  CHECK(std::count(kinds.begin(), kinds.end(), std::pair{SegmentKind::right_left, std::uint64_t{3}}) == 1);
  std::size_t singletons = 0;
  for (const auto& [k, len] : kinds) singletons += len == 1;
  CHECK(singletons == 4);
  const CrossingCensus c = crossing_census(part);
  CHECK(c.n_cross == 1);
  CHECK(c.left_right == 1);
  CHECK(c.right_left == 1);
}

TEST_CASE("empty field partition") {
  const Dims dims(1, 4);
  const Partition part = excursions(Dynamics(ScattererField::constant(dims, false)));
  CHECK(part.excursions.size() == 8);
  for (const Segment& s : part.excursions) CHECK(s.length == 1);
  CHECK(part.internal.size() == 2);
  CHECK(crossing_census(part).n_cross == 0);
}

TEST_CASE("random fields: permutation, self-avoiding orbits, partition, census") {
  for (int d = 1; d <= 3; ++d) {
    for (int n = 2; n <= 5; ++n) {
      const Dims dims(d, n);
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto f = ScattererField::sample(dims, 0.2, derive_seed(seed, static_cast<std::uint64_t>(d * 10 + n)));
        const Dynamics dyn(f);
        REQUIRE(dyn.bijective());
        CHECK_FALSE(find_non_bijective(dyn.forward_table()).has_value());
        for (std::uint64_t s = 0; s < dims.site_count(); ++s) {
          const Site x = site_from_index(s, dims);
          REQUIRE(inverse_step(f, step(f, x)) == x);
          REQUIRE(dyn.step(x) == step(f, x));
        }
        const Site x0 = site_from_index(dims.site_count() / 2, dims);
        const OrbitRecord o = orbit(dyn, x0);
        CHECK(std::count(o.sites.begin(), o.sites.end(), x0) == 1);
        auto sorted = o.sites;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        for (int l = 0; l + 1 < n; ++l) {
          int sum = 0;
          for (const auto& e : o.profile(l)) sum += e.sign;
          CHECK(sum == 0);
        }

        const Partition part = excursions(dyn);
        CHECK(part.sites.size() == dims.site_count());
        CHECK(part.excursions.size() == 2 * dims.box_points());
        const CrossingCensus c = crossing_census(part);
        CHECK(c.left_right == c.right_left);
        CHECK(c.n_cross == c.left_right);
        for (int l = 0; l + 1 < n; ++l) {
          std::uint64_t prev_m = UINT64_MAX, prev_p = UINT64_MAX;
          for (std::uint64_t t = 0; t <= 3 * static_cast<std::uint64_t>(n); ++t) {
            CHECK(c.n_minus(l, t) <= prev_m);
            CHECK(c.n_plus(l, t) <= prev_p);
            prev_m = c.n_minus(l, t);
            prev_p = c.n_plus(l, t);
          }
          CHECK(c.n_minus(l, dims.site_count()) == 0);
          CHECK(c.n_plus(l, dims.site_count()) == 0);
        }
      }
    }
  }
}

TEST_CASE("intersection times") {
  const Dims dims(2, 5);
  const auto f = ScattererField::constant(dims, false);
  CHECK(orbit_intersection_time(f, S(0, {2, 2}), S(1, {2, 2})) == 1u);
  CHECK_FALSE(orbit_intersection_time(f, S(0, {0, 0}), S(3, {2, 4})).has_value());
  const auto g = ScattererField::sample(dims, 0.3, 4);
  const Dynamics dyn(g);
  CounterRng rng(1, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const Site x = site_from_index(rng.below(dims.site_count()), dims);
    const Site y = site_from_index(rng.below(dims.site_count()), dims);
    if (x == y) continue;
    const auto t = orbit_intersection_time(dyn, x, y);
    const int gap = ((y.k - x.k) % 5 + 5) % 5;
    if (t) CHECK(*t >= static_cast<std::uint64_t>(std::min(gap, 5 - gap)));
    CHECK(t == orbit_intersection_time(g, x, y));
  }
}

TEST_CASE("first-step law at an interior site") {
  // d = 2, N = 4, site (0, (1, 1)): each of the four neighbours with kappa.
  const Dims dims(2, 4);
  const double mu = 0.2;
  const double k = kappa(mu, 2);
  const std::uint64_t fields = 100000;
  const Site x = S(0, {1, 1});
  std::map<Point, std::uint64_t> hits;
  std::uint64_t moved = 0;
  for (std::uint64_t r = 0; r < fields; ++r) {
    const auto f = ScattererField::sample(dims, mu, derive_seed(99, r), Storage::key_derived);
    const Site y = step(f, x);
    if (y.i != x.i) {
      ++moved;
      ++hits[y.i];
    }
  }
  const double n = static_cast<double>(fields);
  CHECK(std::abs(moved / n - 4 * k) <= 3 * std::sqrt(4 * k * (1 - 4 * k) / n));
  CHECK(hits.size() == 4);
  for (const auto& [p, c] : hits) CHECK(std::abs(c / n - k) <= 3 * std::sqrt(k * (1 - k) / n));
}
