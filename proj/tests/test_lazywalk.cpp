#include <cmath>
#include <map>

#include "doctest.h"
#include "rings/lazywalk.hpp"
#include "rings/stats.hpp"

using namespace rings;

TEST_CASE("one-step law") {
  const Dims dims(2, 5);
  auto stay_of = [](const auto& dist, const Point& j) {
    for (const auto& [q, p] : dist) {
      if (q == j) return p;
    }
    return decltype(dist.front().second){};
  };
  const WalkParams slab{0.1, dims, Geometry::slab};
  const auto interior = walk_step_distribution(slab, make_point({2, 2}));
  CHECK(interior.size() == 5);
  CHECK(stay_of(interior, make_point({2, 2})) == doctest::Approx(0.6));
  const auto face = walk_step_distribution(slab, make_point({2, 0}));
  CHECK(face.size() == 4);
  CHECK(stay_of(face, make_point({2, 0})) == doctest::Approx(0.7));
  const WalkParams inf{0.1, dims, Geometry::infinite};
  CHECK(stay_of(walk_step_distribution(inf, make_point({2, 0})), make_point({2, 0})) == doctest::Approx(0.6));

  // Exact sums in rational arithmetic at every point.
  for (int d = 1; d <= 3; ++d) {
    for (int n = 2; n <= 4; ++n) {
      const Dims dd(d, n);
      for (std::uint64_t b = 0; b < dd.box_points(); ++b) {
        for (Geometry g : {Geometry::slab, Geometry::infinite}) {
          Rational total(0);
          for (const auto& [q, p] : walk_step_distribution<Rational>(dd, g, Rational(1, 2 * d + 1), box_point(b, dd))) {
            total += p;
          }
          CHECK(total == Rational(1));
        }
      }
    }
  }
  CHECK_THROWS_AS(walk_step_distribution(WalkParams{0.3, dims, Geometry::slab}, make_point({0, 0})), DomainError);
}

TEST_CASE("walk_step follows its law") {
  const Dims dims(2, 5);
  const WalkParams wp{0.12, dims, Geometry::slab};
  for (const Point& j : {make_point({1, 2}), make_point({4, 0})}) {
    const auto dist = walk_step_distribution(wp, j);
    std::vector<double> probs;
    std::map<Point, std::size_t> cell;
    for (const auto& [q, p] : dist) {
      cell[q] = probs.size();
      probs.push_back(p);
    }
    std::vector<std::uint64_t> counts(probs.size());
    CounterRng rng(17, 0);
    for (int i = 0; i < 100000; ++i) {
      const Point q = walk_step(wp, j, rng);
      REQUIRE(cell.count(q) == 1);
      ++counts[cell[q]];
    }
    CHECK(chi_square_test(counts, probs).p_value >= 0.001);
  }
}

TEST_CASE("exit simulation") {
  const WalkParams wp{0.1, Dims(1, 3), Geometry::slab};
  CounterRng rng(1, 0);
  const WalkPath p0 = simulate_to_exit(wp, make_point({0}), rng, UINT64_MAX, true);
  CHECK(p0.tau_b == 0u);
  CHECK(p0.positions.size() == 1);
  for (int i = 0; i < 1000; ++i) CHECK(simulate_to_exit(wp, make_point({1}), rng).tau_b >= 1u);
  CHECK_THROWS_AS(simulate_to_exit(WalkParams{0.1, Dims(1, 3), Geometry::infinite}, make_point({1}), rng), DomainError);
}

TEST_CASE("exit-time generating function") {
  for (int n = 3; n <= 16; ++n) {
    for (int x = 1; x <= n; ++x) {
      CHECK(exit_mgf_analytic(x, 0.0, n, 0.1) == 1.0);
      CHECK(exit_mgf_solve(x, 0.0, n, 0.1) == doctest::Approx(1.0).epsilon(1e-13));
      const double lambda = 0.1 / (n * n);
      const double a = exit_mgf_analytic(x, lambda, n, 0.1);
      CHECK(std::abs(a - exit_mgf_solve(x, lambda, n, 0.1)) <= 1e-8);
      CHECK(a == doctest::Approx(exit_mgf_analytic(n + 1 - x, lambda, n, 0.1)).epsilon(1e-13));
    }
    CHECK(exit_mgf_analytic(1, 0.1 / (n * n), n, 0.1) == doctest::Approx(1.0).epsilon(1e-14));
  }
  // High-precision solve of the linear system.
  const double frozen[] = {1.0, 1.0505402041939096, 1.0846785349978448, 1.1018819975037042,
                           1.1018819975037042, 1.0846785349978448, 1.0505402041939096, 1.0};
  for (int x = 1; x <= 8; ++x) {
    CHECK(exit_mgf_analytic(x, 0.1 / 64, 8, 0.1) == doctest::Approx(frozen[x - 1]).epsilon(1e-13));
    CHECK(exit_mgf_solve(x, 0.1 / 64, 8, 0.1) == doctest::Approx(frozen[x - 1]).epsilon(1e-13));
  }
  CHECK(exit_mgf_solve(3, 0.1 / 36, 6, 0.1) == doctest::Approx(1.089856766382879).epsilon(1e-13));

  const double limit = exit_mgf_lambda_limit(8, 0.1);
  CHECK_NOTHROW(exit_mgf_analytic(4, 0.999 * limit, 8, 0.1));
  CHECK_THROWS_AS(exit_mgf_analytic(4, 1.001 * limit, 8, 0.1), LambdaOutOfRange);
  CHECK_THROWS_AS(exit_mgf_solve(4, 1.001 * limit, 8, 0.1), SingularSystem);
  CHECK_THROWS_AS(exit_mgf_analytic(4, 5.0, 8, 0.1), LambdaOutOfRange);
  CHECK_THROWS_AS(exit_mgf_analytic(0, 0.0, 8, 0.1), DomainError);
}

TEST_CASE("gambler's ruin") {
  CHECK(gambler_crossing(2, 3) == 0.5);
  CHECK(gambler_crossing(1, 7) == 0.0);
  CHECK(gambler_crossing(7, 7) == 1.0);
  for (int n = 3; n <= 10; ++n) {
    CHECK(gambler_crossing(2, n) == doctest::Approx(1.0 / (n - 1)));
    for (int x = 1; x <= n; ++x) {
      for (double nu : {0.05, 0.1, 0.5}) CHECK(std::abs(gambler_crossing(x, n) - gambler_crossing_solve(x, n, nu)) <= 1e-12);
    }
  }
}

TEST_CASE("loop and intersection times") {
  const Dims dims(2, 30);
  const WalkParams still{0.0, dims, Geometry::slab};
  CounterRng a(1, 0), b(1, 1);
  CHECK(walk_loop_time(still, make_point({3, 3}), 1, 100, a) == 1u);
  CHECK_FALSE(walk_loop_time(still, make_point({3, 3}), 1, 0, a).has_value());
  CHECK_FALSE(walk_intersection_time(still, make_point({0, 5}), make_point({0, 15}), 4, 500, a, b).has_value());
  CHECK(walk_intersection_time(still, make_point({0, 5}), make_point({0, 7}), 4, 500, a, b) == 0u);
  CHECK_THROWS_AS(walk_intersection_time(still, make_point({0, 5}), make_point({0, 5}), 4, 5, a, b), DomainError);
  CHECK_THROWS_AS(walk_loop_time(still, make_point({0, 5}), 0, 5, a), DomainError);
  const WalkParams moving{0.1, Dims(3, 12), Geometry::infinite};
  CounterRng c(5, 0), c2(5, 0);
  CHECK(walk_loop_time(moving, make_point({0, 0, 0}), 6, 1000, c) == walk_loop_time(moving, make_point({0, 0, 0}), 6, 1000, c2));
}
