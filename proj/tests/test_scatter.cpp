#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "rings/prf.hpp"
#include "rings/scatter.hpp"

using namespace rings;

namespace {

Point box_point_at(const Dims& dims, std::uint64_t b) { return box_point(b, dims); }

Point below(Point p, const Dims& dims) {
  p[dims.d - 1] -= 1;
  return p;
}

}  // namespace

TEST_CASE("empty field and forced edges") {
  const Dims dims(2, 4);
  const auto f = ScattererField::constant(dims, false);
  CHECK_FALSE(f.xi(0, make_point({1, 1}), make_point({1, 2})));
  CHECK_FALSE(f.xi(3, make_point({1, 0}), make_point({1, -1})));
  CHECK(f.xi(0, make_point({1, -1}), make_point({1, -2})));
  CHECK(f.xi(0, make_point({1, -2}), make_point({2, -2})));
  CHECK(f.xi(0, make_point({1, 4}), make_point({1, 5})));
  CHECK_THROWS_AS(f.xi(0, make_point({1, 1}), make_point({1, 3})), DomainError);
  CHECK_THROWS_AS(ScattererField::sample(dims, 0.0, 1), DomainError);
  CHECK_THROWS_AS(ScattererField::sample(dims, 1.0, 1), DomainError);
}

TEST_CASE("sampling is deterministic and storage-independent") {
  for (int d = 1; d <= 3; ++d) {
    for (int n = 2; n <= 5; ++n) {
      const Dims dims(d, n);
      const auto a = ScattererField::sample(dims, 0.3, 77);
      const auto b = ScattererField::sample(dims, 0.3, 77);
      const auto k = ScattererField::sample(dims, 0.3, 77, Storage::key_derived);
      REQUIRE(a.bits() == b.bits());
      for (std::uint64_t s = 0; s < a.slot_count(); ++s) REQUIRE(a.slot_bit(s) == k.slot_bit(s));
      for (int lvl = 0; lvl < n; ++lvl) {
        for (std::uint64_t bp = 0; bp < dims.box_points(); ++bp) {
          const Point p = box_point_at(dims, bp);
          for (const Point& q : neighbors(p, dims, Domain::slab2)) {
            REQUIRE(a.xi(lvl, p, q) == k.xi(lvl, p, q));
            REQUIRE(a.xi(lvl, p, q) == a.xi(lvl, q, p));
            REQUIRE(a.xi(lvl + n, p, q) == a.xi(lvl, p, q));
          }
        }
      }
    }
  }
}

TEST_CASE("field bits are Bernoulli(mu)") {
  const Dims dims(1, 4);
  std::uint64_t ones = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 100000; ++seed) {
    const auto f = ScattererField::sample(dims, 0.5, seed);
    for (auto w : f.bits()) ones += static_cast<std::uint64_t>(std::popcount(w));
    total += f.slot_count();
  }
  const double p = static_cast<double>(ones) / static_cast<double>(total);
  CHECK(std::abs(p - 0.5) <= 3 * std::sqrt(0.25 / static_cast<double>(total)));
}

TEST_CASE("jump coefficient examples") {
  const Dims dims(1, 4);
  const auto single = ScattererField::from_scatterers(dims, {{0, make_point({1}), make_point({2})}});
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) {
      for (int j : {i - 1, i + 1}) {
        const bool expect = k == 0 && ((i == 1 && j == 2) || (i == 2 && j == 1));
        CHECK(jump_coefficient(single, k, make_point({i}), make_point({j})) == expect);
      }
    }
  }
  const auto full = ScattererField::constant(Dims(2, 4), true);
  for (std::uint64_t s = 0; s < Dims(2, 4).site_count(); ++s) {
    const Site x = site_from_index(s, Dims(2, 4));
    CHECK_FALSE(jump_partner(full, x.k, x.i).has_value());
  }
  CHECK_THROWS_AS(ScattererField::from_scatterers(dims, {{0, make_point({-1}), make_point({-2})}}), DomainError);
}

TEST_CASE("no jump leaves the box and at most one jump fires") {
  for (int d = 1; d <= 3; ++d) {
    for (int n = 2; n <= 5; ++n) {
      const Dims dims(d, n);
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto f = ScattererField::sample(dims, 0.15, seed);
        for (std::uint64_t s = 0; s < dims.site_count(); ++s) {
          const Site x = site_from_index(s, dims);
          int fired = 0;
          std::optional<Point> which;
          for (const Point& j : neighbors(x.i, dims, Domain::slab1)) {
            if (jump_coefficient(f, x.k, x.i, j)) {
              ++fired;
              which = j;
              REQUIRE(in_box(j, dims));
              REQUIRE(jump_coefficient(f, x.k, j, x.i));
            }
          }
          REQUIRE(fired <= 1);
          REQUIRE(jump_partner(f, x.k, x.i) == which);
          if (x.i[d - 1] == 0) REQUIRE_FALSE(jump_coefficient(f, x.k, x.i, below(x.i, dims)));
        }
      }
    }
  }
}

TEST_CASE("padding-layer edges never influence the box") {
  const Dims dims(2, 4);
  const auto f = ScattererField::sample(dims, 0.3, 5);
  auto bits = f.bits();
  for (int k = 0; k < dims.n; ++k) {
    for (int i0 = 0; i0 < dims.n; ++i0) {
      for (int layer : {-1, dims.n}) {
        const std::uint64_t s = f.slot(k, make_point({i0, layer}), 0);
        bits[s >> 6] ^= 1ull << (s & 63);
      }
    }
  }
  const auto g = ScattererField::from_bits(dims, f.mu(), f.seed(), bits);
  for (std::uint64_t s = 0; s < dims.site_count(); ++s) {
    const Site x = site_from_index(s, dims);
    CHECK(jump_partner(f, x.k, x.i) == jump_partner(g, x.k, x.i));
  }
}

TEST_CASE("kappa closed form") {
  CHECK(kappa(0.5, 1) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(kappa(0.1, 7) == doctest::Approx(0.006461081889226678).epsilon(1e-14));
  CHECK(kappa(0.2, 2) == doctest::Approx(0.052428800000000025).epsilon(1e-14));
  CHECK(kappa(0.0, 3) == 0.0);
  CHECK(kappa(1.0, 3) == 0.0);
  for (int d = 1; d <= 8; ++d) {
    for (int m = 1; m < 100; ++m) CHECK(2.0 * d * kappa(m / 100.0, d) <= 1.0);
  }
}

TEST_CASE("enumerated jump probability equals kappa") {
  for (int d = 1; d <= 3; ++d) {
    const JumpEnumeration e = enumerate_jump_probability(d);
    CHECK(e.edges == 4 * d - 1);
    // Only the assignment with the pair's own edge set and all others clear fires.
    for (std::size_t m = 0; m < e.counts.size(); ++m) CHECK(e.counts[m] == (m == 1 ? 1u : 0u));
    CHECK(e(0.0) == 0.0);
    for (int g = 1; g <= 19; ++g) {
      const double mu = 0.05 * g;
      CHECK(std::abs(e(mu) - kappa(mu, d)) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(enumerate_jump_probability(4), DomainError);
}

TEST_CASE("snapshots round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "rings_snapshot_test";
  std::filesystem::create_directories(dir);
  for (Storage st : {Storage::dense, Storage::key_derived}) {
    const auto f = ScattererField::sample(Dims(3, 3), 0.4, 123, st);
    write_field(f, dir / "f.bin");
    const auto g = read_field(dir / "f.bin");
    CHECK(g.dims() == f.dims());
    CHECK(g.mu() == f.mu());
    CHECK(g.seed() == f.seed());
    for (std::uint64_t s = 0; s < f.slot_count(); ++s) REQUIRE(f.slot_bit(s) == g.slot_bit(s));
  }
  {
    std::ofstream bad(dir / "bad.bin", std::ios::binary);
    bad << "NOTAFIELD";
  }
  CHECK_THROWS(read_field(dir / "bad.bin"));
  std::filesystem::remove_all(dir);
}
