#include <cmath>

#include "doctest.h"
#include "rings/stats.hpp"

using namespace rings;

TEST_CASE("rationals") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -3) == Rational(-1, 3));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(1, 4).to_double() == 0.25);
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("ensemble summary") {
  const std::vector<double> v{1, 2, 3, 4};
  const EnsembleStats s = summarize(v);
  CHECK(s.n == 4);
  CHECK(s.mean == 2.5);
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK(s.radius3 == doctest::Approx(3 * std::sqrt(5.0 / 3.0 / 4)));
  CHECK(binomial_sigma(0.5, 100) == doctest::Approx(0.05));
  CHECK(hoeffding_radius(2.0, 8) == doctest::Approx(0.5));
}

TEST_CASE("chi-square") {
  CHECK(chi_square_sf(0.0, 3) == doctest::Approx(1.0));
  CHECK(chi_square_sf(11.344866730144373, 3) == doctest::Approx(0.01).epsilon(1e-9));
  const std::vector<std::uint64_t> fair{250, 250, 250, 250};
  const std::vector<double> q{0.25, 0.25, 0.25, 0.25};
  const ChiSquare a = chi_square_test(fair, q);
  CHECK(a.statistic == 0.0);
  CHECK(a.dof == 3);
  CHECK(a.p_value == doctest::Approx(1.0));
  const std::vector<std::uint64_t> hit_zero{10, 0};
  const std::vector<double> only_first{1.0, 0.0};
  CHECK(chi_square_test(hit_zero, only_first).p_value == doctest::Approx(1.0));
  const std::vector<std::uint64_t> impossible{9, 1};
  CHECK(chi_square_test(impossible, only_first).p_value == 0.0);
}

TEST_CASE("line fit and correlation") {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(correlation(x, y) == doctest::Approx(1.0));
  const std::vector<double> flat{2, 2, 2, 2};
  CHECK(correlation(x, flat) == 0.0);
}
