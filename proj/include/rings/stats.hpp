#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace rings {

/// Reduced fraction with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
  friend Rational operator-(Rational a) { return {-a.num, a.den}; }
  Rational& operator+=(Rational b) { return *this = *this + b; }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }
};

/// Sample summary: mean, unbiased variance and the 3 sigma radius of the mean.
struct EnsembleStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double radius3 = 0.0;
};

EnsembleStats summarize(std::span<const double> values);

/// sqrt(p (1 - p) / n).
double binomial_sigma(double p, std::uint64_t n);

/// Hoeffding radius range / sqrt(2 M); P[|mean - E| >= c r] <= 2 exp(-c^2).
double hoeffding_radius(double range, std::uint64_t m);

/// Upper tail P[X >= stat] of a chi-square variable with `dof` degrees of freedom.
double chi_square_sf(double stat, double dof);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of observed counts against cell probabilities.
/// Cells with zero expected probability must have zero counts; otherwise
/// the statistic is infinite and p = 0.
ChiSquare chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> probs);

/// Least-squares line y = intercept + slope x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Pearson correlation; 0 when either sample is constant.
double correlation(std::span<const double> a, std::span<const double> b);

}  // namespace rings
