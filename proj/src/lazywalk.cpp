#include "rings/lazywalk.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rings {

namespace {

void check_layer(int layer, int n) {
  if (n < 2) throw DomainError("N must be at least 2");
  if (layer < 1 || layer > n) throw DomainError("layer must lie in [1, N], got " + std::to_string(layer));
}

void check_nu(double nu) {
  if (!(nu > 0.0 && nu <= 0.5)) throw DomainError("nu must lie in (0, 1/2]");
}

// Solves a tridiagonal system with constant off-diagonals `off` and
// diagonal `diag`; rhs is overwritten with the solution.
void thomas(double off, double diag, std::vector<double>& rhs) {
  const std::size_t m = rhs.size();
  if (m == 0) return;
  std::vector<double> c(m);
  double denom = diag;
  const double tiny = 1e-13 * (std::abs(diag) + 2.0 * std::abs(off));
  if (std::abs(denom) <= tiny) throw SingularSystem("zero pivot in tridiagonal solve");
  c[0] = off / denom;
  rhs[0] /= denom;
  for (std::size_t r = 1; r < m; ++r) {
    denom = diag - off * c[r - 1];
    if (std::abs(denom) <= tiny) throw SingularSystem("zero pivot in tridiagonal solve");
    c[r] = off / denom;
    rhs[r] = (rhs[r] - off * rhs[r - 1]) / denom;
  }
  for (std::size_t r = m - 1; r-- > 0;) rhs[r] -= c[r] * rhs[r + 1];
}

}  // namespace

void WalkParams::validate() const {
  if (!(nu >= 0.0) || 2.0 * dims.d * nu > 1.0 + 1e-15) {
    throw DomainError("walk rate must satisfy 0 <= nu <= 1/(2d), got " + std::to_string(nu));
  }
}

std::vector<std::pair<Point, double>> walk_step_distribution(const WalkParams& params, const Point& j) {
  params.validate();
  return walk_step_distribution<double>(params.dims, params.geometry, params.nu, j);
}

Point walk_step(const WalkParams& params, const Point& j, CounterRng& rng) {
  const double r = rng.uniform();
  const int moves = 2 * params.dims.d;
  if (params.nu <= 0.0 || r >= moves * params.nu) return j;
  int m = static_cast<int>(r / params.nu);
  if (m >= moves) m = moves - 1;
  const int axis = m / 2;
  const int delta = (m % 2) ? 1 : -1;
  if (params.geometry == Geometry::infinite) {
    Point q = j;
    q[axis] += delta;
    return q;
  }
  const Point q = shifted(j, axis, delta, params.dims);
  return in_box(q, params.dims) ? q : j;
}

int walk_distance(const WalkParams& params, const Point& a, const Point& b) {
  return params.geometry == Geometry::slab ? torus_distance(a, b, params.dims) : l1_distance(a, b, params.dims.d);
}

WalkPath simulate_to_exit(const WalkParams& params, const Point& start, CounterRng& rng, std::uint64_t max_steps,
                          bool keep_path) {
  if (params.geometry != Geometry::slab) throw DomainError("exit times are defined on the slab");
  const Dims& dims = params.dims;
  WalkPath path;
  path.start = start;
  if (keep_path) path.positions.push_back(start);
  auto on_face = [&](const Point& p) { return boundary_side_of_layer(p[dims.d - 1], dims) != Side::none; };
  Point cur = start;
  for (std::uint64_t t = 0;; ++t) {
    if (on_face(cur)) {
      path.tau_b = t;
      return path;
    }
    if (t == max_steps) return path;
    cur = walk_step(params, cur, rng);
    if (keep_path) path.positions.push_back(cur);
  }
}

double exit_mgf_lambda_limit(int n, double nu) {
  check_nu(nu);
  if (n < 2) throw DomainError("N must be at least 2");
  const double omega = std::numbers::pi / static_cast<double>(n - 1);
  const double inner = 1.0 - 2.0 * nu * (1.0 - std::cos(omega));
  if (inner <= 0.0) return INFINITY;
  return -std::log(inner);
}

double exit_mgf_analytic(int layer, double lambda, int n, double nu) {
  check_layer(layer, n);
  check_nu(nu);
  const double cos_omega = 1.0 - (1.0 - std::exp(-lambda)) / (2.0 * nu);
  if (!(cos_omega >= -1.0 && cos_omega <= 1.0)) {
    throw LambdaOutOfRange("lambda=" + std::to_string(lambda) + " gives cos(omega)=" + std::to_string(cos_omega));
  }
  const double omega = std::acos(cos_omega);
  if (!(omega * (n - 1) / 2.0 < std::numbers::pi / 2.0)) {
    throw LambdaOutOfRange("lambda=" + std::to_string(lambda) + " is at or past the divergence of the exit MGF");
  }
  const double x = static_cast<double>(layer);
  return (std::cos(omega * (x - 1.0)) + std::cos(omega * (x - n))) / (1.0 + std::cos(omega * (n - 1)));
}

double exit_mgf_solve(int layer, double lambda, int n, double nu) {
  check_layer(layer, n);
  check_nu(nu);
  if (layer == 1 || layer == n) return 1.0;
  if (lambda >= exit_mgf_lambda_limit(n, nu)) {
    throw SingularSystem("lambda=" + std::to_string(lambda) + " is at or past the divergence of the exit MGF");
  }
  // nu h(x-1) + (1 - 2 nu - e^{-lambda}) h(x) + nu h(x+1) = 0, h(1) = h(N) = 1.
  std::vector<double> rhs(static_cast<std::size_t>(n - 2), 0.0);
  rhs.front() -= nu;
  rhs.back() -= nu;
  thomas(nu, 1.0 - 2.0 * nu - std::exp(-lambda), rhs);
  return rhs[static_cast<std::size_t>(layer - 2)];
}

double gambler_crossing(int layer, int n) {
  check_layer(layer, n);
  return static_cast<double>(layer - 1) / static_cast<double>(n - 1);
}

double gambler_crossing_solve(int layer, int n, double nu) {
  check_layer(layer, n);
  check_nu(nu);
  if (layer == 1) return 0.0;
  if (layer == n) return 1.0;
  // p(x) = nu p(x-1) + nu p(x+1) + (1 - 2 nu) p(x), p(1) = 0, p(N) = 1.
  std::vector<double> rhs(static_cast<std::size_t>(n - 2), 0.0);
  rhs.back() -= nu;
  thomas(nu, -2.0 * nu, rhs);
  return rhs[static_cast<std::size_t>(layer - 2)];
}

std::optional<std::uint64_t> walk_loop_time(const WalkParams& params, const Point& start, std::uint64_t m,
                                            std::uint64_t horizon, CounterRng& rng, int radius) {
  if (m == 0) throw DomainError("loop period m must be positive");
  std::vector<Point> h{start};
  Point cur = start;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    cur = walk_step(params, cur, rng);
    h.push_back(cur);
    for (std::uint64_t back = m; back <= t; back += m) {
      if (walk_distance(params, h[t], h[t - back]) <= radius) return t;
    }
  }
  return std::nullopt;
}

std::optional<std::uint64_t> walk_intersection_time(const WalkParams& params, const Point& a, const Point& b,
                                                    std::uint64_t m, std::uint64_t horizon, CounterRng& rng_a,
                                                    CounterRng& rng_b, int radius) {
  if (a == b) throw DomainError("intersection time needs two distinct starting points");
  if (m == 0) throw DomainError("loop period m must be positive");
  std::vector<Point> ha{a};
  std::vector<Point> hb{b};
  for (std::uint64_t t = 0; t <= horizon; ++t) {
    if (t > 0) {
      ha.push_back(walk_step(params, ha.back(), rng_a));
      hb.push_back(walk_step(params, hb.back(), rng_b));
    }
    for (std::uint64_t back = 0; back <= t; back += m) {
      if (walk_distance(params, ha[t], hb[t - back]) <= radius) return t;
      if (walk_distance(params, hb[t], ha[t - back]) <= radius) return t;
    }
  }
  return std::nullopt;
}

}  // namespace rings
