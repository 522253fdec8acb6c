#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rings/lattice.hpp"
#include "rings/orbit.hpp"
#include "rings/prf.hpp"

namespace rings {

enum class Geometry { slab, infinite };

/// Lazy walk with jump probability nu per direction, 2 d nu <= 1. On the
/// slab the open direction is blocked at the two faces and a blocked move
/// is a stay; on the infinite lattice nothing is blocked.
struct WalkParams {
  double nu = 0.0;
  Dims dims;
  Geometry geometry = Geometry::slab;

  void validate() const;
};

/// lambda outside the range where the cosine closed form is defined.
class LambdaOutOfRange : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The exit-time linear system has a vanishing pivot.
class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One-step law from j: nu to each admissible neighbour, the rest on j.
/// Templated so that it can be evaluated in exact arithmetic.
template <typename T>
std::vector<std::pair<Point, T>> walk_step_distribution(const Dims& dims, Geometry geometry, T nu, const Point& j) {
  std::vector<std::pair<Point, T>> out;
  T stay = T(1);
  for (int a = 0; a < dims.d; ++a) {
    for (int delta : {-1, 1}) {
      Point q = j;
      if (geometry == Geometry::infinite) {
        q[a] += delta;
      } else {
        q = shifted(j, a, delta, dims);
        if (!in_box(q, dims)) continue;
      }
      stay = stay - nu;
      bool merged = false;
      for (auto& [p, w] : out) {
        if (p == q) {
          w = w + nu;
          merged = true;
        }
      }
      if (!merged) out.emplace_back(q, nu);
    }
  }
  out.emplace_back(j, stay);
  return out;
}

std::vector<std::pair<Point, double>> walk_step_distribution(const WalkParams& params, const Point& j);

/// One step: each of the 2d moves has probability nu; a blocked move stays.
Point walk_step(const WalkParams& params, const Point& j, CounterRng& rng);

/// Distance used by the proximity times: torus distance on the slab, L1
/// on the infinite lattice.
int walk_distance(const WalkParams& params, const Point& a, const Point& b);

struct WalkPath {
  Point start;
  std::vector<Point> positions;
  std::optional<std::uint64_t> tau_b;
};

/// Runs the slab walk until it first sits on a face (tau_B = 0 when the
/// start does), or until max_steps. Positions are kept only on request.
WalkPath simulate_to_exit(const WalkParams& params, const Point& start, CounterRng& rng,
                          std::uint64_t max_steps = UINT64_MAX, bool keep_path = false);

/// cos(omega) = 1 - (1 - e^{-lambda}) / (2 nu); returns
/// [cos(omega (i_d - 1)) + cos(omega (i_d - N))] / [1 + cos(omega (N - 1))]
/// for a layer i_d in [1, N]. Throws LambdaOutOfRange unless
/// |cos omega| <= 1 and omega (N - 1) / 2 < pi / 2.
double exit_mgf_analytic(int layer, double lambda, int n, double nu);

/// E[exp(lambda tau_B)] from the (N - 2)-unknown tridiagonal system.
double exit_mgf_solve(int layer, double lambda, int n, double nu);

/// P[open coordinate reaches N before 1] = (layer - 1) / (N - 1).
double gambler_crossing(int layer, int n);

/// The same probability from the absorbing-chain equations of the lazy walk.
double gambler_crossing_solve(int layer, int n, double nu);

/// Largest lambda accepted by exit_mgf_analytic for (N, nu).
double exit_mgf_lambda_limit(int n, double nu);

/// First t <= horizon with d(W_{t - q m}, W_t) <= radius for some q >= 1.
std::optional<std::uint64_t> walk_loop_time(const WalkParams& params, const Point& start, std::uint64_t m,
                                            std::uint64_t horizon, CounterRng& rng, int radius = kProximityRadius);

/// min over both orderings of the first t <= horizon with
/// d(W_t(a), W_{t - q m}(b)) <= radius, q >= 0. Throws DomainError if a == b.
std::optional<std::uint64_t> walk_intersection_time(const WalkParams& params, const Point& a, const Point& b,
                                                    std::uint64_t m, std::uint64_t horizon, CounterRng& rng_a,
                                                    CounterRng& rng_b, int radius = kProximityRadius);

}  // namespace rings
