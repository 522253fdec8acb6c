#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rings/lattice.hpp"
#include "rings/orbit.hpp"
#include "rings/scatter.hpp"
#include "rings/stats.hpp"

namespace rings {

/// Reservoir densities on B-, B+ and the initial interior density.
struct ReservoirParams {
  double rho_minus = 0.5;
  double rho_plus = 0.5;
  double rho_init = 0.5;

  /// Throws DomainError unless every density lies in (0, 1). The transport
  /// routines themselves accept the closed interval.
  void validate() const;
};

/// The two current formulas disagreed; indicates an internal bug.
class CurrentMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Packed occupation bits sigma(x; t), one per site, with the seed of the
/// boundary stream. Boundary draws at time t use counter (site, t).
struct OccupationState {
  Dims dims;
  std::vector<std::uint64_t> sigma;
  std::uint64_t t = 0;
  std::uint64_t seed = 0;

  bool occupied(std::uint64_t site) const { return (sigma[site >> 6] >> (site & 63)) & 1u; }
  std::uint64_t count() const;
};

/// Independent Bernoulli occupations: rho_minus on B-, rho_plus on B+,
/// rho_init elsewhere.
OccupationState init_state(const Dims& dims, const ReservoirParams& params, std::uint64_t seed);
/// Every site set to `bit`.
OccupationState filled_state(const Dims& dims, bool bit, std::uint64_t seed = 0);

/// Per-field data shared by every history: the pull-back table, the
/// boundary site lists and the Delta masks of each interface.
class TransportPlan {
 public:
  explicit TransportPlan(const Dynamics& dyn);

  const Dynamics& dynamics() const { return *dyn_; }
  const Dims& dims() const { return dyn_->dims(); }
  const std::vector<std::uint64_t>& plus_mask(int l) const { return plus_[static_cast<std::size_t>(l)]; }
  const std::vector<std::uint64_t>& minus_mask(int l) const { return minus_[static_cast<std::size_t>(l)]; }
  /// Number of sites with Delta(x, l) != 0.
  std::uint64_t active_sites(int l) const { return active_[static_cast<std::size_t>(l)]; }
  const std::vector<std::uint32_t>& boundary_minus() const { return b_minus_; }
  const std::vector<std::uint32_t>& boundary_plus() const { return b_plus_; }

 private:
  const Dynamics* dyn_;
  std::vector<std::vector<std::uint64_t>> plus_;
  std::vector<std::vector<std::uint64_t>> minus_;
  std::vector<std::uint64_t> active_;
  std::vector<std::uint32_t> b_minus_;
  std::vector<std::uint32_t> b_plus_;
};

/// sigma(x; t + 1) = sigma(F^{-1}(x); t) off the boundary; boundary sites get
/// fresh Bernoulli(rho_-/rho_+) draws. Applied `steps` times.
void evolve(OccupationState& state, const TransportPlan& plan, const ReservoirParams& params, std::uint64_t steps);

/// N^d J(l, t) via sum_x sigma(x; t) Delta(x, l).
std::int64_t current_delta_numerator(const OccupationState& state, const TransportPlan& plan, int l);
/// N^d J(l, t) via sum over the layer l of c(k, i(i + e_d)) (sigma(k, i) - sigma(k, i + e_d)).
std::int64_t current_interface_numerator(const OccupationState& state, const ScattererField& field, int l);
/// J(l, t) as an exact fraction over N^d; both formulas are evaluated and
/// CurrentMismatch is thrown if they differ.
Rational current(const OccupationState& state, const TransportPlan& plan, const ScattererField& field, int l);

/// Integer pieces of the expected current of a fixed field:
///   N^d E[J(l, t)] = rho_- a_minus + rho_+ a_plus + rho_I a_interior,
/// a_minus (a_plus) summing Delta over the first min(t, t_B - 1) + 1 steps of
/// excursions from B- (B+), a_interior over their later steps.
struct ExpectedCurrent {
  std::int64_t a_minus = 0;
  std::int64_t a_plus = 0;
  std::int64_t a_interior = 0;
  std::uint64_t n_cross = 0;
  std::uint64_t box_points = 1;

  double value(const ReservoirParams& p) const;
  /// (n_cross / N^d)(rho_- - rho_+).
  double stationary(const ReservoirParams& p) const;
  /// value - stationary, computed from integer differences so that it is
  /// exactly zero when the excursion sums are settled.
  double remainder(const ReservoirParams& p) const;
  bool remainder_vanishes() const;
};

ExpectedCurrent expected_current_terms(const Partition& part, const CrossingCensus& census, int l, std::uint64_t t);
double expected_current_exact(const Partition& part, const CrossingCensus& census, int l, std::uint64_t t,
                              const ReservoirParams& params);
double finite_time_remainder(const Partition& part, const CrossingCensus& census, int l, std::uint64_t t,
                             const ReservoirParams& params);
/// (3 / N^d)(N-(l, t)(rho_- + rho_I) + N+(l, t)(rho_+ + rho_I)).
double remainder_bound(const CrossingCensus& census, int l, std::uint64_t t, const ReservoirParams& params);

}  // namespace rings
