#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rings/lattice.hpp"
#include "rings/scatter.hpp"

namespace rings {

/// Proximity radius of the loop and intersection times.
inline constexpr int kProximityRadius = 3;

/// F(k, i) = (k + 1, j) when c(k, ij) = 1 for some j, else (k + 1, i).
Site step(const ScattererField& field, const Site& x);
/// F^{-1}(k, i) = (k - 1, j) when c(k - 1, ij) = 1 for some j, else (k - 1, i).
Site inverse_step(const ScattererField& field, const Site& x);

/// F and F^{-1} tabulated over site indices.
class Dynamics {
 public:
  explicit Dynamics(const ScattererField& field);
  /// Wraps an explicit forward table (test fixtures); the backward table is
  /// left empty when `forward` is not a permutation.
  Dynamics(const Dims& dims, std::vector<std::uint32_t> forward);

  const Dims& dims() const { return dims_; }
  std::uint64_t size() const { return forward_.size(); }
  std::uint32_t forward(std::uint64_t s) const { return forward_[s]; }
  std::uint32_t backward(std::uint64_t s) const { return backward_[s]; }
  std::span<const std::uint32_t> forward_table() const { return forward_; }
  std::span<const std::uint32_t> backward_table() const { return backward_; }
  bool bijective() const { return !backward_.empty(); }

  Site step(const Site& x) const { return site_from_index(forward_[site_index(x, dims_)], dims_); }
  Site inverse_step(const Site& x) const { return site_from_index(backward_[site_index(x, dims_)], dims_); }

 private:
  Dims dims_;
  std::vector<std::uint32_t> forward_;
  std::vector<std::uint32_t> backward_;
};

/// First index hit twice by `perm` or out of range, if any.
std::optional<std::uint64_t> find_non_bijective(std::span<const std::uint32_t> perm);

/// A nonzero Delta(F^n(x), l): the step n -> n + 1 crosses interface l
/// (between layers l and l + 1) upwards (+1) or downwards (-1).
struct CrossingEvent {
  std::uint64_t n = 0;
  int l = 0;
  int sign = 0;
  bool operator==(const CrossingEvent&) const = default;
};

struct OrbitRecord {
  Site start;
  std::uint64_t period = 0;
  std::vector<Site> sites;
  bool touches_boundary = false;
  std::vector<CrossingEvent> crossings;

  /// Crossing events on interface l in time order.
  std::vector<CrossingEvent> profile(int l) const;
};

/// Iterates F until the first return to x. Throws std::logic_error if no
/// return happens within N^(d+1) + 1 steps.
OrbitRecord orbit(const Dynamics& dyn, const Site& x);

/// Smallest t >= 1 with F^t(x) on a boundary face; nullopt for internal orbits.
std::optional<std::uint64_t> exit_time(const Dynamics& dyn, const Site& x);

/// Delta(x, l) in {-1, 0, +1}; l in [0, N - 2].
int delta(const Dynamics& dyn, std::uint64_t site, int l);
int delta(const ScattererField& field, const Site& x, int l);

enum class SegmentKind { left_left, right_right, left_right, right_left, internal };

const char* to_string(SegmentKind kind);

/// A contiguous run of `sites` in a Partition: an excursion E(x) from a
/// boundary point, or a whole internal orbit. Crossing times are relative
/// to the first site of the run.
struct Segment {
  std::uint64_t begin = 0;
  std::uint64_t length = 0;
  SegmentKind kind = SegmentKind::internal;
  std::uint64_t cross_begin = 0;
  std::uint64_t cross_end = 0;
};

/// Excursions and internal orbits tiling the phase space. Excursions come
/// first, ordered by start index; internal orbits follow, each starting at
/// its smallest site index.
struct Partition {
  Dims dims;
  std::vector<std::uint32_t> sites;
  std::vector<Segment> excursions;
  std::vector<Segment> internal;
  std::vector<CrossingEvent> crossings;

  std::span<const CrossingEvent> events(const Segment& s) const {
    return std::span<const CrossingEvent>(crossings).subspan(s.cross_begin, s.cross_end - s.cross_begin);
  }
  Site start(const Segment& s) const { return site_from_index(sites[s.begin], dims); }
};

Partition excursions(const Dynamics& dyn);

/// Crossing counts of a partition. N(l, t) counts are answered from the
/// sorted last-crossing times of the excursions leaving each face.
struct CrossingCensus {
  Dims dims;
  std::uint64_t n_cross = 0;
  std::vector<std::uint32_t> s_minus;
  std::vector<std::uint32_t> s_plus;
  std::uint64_t left_left = 0;
  std::uint64_t right_right = 0;
  std::uint64_t left_right = 0;
  std::uint64_t right_left = 0;
  std::vector<std::vector<std::uint64_t>> last_minus;
  std::vector<std::vector<std::uint64_t>> last_plus;

  /// |{x in B-: exists s, t < s < t_B(x), Delta(F^s(x), l) != 0}|.
  std::uint64_t n_minus(int l, std::uint64_t t) const;
  std::uint64_t n_plus(int l, std::uint64_t t) const;
};

CrossingCensus crossing_census(const Partition& part);

/// First t >= 1 within the horizon with d(H_t, H_{t - qN}) <= radius for
/// some q >= 1. The horizon defaults to N^(d+1).
std::optional<std::uint64_t> orbit_loop_time(const Dynamics& dyn, const Site& x,
                                             std::optional<std::uint64_t> horizon = std::nullopt,
                                             int radius = kProximityRadius);
std::optional<std::uint64_t> orbit_loop_time(const ScattererField& field, const Site& x,
                                             std::optional<std::uint64_t> horizon = std::nullopt,
                                             int radius = kProximityRadius);

/// min of the two one-sided times; x -> y is the first t with
/// V_t(x) = V_s(y), s <= t, and d(H_t(x), H_s(y)) <= radius.
std::optional<std::uint64_t> orbit_intersection_time(const Dynamics& dyn, const Site& x, const Site& y,
                                                     std::optional<std::uint64_t> horizon = std::nullopt,
                                                     int radius = kProximityRadius);
std::optional<std::uint64_t> orbit_intersection_time(const ScattererField& field, const Site& x, const Site& y,
                                                     std::optional<std::uint64_t> horizon = std::nullopt,
                                                     int radius = kProximityRadius);

}  // namespace rings
