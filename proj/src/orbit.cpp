#include "rings/orbit.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace rings {

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

inline bool boundary_layer(int layer, const Dims& dims) { return layer == 0 || layer == dims.n - 1; }

// Crossing of the step from layer a to layer b, if any.
inline bool crossing_of(int a, int b, int& l, int& sign) {
  if (b == a + 1) {
    l = a;
    sign = 1;
    return true;
  }
  if (b == a - 1) {
    l = b;
    sign = -1;
    return true;
  }
  return false;
}

std::uint64_t default_horizon(const Dims& dims) { return dims.site_count(); }

template <typename StepFn>
std::optional<std::uint64_t> loop_time(const Dims& dims, Site x, std::uint64_t horizon, int radius, StepFn&& next) {
  const auto n = static_cast<std::uint64_t>(dims.n);
  std::vector<Point> h{x.i};
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    x = next(x);
    h.push_back(x.i);
    for (std::uint64_t back = n; back <= t; back += n) {
      if (torus_distance(h[t], h[t - back], dims) <= radius) return t;
    }
  }
  return std::nullopt;
}

template <typename StepFn>
std::optional<std::uint64_t> intersection_time(const Dims& dims, Site x, Site y, std::uint64_t horizon, int radius,
                                               StepFn&& next) {
  if (x == y) throw DomainError("intersection time needs two distinct starting sites");
  const auto n = static_cast<std::uint64_t>(dims.n);
  const auto offset_xy = static_cast<std::uint64_t>(((y.k - x.k) % dims.n + dims.n) % dims.n);
  const auto offset_yx = static_cast<std::uint64_t>(((x.k - y.k) % dims.n + dims.n) % dims.n);
  std::vector<Point> hx{x.i};
  std::vector<Point> hy{y.i};
  for (std::uint64_t t = 0; t <= horizon; ++t) {
    if (t > 0) {
      x = next(x);
      y = next(y);
      hx.push_back(x.i);
      hy.push_back(y.i);
    }
    for (std::uint64_t back = offset_xy; back <= t; back += n) {
      if (torus_distance(hx[t], hy[t - back], dims) <= radius) return t;
    }
    for (std::uint64_t back = offset_yx; back <= t; back += n) {
      if (torus_distance(hy[t], hx[t - back], dims) <= radius) return t;
    }
  }
  return std::nullopt;
}

}  // namespace

Site step(const ScattererField& field, const Site& x) {
  const Dims& dims = field.dims();
  const int k = ((x.k % dims.n) + dims.n) % dims.n;
  const auto j = jump_partner(field, k, x.i);
  return {(k + 1) % dims.n, j ? *j : x.i};
}

Site inverse_step(const ScattererField& field, const Site& x) {
  const Dims& dims = field.dims();
  const int k = (((x.k - 1) % dims.n) + dims.n) % dims.n;
  const auto j = jump_partner(field, k, x.i);
  return {k, j ? *j : x.i};
}

Dynamics::Dynamics(const ScattererField& field) : dims_(field.dims()) {
  const std::uint64_t count = dims_.site_count();
  if (count > kUnset) throw DomainError("phase space too large for 32-bit site indices");
  forward_.resize(count);
  const std::uint64_t box = dims_.box_points();
  for (int k = 0; k < dims_.n; ++k) {
    const std::uint64_t next_level = static_cast<std::uint64_t>((k + 1) % dims_.n) * box;
    for (std::uint64_t b = 0; b < box; ++b) {
      const Point i = box_point(b, dims_);
      const auto j = jump_partner(field, k, i);
      forward_[static_cast<std::uint64_t>(k) * box + b] =
          static_cast<std::uint32_t>(next_level + (j ? box_index(*j, dims_) : b));
    }
  }
  backward_.assign(count, kUnset);
  for (std::uint64_t s = 0; s < count; ++s) {
    if (backward_[forward_[s]] != kUnset) throw std::logic_error("scatterer dynamics is not injective");
    backward_[forward_[s]] = static_cast<std::uint32_t>(s);
  }
}

Dynamics::Dynamics(const Dims& dims, std::vector<std::uint32_t> forward) : dims_(dims), forward_(std::move(forward)) {
  if (forward_.size() != dims_.site_count()) throw DomainError("forward table size does not match dims");
  if (find_non_bijective(forward_)) return;
  backward_.assign(forward_.size(), 0);
  for (std::uint64_t s = 0; s < forward_.size(); ++s) backward_[forward_[s]] = static_cast<std::uint32_t>(s);
}

std::optional<std::uint64_t> find_non_bijective(std::span<const std::uint32_t> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (std::uint64_t s = 0; s < perm.size(); ++s) {
    const std::uint32_t v = perm[s];
    if (v >= perm.size() || seen[v]) return s;
    seen[v] = true;
  }
  return std::nullopt;
}

std::vector<CrossingEvent> OrbitRecord::profile(int l) const {
  std::vector<CrossingEvent> out;
  for (const CrossingEvent& e : crossings) {
    if (e.l == l) out.push_back(e);
  }
  return out;
}

OrbitRecord orbit(const Dynamics& dyn, const Site& x) {
  const Dims& dims = dyn.dims();
  const std::uint64_t start = site_index(x, dims);
  const std::uint64_t limit = dims.site_count() + 1;
  OrbitRecord rec;
  rec.start = x;
  std::uint64_t cur = start;
  for (std::uint64_t n = 0;; ++n) {
    if (n >= limit) throw std::logic_error("orbit of " + to_string(x, dims) + " did not close");
    rec.sites.push_back(site_from_index(cur, dims));
    if (boundary_layer(layer_of_index(cur, dims), dims)) rec.touches_boundary = true;
    const std::uint64_t nxt = dyn.forward(cur);
    int l = 0;
    int sign = 0;
    if (crossing_of(layer_of_index(cur, dims), layer_of_index(nxt, dims), l, sign)) rec.crossings.push_back({n, l, sign});
    cur = nxt;
    if (cur == start) {
      rec.period = n + 1;
      break;
    }
  }
  return rec;
}

std::optional<std::uint64_t> exit_time(const Dynamics& dyn, const Site& x) {
  const Dims& dims = dyn.dims();
  const std::uint64_t start = site_index(x, dims);
  std::uint64_t cur = start;
  for (std::uint64_t t = 1; t <= dims.site_count(); ++t) {
    cur = dyn.forward(cur);
    if (boundary_layer(layer_of_index(cur, dims), dims)) return t;
    if (cur == start) return std::nullopt;
  }
  throw std::logic_error("orbit did not close while searching for an exit");
}

int delta(const Dynamics& dyn, std::uint64_t site, int l) {
  const Dims& dims = dyn.dims();
  if (l < 0 || l > dims.n - 2) throw DomainError("interface index out of range: " + std::to_string(l));
  const int a = layer_of_index(site, dims);
  const int b = layer_of_index(dyn.forward(site), dims);
  if (a == l && b == l + 1) return 1;
  if (a == l + 1 && b == l) return -1;
  return 0;
}

int delta(const ScattererField& field, const Site& x, int l) {
  const Dims& dims = field.dims();
  if (l < 0 || l > dims.n - 2) throw DomainError("interface index out of range: " + std::to_string(l));
  const int a = x.i[dims.d - 1];
  const int b = step(field, x).i[dims.d - 1];
  if (a == l && b == l + 1) return 1;
  if (a == l + 1 && b == l) return -1;
  return 0;
}

const char* to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::left_left: return "LL";
    case SegmentKind::right_right: return "RR";
    case SegmentKind::left_right: return "LR";
    case SegmentKind::right_left: return "RL";
    case SegmentKind::internal: return "internal";
  }
  return "?";
}

Partition excursions(const Dynamics& dyn) {
  const Dims& dims = dyn.dims();
  const std::uint64_t count = dims.site_count();
  Partition part;
  part.dims = dims;
  part.sites.reserve(count);
  std::vector<std::uint64_t> visited((count + 63) / 64, 0);
  auto mark = [&](std::uint64_t s) { visited[s >> 6] |= std::uint64_t{1} << (s & 63); };
  auto seen = [&](std::uint64_t s) { return (visited[s >> 6] >> (s & 63)) & 1u; };

  auto trace = [&](std::uint64_t s, bool stop_at_boundary) {
    Segment seg;
    seg.begin = part.sites.size();
    seg.cross_begin = part.crossings.size();
    std::uint64_t cur = s;
    for (std::uint64_t n = 0;; ++n) {
      part.sites.push_back(static_cast<std::uint32_t>(cur));
      mark(cur);
      const std::uint64_t nxt = dyn.forward(cur);
      int l = 0;
      int sign = 0;
      if (crossing_of(layer_of_index(cur, dims), layer_of_index(nxt, dims), l, sign)) {
        part.crossings.push_back({n, l, sign});
      }
      const bool stop = stop_at_boundary ? boundary_layer(layer_of_index(nxt, dims), dims) : nxt == s;
      if (stop) {
        seg.length = n + 1;
        seg.cross_end = part.crossings.size();
        if (stop_at_boundary) {
          const bool from_minus = layer_of_index(s, dims) == 0;
          const bool to_minus = layer_of_index(nxt, dims) == 0;
          seg.kind = from_minus ? (to_minus ? SegmentKind::left_left : SegmentKind::left_right)
                                : (to_minus ? SegmentKind::right_left : SegmentKind::right_right);
        }
        return seg;
      }
      if (n > count) throw std::logic_error("trajectory did not terminate during the partition sweep");
      cur = nxt;
    }
  };

  for (std::uint64_t s = 0; s < count; ++s) {
    if (boundary_layer(layer_of_index(s, dims), dims)) part.excursions.push_back(trace(s, true));
  }
  for (std::uint64_t s = 0; s < count; ++s) {
    if (!seen(s)) part.internal.push_back(trace(s, false));
  }
  return part;
}

CrossingCensus crossing_census(const Partition& part) {
  const Dims& dims = part.dims;
  CrossingCensus c;
  c.dims = dims;
  const auto interfaces = static_cast<std::size_t>(dims.n - 1);
  c.last_minus.assign(interfaces, {});
  c.last_plus.assign(interfaces, {});
  std::vector<std::int64_t> last(interfaces);
  for (const Segment& seg : part.excursions) {
    const std::uint32_t x = part.sites[seg.begin];
    switch (seg.kind) {
      case SegmentKind::left_left: ++c.left_left; break;
      case SegmentKind::right_right: ++c.right_right; break;
      case SegmentKind::left_right:
        ++c.left_right;
        c.s_minus.push_back(x);
        break;
      case SegmentKind::right_left:
        ++c.right_left;
        c.s_plus.push_back(x);
        break;
      case SegmentKind::internal: break;
    }
    std::fill(last.begin(), last.end(), -1);
    for (const CrossingEvent& e : part.events(seg)) last[static_cast<std::size_t>(e.l)] = static_cast<std::int64_t>(e.n);
    const bool from_minus = layer_of_index(x, dims) == 0;
    auto& table = from_minus ? c.last_minus : c.last_plus;
    for (std::size_t l = 0; l < interfaces; ++l) {
      if (last[l] >= 0) table[l].push_back(static_cast<std::uint64_t>(last[l]));
    }
  }
  for (auto& v : c.last_minus) std::sort(v.begin(), v.end());
  for (auto& v : c.last_plus) std::sort(v.begin(), v.end());
  c.n_cross = c.left_right;
  return c;
}

namespace {
std::uint64_t count_after(const std::vector<std::vector<std::uint64_t>>& table, int l, std::uint64_t t) {
  if (l < 0 || static_cast<std::size_t>(l) >= table.size()) throw DomainError("interface index out of range");
  const auto& v = table[static_cast<std::size_t>(l)];
  return static_cast<std::uint64_t>(v.end() - std::upper_bound(v.begin(), v.end(), t));
}
}  // namespace

std::uint64_t CrossingCensus::n_minus(int l, std::uint64_t t) const { return count_after(last_minus, l, t); }
std::uint64_t CrossingCensus::n_plus(int l, std::uint64_t t) const { return count_after(last_plus, l, t); }

std::optional<std::uint64_t> orbit_loop_time(const Dynamics& dyn, const Site& x, std::optional<std::uint64_t> horizon,
                                             int radius) {
  return loop_time(dyn.dims(), x, horizon.value_or(default_horizon(dyn.dims())), radius,
                   [&](const Site& s) { return dyn.step(s); });
}

std::optional<std::uint64_t> orbit_loop_time(const ScattererField& field, const Site& x,
                                             std::optional<std::uint64_t> horizon, int radius) {
  return loop_time(field.dims(), x, horizon.value_or(default_horizon(field.dims())), radius,
                   [&](const Site& s) { return step(field, s); });
}

std::optional<std::uint64_t> orbit_intersection_time(const Dynamics& dyn, const Site& x, const Site& y,
                                                     std::optional<std::uint64_t> horizon, int radius) {
  return intersection_time(dyn.dims(), x, y, horizon.value_or(default_horizon(dyn.dims())), radius,
                           [&](const Site& s) { return dyn.step(s); });
}

std::optional<std::uint64_t> orbit_intersection_time(const ScattererField& field, const Site& x, const Site& y,
                                                     std::optional<std::uint64_t> horizon, int radius) {
  return intersection_time(field.dims(), x, y, horizon.value_or(default_horizon(field.dims())), radius,
                           [&](const Site& s) { return step(field, s); });
}

}  // namespace rings
