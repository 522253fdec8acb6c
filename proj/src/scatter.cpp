#include "rings/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rings/kernels.hpp"
#include "rings/prf.hpp"

namespace rings {

namespace {

inline Counter slot_counter(std::uint64_t s) {
  return {static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32), 0u, tagged(StreamTag::edge, 0)};
}

inline bool free_layer(int layer, const Dims& dims) { return layer >= -1 && layer <= dims.n; }

// Calls fn(q) for every point at torus distance 1 from p whose open
// coordinate stays within [-pad, N - 1 + pad]; N = 2 periodic images once.
template <typename Fn>
void for_each_neighbor(const Point& p, const Dims& dims, int pad, Fn&& fn) {
  for (int a = 0; a < dims.d; ++a) {
    const bool periodic = a + 1 < dims.d;
    for (int delta : {-1, 1}) {
      if (periodic && dims.n == 2 && delta == -1) continue;
      const Point q = shifted(p, a, delta, dims);
      if (!periodic && (q[a] < -pad || q[a] > dims.n - 1 + pad)) continue;
      fn(q);
    }
  }
}

struct Resolved {
  Point base;
  int axis = 0;
};

// Base endpoint and axis of an adjacent pair, or throws.
Resolved resolve(const Point& i, const Point& j, const Dims& dims) {
  int axis = -1;
  for (int a = 0; a < dims.d; ++a) {
    if (i[a] != j[a]) {
      if (axis >= 0) axis = dims.d;  // more than one axis differs
      else axis = a;
    }
  }
  if (axis < 0 || axis >= dims.d || torus_distance(i, j, dims) != 1) {
    throw DomainError("points " + to_string(i, dims) + " and " + to_string(j, dims) + " are not adjacent");
  }
  if (axis == dims.d - 1) return {i[axis] < j[axis] ? i : j, axis};
  const bool i_up = shifted(i, axis, 1, dims) == j;
  const bool j_up = shifted(j, axis, 1, dims) == i;
  if (i_up && j_up) return {std::min(i, j), axis};
  return {i_up ? i : j, axis};
}

void check_periodic(const Point& p, const Dims& dims) {
  for (int a = 0; a + 1 < dims.d; ++a) {
    if (p[a] < 0 || p[a] >= dims.n) throw DomainError("periodic coordinate out of range: " + to_string(p, dims));
  }
}

}  // namespace

EdgeKey make_edge_key(int k, const Point& a, const Point& b, const Dims& dims) {
  if (torus_distance(a, b, dims) != 1) throw DomainError("edge endpoints are not adjacent");
  const int kk = ((k % dims.n) + dims.n) % dims.n;
  return a < b ? EdgeKey{kk, a, b} : EdgeKey{kk, b, a};
}

ScattererField::ScattererField(const Dims& dims, double mu, std::uint64_t seed, Storage storage)
    : dims_(dims), mu_(mu), seed_(seed), storage_(storage) {
  slot_count_ = static_cast<std::uint64_t>(dims.n) * dims.slab1_points() * static_cast<std::uint64_t>(dims.d);
  if (storage == Storage::dense) bits_.assign((slot_count_ + 63) / 64, 0);
}

ScattererField ScattererField::sample(const Dims& dims, double mu, std::uint64_t seed, Storage storage) {
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("mu must lie in (0, 1), got " + std::to_string(mu));
  ScattererField f(dims, mu, seed, storage);
  f.threshold_ = bernoulli_threshold(mu);
  if (storage == Storage::key_derived) return f;
  const std::uint64_t threshold = f.threshold_;
  const Key key = key_of(seed);
  constexpr std::size_t kChunk = 4096;
  std::vector<Counter> ctrs(kChunk);
  std::vector<std::uint8_t> out(kChunk);
  for (std::uint64_t s0 = 0; s0 < f.slot_count_; s0 += kChunk) {
    const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, f.slot_count_ - s0));
    for (std::size_t j = 0; j < n; ++j) ctrs[j] = slot_counter(s0 + j);
    kernels::philox_bernoulli(std::span<const Counter>(ctrs.data(), n), key, threshold,
                              std::span<std::uint8_t>(out.data(), n));
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t s = s0 + j;
      f.bits_[s >> 6] |= static_cast<std::uint64_t>(out[j]) << (s & 63);
    }
  }
  return f;
}

ScattererField ScattererField::constant(const Dims& dims, bool bit) {
  ScattererField f(dims, bit ? 1.0 : 0.0, 0, Storage::dense);
  if (bit) {
    std::fill(f.bits_.begin(), f.bits_.end(), ~std::uint64_t{0});
    if (f.slot_count_ % 64) f.bits_.back() &= (std::uint64_t{1} << (f.slot_count_ % 64)) - 1;
  }
  return f;
}

ScattererField ScattererField::from_scatterers(const Dims& dims, const std::vector<Scatterer>& list) {
  ScattererField f(dims, 0.0, 0, Storage::dense);
  for (const Scatterer& s : list) {
    check_periodic(s.i, dims);
    check_periodic(s.j, dims);
    const Resolved r = resolve(s.i, s.j, dims);
    const Point other = r.base == s.i ? s.j : s.i;
    if (!free_layer(r.base[dims.d - 1], dims) || !free_layer(other[dims.d - 1], dims)) {
      throw DomainError("scatterer on a forced edge");
    }
    const std::uint64_t slot = f.slot(s.k, r.base, r.axis);
    f.bits_[slot >> 6] |= std::uint64_t{1} << (slot & 63);
  }
  return f;
}

ScattererField ScattererField::from_bits(const Dims& dims, double mu, std::uint64_t seed,
                                         std::vector<std::uint64_t> bits) {
  ScattererField f(dims, mu, seed, Storage::dense);
  if (bits.size() != f.bits_.size()) throw DomainError("slot word count does not match dims");
  f.bits_ = std::move(bits);
  return f;
}

std::uint64_t ScattererField::slot(int k, const Point& base, int axis) const {
  const auto kk = static_cast<std::uint64_t>(((k % dims_.n) + dims_.n) % dims_.n);
  return (kk * dims_.slab1_points() + slab1_index(base, dims_)) * static_cast<std::uint64_t>(dims_.d) +
         static_cast<std::uint64_t>(axis);
}

bool ScattererField::slot_bit(std::uint64_t s) const {
  if (storage_ == Storage::dense) return (bits_[s >> 6] >> (s & 63)) & 1u;
  return bernoulli_from(low64(philox4x32(slot_counter(s), key_of(seed_))), threshold_);
}

bool ScattererField::xi(int k, const Point& i, const Point& j) const {
  const Resolved r = resolve(i, j, dims_);
  const int layer_i = i[dims_.d - 1];
  const int layer_j = j[dims_.d - 1];
  if (!free_layer(layer_i, dims_) || !free_layer(layer_j, dims_)) return true;
  return slot_bit(slot(k, r.base, r.axis));
}

bool jump_coefficient(const ScattererField& field, int k, const Point& i, const Point& j) {
  const Dims& dims = field.dims();
  if (!field.xi(k, i, j)) return false;
  for (const Point& l : neighbors(i, dims, Domain::slab2)) {
    if (l != j && field.xi(k, i, l)) return false;
  }
  for (const Point& l : neighbors(j, dims, Domain::slab2)) {
    if (l != i && field.xi(k, j, l)) return false;
  }
  return true;
}

std::optional<Point> jump_partner(const ScattererField& field, int k, const Point& i) {
  const Dims& dims = field.dims();
  int count = 0;
  Point j;
  for_each_neighbor(i, dims, 2, [&](const Point& q) {
    if (count < 2 && field.xi(k, i, q)) {
      ++count;
      j = q;
    }
  });
  if (count != 1) return std::nullopt;
  count = 0;
  for_each_neighbor(j, dims, 2, [&](const Point& q) {
    if (count < 2 && field.xi(k, j, q)) ++count;
  });
  if (count != 1) return std::nullopt;
  return j;
}

double kappa(double mu, int d) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0, 1]");
  if (d < 1) throw DomainError("d must be positive");
  return mu * std::pow(1.0 - mu, 4 * d - 2);
}

double JumpEnumeration::operator()(double mu) const {
  double p = 0.0;
  for (std::size_t m = 0; m < counts.size(); ++m) {
    if (counts[m] == 0) continue;
    p += static_cast<double>(counts[m]) * std::pow(mu, static_cast<double>(m)) *
         std::pow(1.0 - mu, static_cast<double>(edges) - static_cast<double>(m));
  }
  return p;
}

JumpEnumeration enumerate_jump_probability(int d) {
  if (d < 1 || d > 3) throw DomainError("jump enumeration supports 1 <= d <= 3");
  const Dims dims(d, 5);
  Point i;
  for (int a = 0; a < d; ++a) i[a] = 2;
  const Point j = shifted(i, d - 1, 1, dims);

  std::vector<Scatterer> edges{{0, i, j}};
  for (const Point& l : neighbors(i, dims, Domain::slab2)) {
    if (l != j) edges.push_back({0, i, l});
  }
  for (const Point& l : neighbors(j, dims, Domain::slab2)) {
    if (l != i) edges.push_back({0, j, l});
  }

  JumpEnumeration result;
  result.d = d;
  result.edges = static_cast<int>(edges.size());
  result.counts.assign(edges.size() + 1, 0);
  const std::uint64_t configs = std::uint64_t{1} << edges.size();
  std::vector<Scatterer> chosen;
  for (std::uint64_t mask = 0; mask < configs; ++mask) {
    chosen.clear();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if ((mask >> e) & 1u) chosen.push_back(edges[e]);
    }
    const ScattererField f = ScattererField::from_scatterers(dims, chosen);
    if (jump_coefficient(f, 0, i, j)) ++result.counts[chosen.size()];
  }
  return result;
}

}  // namespace rings
