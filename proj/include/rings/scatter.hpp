#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <tuple>
#include <vector>

#include "rings/lattice.hpp"

namespace rings {

enum class Storage : std::uint32_t { dense = 0, key_derived = 1 };

/// Unordered nearest-neighbour pair at one ring level, endpoints in
/// lexicographic order.
struct EdgeKey {
  int k = 0;
  Point lo;
  Point hi;
  auto operator<=>(const EdgeKey&) const = default;
};

EdgeKey make_edge_key(int k, const Point& a, const Point& b, const Dims& dims);

/// One scatterer: level k and the unordered pair {i, j}.
struct Scatterer {
  int k = 0;
  Point i;
  Point j;
};

/// Quenched scatterer configuration xi(k, {i, j}).
///
/// Free edges are those with both endpoints in the slab {-1 <= i_d <= N}; any
/// edge reaching further out is a forced scatterer. A free edge is addressed
/// by (k, slab index of its base endpoint, axis), where the base is the
/// endpoint whose +1 shift along the axis gives the other one. The same slot
/// number is the counter of the keyed generator, so dense and key-derived
/// fields with equal seeds hold the same bits.
class ScattererField {
 public:
  /// Bernoulli(mu) field, 0 < mu < 1.
  static ScattererField sample(const Dims& dims, double mu, std::uint64_t seed, Storage storage = Storage::dense);
  /// Every free edge set to `bit`.
  static ScattererField constant(const Dims& dims, bool bit);
  /// All free edges 0 except the listed ones.
  static ScattererField from_scatterers(const Dims& dims, const std::vector<Scatterer>& list);
  /// Rebuilds a field from raw slot bits (used by the snapshot reader).
  static ScattererField from_bits(const Dims& dims, double mu, std::uint64_t seed, std::vector<std::uint64_t> bits);

  const Dims& dims() const { return dims_; }
  double mu() const { return mu_; }
  std::uint64_t seed() const { return seed_; }
  Storage storage() const { return storage_; }

  /// Number of free edge slots (N levels x slab points x d axes).
  std::uint64_t slot_count() const { return slot_count_; }
  /// Packed slot bits; empty for key-derived storage.
  const std::vector<std::uint64_t>& bits() const { return bits_; }

  /// Scatterer bit of the edge {i, j} at level k (taken mod N). Throws
  /// DomainError unless i and j are at torus distance 1.
  bool xi(int k, const Point& i, const Point& j) const;

  /// Slot of a free edge given its base endpoint and axis.
  std::uint64_t slot(int k, const Point& base, int axis) const;
  bool slot_bit(std::uint64_t s) const;

 private:
  ScattererField(const Dims& dims, double mu, std::uint64_t seed, Storage storage);

  Dims dims_;
  double mu_ = 0.0;
  std::uint64_t seed_ = 0;
  Storage storage_ = Storage::dense;
  std::uint64_t threshold_ = 0;
  std::uint64_t slot_count_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// c(k, ij): 1 iff xi(k, {i, j}) = 1 and every other edge touching i or j
/// (endpoints ranging over the slab |i_d| padded by 2) carries 0.
bool jump_coefficient(const ScattererField& field, int k, const Point& i, const Point& j);

/// The unique j with c(k, ij) = 1, if any. i must lie in the box.
std::optional<Point> jump_partner(const ScattererField& field, int k, const Point& i);

/// kappa(mu) = mu (1 - mu)^(4d - 2).
double kappa(double mu, int d);

/// Exhaustive jump probability over the 4d - 1 edges incident to a fixed
/// interior pair: counts[m] is the number of assignments with m scatterers
/// for which the pair jumps.
struct JumpEnumeration {
  int d = 1;
  int edges = 3;
  std::vector<std::uint64_t> counts;

  double operator()(double mu) const;
};

/// Builds the table by evaluating jump_coefficient on explicit fields; d <= 3.
JumpEnumeration enumerate_jump_probability(int d);

// Snapshot files: "RINGSXI\0", u32 version, u32 d, u32 N, u32 storage,
// f64 mu, u64 seed, u64 slot count, then the slot words (dense only).
// Little-endian throughout.
void write_field(const ScattererField& field, const std::filesystem::path& path);
ScattererField read_field(const std::filesystem::path& path);

}  // namespace rings
