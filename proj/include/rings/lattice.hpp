#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rings {

/// Largest horizontal dimension supported by the fixed-size coordinate type.
inline constexpr int kMaxDim = 8;

/// Thrown for arguments outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lattice geometry: horizontal dimension d and box side / ring length N.
///
/// The phase space holds N^(d+1) sites: N ring levels over the box
/// {0..N-1}^d. The first d-1 horizontal directions are periodic, the last
/// one is open and bounded by the two reservoir faces.
struct Dims {
  int d = 1;
  int n = 2;

  Dims() = default;
  Dims(int d_, int n_);

  std::uint64_t box_points() const { return box_points_; }
  std::uint64_t site_count() const { return box_points_ * static_cast<std::uint64_t>(n); }
  /// Points of the slab with the open coordinate in [-1, N].
  std::uint64_t slab1_points() const { return slab1_points_; }

  bool operator==(const Dims& o) const { return d == o.d && n == o.n; }

 private:
  std::uint64_t box_points_ = 2;
  std::uint64_t slab1_points_ = 4;
};

/// Horizontal coordinate. Entries past d are kept at zero so that defaulted
/// comparison is a lexicographic order on the first d coordinates.
struct Point {
  std::array<int, kMaxDim> c{};

  int& operator[](int a) { return c[static_cast<std::size_t>(a)]; }
  int operator[](int a) const { return c[static_cast<std::size_t>(a)]; }
  auto operator<=>(const Point&) const = default;
};

/// A phase-space point: ring level k and horizontal position i.
struct Site {
  int k = 0;
  Point i;
  auto operator<=>(const Site&) const = default;
};

enum class Domain { box, slab1, slab2 };
enum class Side { none, minus, plus };

Point make_point(std::initializer_list<int> coords);
std::string to_string(const Point& p, const Dims& dims);
std::string to_string(const Site& s, const Dims& dims);

/// Wraps the periodic coordinates into [0, N); the open coordinate is untouched.
Point wrap(Point p, const Dims& dims);

bool in_domain(const Point& p, const Dims& dims, Domain domain);
inline bool in_box(const Point& p, const Dims& dims) { return in_domain(p, dims, Domain::box); }

/// L1 distance minimised over periodic images of the first d-1 coordinates.
int torus_distance(const Point& a, const Point& b, const Dims& dims);

/// Plain L1 distance on Z^d (no wrapping).
int l1_distance(const Point& a, const Point& b, int d);

/// Points at torus distance 1 from p that lie in `domain`, sorted and
/// de-duplicated (for N = 2 the two periodic images coincide).
std::vector<Point> neighbors(const Point& p, const Dims& dims, Domain domain);

/// p shifted by +/-1 along axis a, periodic axes wrapped.
Point shifted(Point p, int axis, int delta, const Dims& dims);

Side boundary_side(const Site& x, const Dims& dims);
inline Side boundary_side_of_layer(int layer, const Dims& dims) {
  return layer == 0 ? Side::minus : (layer == dims.n - 1 ? Side::plus : Side::none);
}

// Row-major encodings. Sites are ordered by (k, i_1, ..., i_d) with i_d
// fastest; slab points by (i_1, ..., i_{d-1}, i_d + 1).
std::uint64_t box_index(const Point& i, const Dims& dims);
Point box_point(std::uint64_t index, const Dims& dims);
std::uint64_t site_index(const Site& x, const Dims& dims);
Site site_from_index(std::uint64_t index, const Dims& dims);
std::uint64_t slab1_index(const Point& p, const Dims& dims);
Point slab1_point(std::uint64_t index, const Dims& dims);

inline int layer_of_index(std::uint64_t site, const Dims& dims) {
  return static_cast<int>(site % static_cast<std::uint64_t>(dims.n));
}
inline int level_of_index(std::uint64_t site, const Dims& dims) {
  return static_cast<int>(site / dims.box_points());
}

std::uint64_t ipow(std::uint64_t base, int exp);

}  // namespace rings
