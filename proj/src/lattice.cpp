#include "rings/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

namespace rings {

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int e = 0; e < exp; ++e) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
      throw DomainError("integer power overflows 64 bits");
    }
    r *= base;
  }
  return r;
}

Dims::Dims(int d_, int n_) : d(d_), n(n_) {
  if (d < 1 || d > kMaxDim) {
    throw DomainError("d must lie in [1, " + std::to_string(kMaxDim) + "], got " + std::to_string(d));
  }
  if (n < 2) throw DomainError("N must be at least 2, got " + std::to_string(n));
  box_points_ = ipow(static_cast<std::uint64_t>(n), d);
  // guard N^(d+1)
  (void)ipow(static_cast<std::uint64_t>(n), d + 1);
  slab1_points_ = ipow(static_cast<std::uint64_t>(n), d - 1) * static_cast<std::uint64_t>(n + 2);
}

Point make_point(std::initializer_list<int> coords) {
  if (coords.size() > static_cast<std::size_t>(kMaxDim)) throw DomainError("too many coordinates");
  Point p;
  int a = 0;
  for (int v : coords) p[a++] = v;
  return p;
}

std::string to_string(const Point& p, const Dims& dims) {
  std::string s = "(";
  for (int a = 0; a < dims.d; ++a) {
    if (a) s += ",";
    s += std::to_string(p[a]);
  }
  return s + ")";
}

std::string to_string(const Site& x, const Dims& dims) {
  return "(k=" + std::to_string(x.k) + ", i=" + to_string(x.i, dims) + ")";
}

static int mod(int v, int n) {
  const int r = v % n;
  return r < 0 ? r + n : r;
}

Point wrap(Point p, const Dims& dims) {
  for (int a = 0; a + 1 < dims.d; ++a) p[a] = mod(p[a], dims.n);
  return p;
}

bool in_domain(const Point& p, const Dims& dims, Domain domain) {
  for (int a = 0; a + 1 < dims.d; ++a) {
    if (p[a] < 0 || p[a] >= dims.n) return false;
  }
  const int pad = domain == Domain::box ? 0 : (domain == Domain::slab1 ? 1 : 2);
  const int last = p[dims.d - 1];
  return last >= -pad && last <= dims.n - 1 + pad;
}

int torus_distance(const Point& a, const Point& b, const Dims& dims) {
  int dist = 0;
  for (int ax = 0; ax + 1 < dims.d; ++ax) {
    const int diff = mod(a[ax] - b[ax], dims.n);
    dist += std::min(diff, dims.n - diff);
  }
  dist += std::abs(a[dims.d - 1] - b[dims.d - 1]);
  return dist;
}

int l1_distance(const Point& a, const Point& b, int d) {
  int dist = 0;
  for (int ax = 0; ax < d; ++ax) dist += std::abs(a[ax] - b[ax]);
  return dist;
}

Point shifted(Point p, int axis, int delta, const Dims& dims) {
  p[axis] += delta;
  if (axis + 1 < dims.d) p[axis] = mod(p[axis], dims.n);
  return p;
}

std::vector<Point> neighbors(const Point& p, const Dims& dims, Domain domain) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(2 * dims.d));
  for (int a = 0; a < dims.d; ++a) {
    for (int delta : {-1, 1}) {
      Point q = shifted(p, a, delta, dims);
      if (q != p && in_domain(q, dims, domain)) out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Side boundary_side(const Site& x, const Dims& dims) {
  return boundary_side_of_layer(x.i[dims.d - 1], dims);
}

std::uint64_t box_index(const Point& i, const Dims& dims) {
  std::uint64_t idx = 0;
  for (int a = 0; a < dims.d; ++a) idx = idx * static_cast<std::uint64_t>(dims.n) + static_cast<std::uint64_t>(i[a]);
  return idx;
}

Point box_point(std::uint64_t index, const Dims& dims) {
  Point p;
  for (int a = dims.d - 1; a >= 0; --a) {
    p[a] = static_cast<int>(index % static_cast<std::uint64_t>(dims.n));
    index /= static_cast<std::uint64_t>(dims.n);
  }
  return p;
}

std::uint64_t site_index(const Site& x, const Dims& dims) {
  return static_cast<std::uint64_t>(x.k) * dims.box_points() + box_index(x.i, dims);
}

Site site_from_index(std::uint64_t index, const Dims& dims) {
  Site x;
  x.k = static_cast<int>(index / dims.box_points());
  x.i = box_point(index % dims.box_points(), dims);
  return x;
}

std::uint64_t slab1_index(const Point& p, const Dims& dims) {
  std::uint64_t idx = 0;
  for (int a = 0; a + 1 < dims.d; ++a) idx = idx * static_cast<std::uint64_t>(dims.n) + static_cast<std::uint64_t>(p[a]);
  return idx * static_cast<std::uint64_t>(dims.n + 2) + static_cast<std::uint64_t>(p[dims.d - 1] + 1);
}

Point slab1_point(std::uint64_t index, const Dims& dims) {
  Point p;
  p[dims.d - 1] = static_cast<int>(index % static_cast<std::uint64_t>(dims.n + 2)) - 1;
  index /= static_cast<std::uint64_t>(dims.n + 2);
  for (int a = dims.d - 2; a >= 0; --a) {
    p[a] = static_cast<int>(index % static_cast<std::uint64_t>(dims.n));
    index /= static_cast<std::uint64_t>(dims.n);
  }
  return p;
}

}  // namespace rings
