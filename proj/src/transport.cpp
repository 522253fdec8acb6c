#include "rings/transport.hpp"

#include <bit>
#include <string>

#include "rings/kernels.hpp"
#include "rings/prf.hpp"

namespace rings {

namespace {

void check_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw DomainError(std::string(name) + " must lie in (0, 1)");
}

void check_interface(const Dims& dims, int l) {
  if (l < 0 || l > dims.n - 2) throw DomainError("interface index out of range: " + std::to_string(l));
}

inline void set_bit(std::vector<std::uint64_t>& v, std::uint64_t s, bool b) {
  const std::uint64_t m = std::uint64_t{1} << (s & 63);
  if (b) v[s >> 6] |= m;
  else v[s >> 6] &= ~m;
}

void resample_boundary(OccupationState& st, const std::vector<std::uint32_t>& sites, double rho,
                       std::vector<Counter>& ctrs, std::vector<std::uint8_t>& out) {
  ctrs.resize(sites.size());
  out.resize(sites.size());
  for (std::size_t j = 0; j < sites.size(); ++j) {
    ctrs[j] = {sites[j], static_cast<std::uint32_t>(st.t), static_cast<std::uint32_t>(st.t >> 32),
               tagged(StreamTag::boundary, 0)};
  }
  kernels::philox_bernoulli(ctrs, key_of(st.seed), bernoulli_threshold(rho), out);
  for (std::size_t j = 0; j < sites.size(); ++j) set_bit(st.sigma, sites[j], out[j] != 0);
}

}  // namespace

void ReservoirParams::validate() const {
  check_open(rho_minus, "rho_minus");
  check_open(rho_plus, "rho_plus");
  check_open(rho_init, "rho_init");
}

std::uint64_t OccupationState::count() const {
  std::uint64_t c = 0;
  for (std::uint64_t w : sigma) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

OccupationState init_state(const Dims& dims, const ReservoirParams& params, std::uint64_t seed) {
  OccupationState st;
  st.dims = dims;
  st.seed = seed;
  const std::uint64_t count = dims.site_count();
  st.sigma.assign((count + 63) / 64, 0);
  const std::uint64_t thr[3] = {bernoulli_threshold(params.rho_init), bernoulli_threshold(params.rho_minus),
                                bernoulli_threshold(params.rho_plus)};
  const Key key = key_of(seed);
  for (std::uint64_t s = 0; s < count; ++s) {
    const int layer = layer_of_index(s, dims);
    const int cls = layer == 0 ? 1 : (layer == dims.n - 1 ? 2 : 0);
    const Counter r = philox4x32({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32), 0u,
                                  tagged(StreamTag::occupation_init, 0)},
                                 key);
    if (bernoulli_from(low64(r), thr[cls])) set_bit(st.sigma, s, true);
  }
  return st;
}

OccupationState filled_state(const Dims& dims, bool bit, std::uint64_t seed) {
  OccupationState st;
  st.dims = dims;
  st.seed = seed;
  const std::uint64_t count = dims.site_count();
  st.sigma.assign((count + 63) / 64, bit ? ~std::uint64_t{0} : 0);
  if (bit && count % 64) st.sigma.back() &= (std::uint64_t{1} << (count % 64)) - 1;
  return st;
}

TransportPlan::TransportPlan(const Dynamics& dyn) : dyn_(&dyn) {
  const Dims& dims = dyn.dims();
  if (!dyn.bijective()) throw DomainError("transport needs a bijective dynamics");
  const std::uint64_t count = dims.site_count();
  const auto interfaces = static_cast<std::size_t>(dims.n - 1);
  const std::size_t words = (count + 63) / 64;
  plus_.assign(interfaces, std::vector<std::uint64_t>(words, 0));
  minus_.assign(interfaces, std::vector<std::uint64_t>(words, 0));
  active_.assign(interfaces, 0);
  for (std::uint64_t s = 0; s < count; ++s) {
    const int a = layer_of_index(s, dims);
    const int b = layer_of_index(dyn.forward(s), dims);
    if (b == a + 1) {
      set_bit(plus_[static_cast<std::size_t>(a)], s, true);
      ++active_[static_cast<std::size_t>(a)];
    } else if (b == a - 1) {
      set_bit(minus_[static_cast<std::size_t>(b)], s, true);
      ++active_[static_cast<std::size_t>(b)];
    }
    if (a == 0) b_minus_.push_back(static_cast<std::uint32_t>(s));
    if (a == dims.n - 1) b_plus_.push_back(static_cast<std::uint32_t>(s));
  }
}

void evolve(OccupationState& state, const TransportPlan& plan, const ReservoirParams& params, std::uint64_t steps) {
  if (!(state.dims == plan.dims())) throw DomainError("occupation state and field have different dims");
  std::vector<std::uint64_t> next(state.sigma.size());
  std::vector<Counter> ctrs;
  std::vector<std::uint8_t> out;
  const auto back = plan.dynamics().backward_table();
  for (std::uint64_t s = 0; s < steps; ++s) {
    kernels::gather_bits(state.sigma, back, next);
    state.sigma.swap(next);
    ++state.t;
    resample_boundary(state, plan.boundary_minus(), params.rho_minus, ctrs, out);
    resample_boundary(state, plan.boundary_plus(), params.rho_plus, ctrs, out);
  }
}

std::int64_t current_delta_numerator(const OccupationState& state, const TransportPlan& plan, int l) {
  check_interface(plan.dims(), l);
  return kernels::masked_popcount_diff(state.sigma, plan.plus_mask(l), plan.minus_mask(l));
}

std::int64_t current_interface_numerator(const OccupationState& state, const ScattererField& field, int l) {
  const Dims& dims = field.dims();
  check_interface(dims, l);
  std::int64_t num = 0;
  const std::uint64_t box = dims.box_points();
  for (int k = 0; k < dims.n; ++k) {
    for (std::uint64_t b = 0; b < box; ++b) {
      const Point i = box_point(b, dims);
      if (i[dims.d - 1] != l) continue;
      const Point j = shifted(i, dims.d - 1, 1, dims);
      if (!jump_coefficient(field, k, i, j)) continue;
      const Site xi{k, i};
      const Site xj{k, j};
      num += static_cast<std::int64_t>(state.occupied(site_index(xi, dims))) -
             static_cast<std::int64_t>(state.occupied(site_index(xj, dims)));
    }
  }
  return num;
}

Rational current(const OccupationState& state, const TransportPlan& plan, const ScattererField& field, int l) {
  const std::int64_t a = current_delta_numerator(state, plan, l);
  const std::int64_t b = current_interface_numerator(state, field, l);
  if (a != b) {
    throw CurrentMismatch("current formulas disagree at l=" + std::to_string(l) + ", t=" + std::to_string(state.t) +
                          ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
  return {a, static_cast<std::int64_t>(plan.dims().box_points())};
}

double ExpectedCurrent::value(const ReservoirParams& p) const {
  return (p.rho_minus * static_cast<double>(a_minus) + p.rho_plus * static_cast<double>(a_plus) +
          p.rho_init * static_cast<double>(a_interior)) /
         static_cast<double>(box_points);
}

double ExpectedCurrent::stationary(const ReservoirParams& p) const {
  return static_cast<double>(n_cross) * (p.rho_minus - p.rho_plus) / static_cast<double>(box_points);
}

double ExpectedCurrent::remainder(const ReservoirParams& p) const {
  const auto n = static_cast<std::int64_t>(n_cross);
  return (p.rho_minus * static_cast<double>(a_minus - n) + p.rho_plus * static_cast<double>(a_plus + n) +
          p.rho_init * static_cast<double>(a_interior)) /
         static_cast<double>(box_points);
}

bool ExpectedCurrent::remainder_vanishes() const {
  const auto n = static_cast<std::int64_t>(n_cross);
  return a_minus == n && a_plus == -n && a_interior == 0;
}

ExpectedCurrent expected_current_terms(const Partition& part, const CrossingCensus& census, int l, std::uint64_t t) {
  const Dims& dims = part.dims;
  check_interface(dims, l);
  ExpectedCurrent e;
  e.n_cross = census.n_cross;
  e.box_points = dims.box_points();
  for (const Segment& seg : part.excursions) {
    const bool from_minus = layer_of_index(part.sites[seg.begin], dims) == 0;
    std::int64_t early = 0;
    std::int64_t late = 0;
    for (const CrossingEvent& ev : part.events(seg)) {
      if (ev.l != l) continue;
      if (ev.n <= t) early += ev.sign;
      else late += ev.sign;
    }
    (from_minus ? e.a_minus : e.a_plus) += early;
    e.a_interior += late;
  }
  return e;
}

double expected_current_exact(const Partition& part, const CrossingCensus& census, int l, std::uint64_t t,
                              const ReservoirParams& params) {
  return expected_current_terms(part, census, l, t).value(params);
}

double finite_time_remainder(const Partition& part, const CrossingCensus& census, int l, std::uint64_t t,
                             const ReservoirParams& params) {
  return expected_current_terms(part, census, l, t).remainder(params);
}

double remainder_bound(const CrossingCensus& census, int l, std::uint64_t t, const ReservoirParams& params) {
  return 3.0 *
         (static_cast<double>(census.n_minus(l, t)) * (params.rho_minus + params.rho_init) +
          static_cast<double>(census.n_plus(l, t)) * (params.rho_plus + params.rho_init)) /
         static_cast<double>(census.dims.box_points());
}

}  // namespace rings
