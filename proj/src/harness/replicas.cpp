#include "harness/replicas.hpp"

#include "rings/harness.hpp"

namespace rings::harness {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

ScattererField replica_field(const ExperimentConfig& c, const Dims& dims, std::uint64_t seed, Storage storage) {
  switch (c.field) {
    case FieldKind::empty: return ScattererField::constant(dims, false);
    case FieldKind::full: return ScattererField::constant(dims, true);
    case FieldKind::random: break;
  }
  return ScattererField::sample(dims, c.mu, seed, storage);
}

void check_feasible(const Dims& dims) {
  // Dynamics tables (8 bytes/site), occupation bits and the partition
  // (about 8 bytes/site) dominate.
  constexpr std::uint64_t kMaxSites = std::uint64_t{1} << 28;
  const std::uint64_t sites = dims.site_count();
  if (sites > kMaxSites) {
    const double gib = static_cast<double>(sites) * 24.0 / (1024.0 * 1024.0 * 1024.0);
    throw Infeasible("d=" + std::to_string(dims.d) + ", N=" + std::to_string(dims.n) + " has " +
                     std::to_string(sites) + " sites, needing about " + std::to_string(gib) +
                     " GiB per replica; the limit is 2^28 sites");
  }
}

}  // namespace rings::harness
