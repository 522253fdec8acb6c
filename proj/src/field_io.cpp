#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "rings/scatter.hpp"

namespace rings {

namespace {

constexpr std::array<char, 8> kMagic{'R', 'I', 'N', 'G', 'S', 'X', 'I', '\0'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("truncated field snapshot");
  return v;
}

}  // namespace

void write_field(const ScattererField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.dims().d));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.dims().n));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.storage()));
  put<double>(out, field.mu());
  put<std::uint64_t>(out, field.seed());
  put<std::uint64_t>(out, field.slot_count());
  for (std::uint64_t w : field.bits()) put<std::uint64_t>(out, w);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ScattererField read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("not a field snapshot: " + path.string());
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
  const auto d = get<std::uint32_t>(in);
  const auto n = get<std::uint32_t>(in);
  const auto storage = get<std::uint32_t>(in);
  const auto mu = get<double>(in);
  const auto seed = get<std::uint64_t>(in);
  const auto slots = get<std::uint64_t>(in);
  const Dims dims(static_cast<int>(d), static_cast<int>(n));
  if (storage == static_cast<std::uint32_t>(Storage::key_derived)) {
    ScattererField f = ScattererField::sample(dims, mu, seed, Storage::key_derived);
    if (f.slot_count() != slots) throw std::runtime_error("slot count mismatch in snapshot");
    return f;
  }
  if (storage != static_cast<std::uint32_t>(Storage::dense)) throw std::runtime_error("unknown storage mode");
  std::vector<std::uint64_t> words((slots + 63) / 64);
  for (auto& w : words) w = get<std::uint64_t>(in);
  ScattererField f = ScattererField::from_bits(dims, mu, seed, std::move(words));
  if (f.slot_count() != slots) throw std::runtime_error("slot count mismatch in snapshot");
  return f;
}

}  // namespace rings
