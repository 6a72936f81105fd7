#include "cohercause/random.hpp"

namespace cohercause {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  // Two rounds so that adjacent (master, stream) pairs land far apart.
  return mix64(mix64(master) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

Rng make_rng(std::uint64_t master, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(derive_seed(master, stream)),
                    static_cast<std::uint32_t>(derive_seed(master, stream) >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

std::uint64_t child_seed(std::uint64_t master, std::uint64_t tag) noexcept {
  return mix64(master ^ mix64(~tag));
}

}  // namespace cohercause
