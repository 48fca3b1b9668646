#include "mfc/rng.hpp"

namespace mfc {

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = mix64(master);
  for (std::uint64_t tag : tags) {
    h = mix64(h ^ mix64(tag + 0x632be59bd9b4e019ULL));
  }
  return h;
}

}  // namespace mfc
