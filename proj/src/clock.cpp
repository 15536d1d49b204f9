#include "fw/clock.hpp"

#include <memory>
#include <random>

namespace fw {
namespace {

std::string hex128(std::uint64_t hi, std::uint64_t lo) {
  static const char* digits = "0123456789abcdef";
  std::string out(32, '0');
  for (int i = 0; i < 16; ++i) {
    out[static_cast<std::size_t>(15 - i)] = digits[(hi >> (4 * i)) & 0xf];
    out[static_cast<std::size_t>(31 - i)] = digits[(lo >> (4 * i)) & 0xf];
  }
  return out;
}

}  // namespace

TokenSource random_tokens() {
  return [] {
    std::random_device rd;
    auto word = [&] { return (static_cast<std::uint64_t>(rd()) << 32) | rd(); };
    std::uint64_t hi = word();
    return hex128(hi, word());
  };
}

TokenSource seeded_tokens(std::uint64_t seed) {
  auto rng = std::make_shared<Rng>(seed);
  return [rng] {
    std::uint64_t hi = rng->next();
    return hex128(hi, rng->next());
  };
}

}  // namespace fw
