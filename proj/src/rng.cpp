#include "bspsa/rng.hpp"

#include <sstream>
#include <stdexcept>

namespace bspsa {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t run_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ index);
}

std::string Rng::serialize() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

Rng Rng::deserialize(const std::string& state) {
  std::istringstream in(state);
  Rng rng;
  in >> rng.engine_;
  if (in.fail()) {
    throw std::invalid_argument("malformed rng state");
  }
  return rng;
}

}  // namespace bspsa
