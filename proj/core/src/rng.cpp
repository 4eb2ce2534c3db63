#include "nivfunc/rng.hpp"

#include <cmath>
#include <numbers>

namespace nivfunc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index, std::uint64_t tag) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ (0x9e3779b97f4a7c15ull + index));
  h = splitmix64(h ^ (0xc2b2ae3d27d4eb4full + tag));
  return h;
}

double StreamRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace nivfunc
