#include "lps/rng.hpp"

#include <cmath>
#include <numbers>

namespace lps {

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = next_u64();
    const unsigned __int128 prod = static_cast<unsigned __int128>(x) * n;
    if (static_cast<std::uint64_t>(prod) >= threshold) {
      return static_cast<std::uint64_t>(prod >> 64);
    }
  }
}

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace lps
