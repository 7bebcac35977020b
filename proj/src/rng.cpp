#include "dkbound/rng.hpp"

#include <cmath>
#include <numbers>

namespace dkbound {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return mix64(h);
}

Stream Stream::derive(std::uint64_t master, std::string_view scenario, std::uint64_t a,
                      std::uint64_t b) {
  std::uint64_t k = mix64(master + kGolden);
  k = mix64(k ^ hash_string(scenario));
  k = mix64(k ^ (a * kGolden + 1));
  k = mix64(k ^ (b * kGolden + 2));
  return Stream(k);
}

Stream Stream::split(std::uint64_t tag) const {
  return Stream(mix64(mix64(key_ ^ 0xD1B54A32D192ED03ULL) + tag * kGolden));
}

std::uint64_t Stream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double Stream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

}  // namespace dkbound
