#pragma once

#include <cstdint>
#include <string_view>

namespace dkbound {

/// Counter-based generator: draw k of a stream with key K is
/// mix(K + (k + 1) * golden), where mix is the SplitMix64 finalizer. Streams
/// are cheap values; deriving a child stream hashes (key, tag) into a new
/// key, so replicate k of a scenario can be replayed on its own.
class Stream {
 public:
  explicit Stream(std::uint64_t key) : key_(key) {}

  /// Stream for (master seed, scenario id, any two integer coordinates).
  static Stream derive(std::uint64_t master, std::string_view scenario, std::uint64_t a,
                       std::uint64_t b = 0);

  Stream split(std::uint64_t tag) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53 bits.
  double uniform();
  /// Standard normal via Box-Muller; the second variate of each pair is kept.
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_string(std::string_view s);

}  // namespace dkbound
