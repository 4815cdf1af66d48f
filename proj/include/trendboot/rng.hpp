#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>

namespace trendboot {

/// Substream tags. A stream is identified by (seed, tag, index); distinct
/// triples give statistically independent generators.
enum class StreamTag : std::uint32_t {
  kReplicate = 1,
  kDgpNoise = 2,
  kDgpShocks = 3,
  kDgpTailScale = 4,
  kReplication = 5,
};

/// Seedable random stream with a portable standard-normal sampler.
///
/// The normal sampler is Marsaglia's polar method on top of std::mt19937_64,
/// both of which are fully specified, so a given (seed, tag, index) yields the
/// same draws on every conforming platform.
class RandomStream {
 public:
  using engine_type = std::mt19937_64;

  RandomStream(std::uint64_t seed, StreamTag tag, std::uint64_t index);

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();

  double normal();

  engine_type& engine() { return engine_; }

  /// Textual serialization of the full generator state (engine + cached
  /// polar deviate).
  std::string serialize() const;
  static RandomStream deserialize(const std::string& text);

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  RandomStream() = default;

  engine_type engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derive a child seed from (seed, index) with splitmix64 finalization.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace trendboot
