#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace elmlab {

/// Counter-based generator: the n-th output is a SplitMix64 finalisation of
/// (key + n * golden), where the key is derived from (seed, stream).
/// Satisfies UniformRandomBitGenerator, so it plugs into <random> distributions.
/// Equal (seed, stream) pairs always yield the same sequence.
class SeededRng {
public:
  using result_type = std::uint64_t;

  SeededRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in the open interval (0, 1).
  double uniform();

  /// log of a Gamma(shape, 1) variate; stays finite for very small shapes
  /// where the variate itself underflows to zero.
  double log_gamma_variate(double shape);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive fold of tags into one stream id.
std::uint64_t derive_stream(std::initializer_list<std::uint64_t> tags);

/// Bit pattern of a double, for use as a stream tag.
std::uint64_t tag_of(double value);

}  // namespace elmlab
