#include "elmlab/rng.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace elmlab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x)
{
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_stream(std::initializer_list<std::uint64_t> tags)
{
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (std::uint64_t t : tags) {
    h = mix64(h ^ mix64(t + kGolden));
  }
  return h;
}

std::uint64_t tag_of(double value) { return std::bit_cast<std::uint64_t>(value); }

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(mix64(mix64(seed) ^ (stream * kGolden + 0x632BE59BD9B4E019ULL)))
{
}

SeededRng::result_type SeededRng::operator()()
{
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double SeededRng::uniform()
{
  // 53 random mantissa bits, shifted half a step off zero.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double SeededRng::log_gamma_variate(double shape)
{
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("log_gamma_variate: shape must be positive and finite");
  }
  if (shape >= 1.0) {
    std::gamma_distribution<double> gamma(shape, 1.0);
    return std::log(gamma(*this));
  }
  // Gamma(a) = Gamma(a + 1) * U^(1/a)
  std::gamma_distribution<double> gamma(shape + 1.0, 1.0);
  const double g = gamma(*this);
  return std::log(g) + std::log(uniform()) / shape;
}

}  // namespace elmlab
