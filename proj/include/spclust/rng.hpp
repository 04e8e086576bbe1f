#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace spclust {

// Counter-based splitmix64 stream.  Output depends only on (seed, stream,
// number of draws so far), so runs are bit-reproducible across platforms and
// replicates can be fanned out onto independent child streams.
class RngStream {
 public:
  static constexpr const char* kAlgorithm = "splitmix64-v1";

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1); never returns an exact endpoint,
  // so log(u) is always finite.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (two uniforms per draw, no caching).
  double normal();
  double normal(double mean, double sd);

  // Marsaglia-Tsang; rate parameterization (mean = shape/rate).
  double gamma(double shape, double rate);
  double beta(double a, double b);

  // Weights need not be normalized.  Returns a 0-based index.
  int categorical(std::span<const double> weights);

  // Independent child stream; deterministic in (parent identity, key).
  RngStream split(std::uint64_t key) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t state_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace spclust
