// Copyright 2026 The mercerbnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MERCERBNN_RNG_HPP_
#define MERCERBNN_RNG_HPP_

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace mbn {

namespace detail {
// SplitMix64 output mix (Steele, Lea, Flood 2014). Full-avalanche, so
// hashing a key with a counter yields an independent-looking stream seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}  // namespace detail

// Counter-splittable pseudo-random stream (SplitMix64 core).
//
// Streams are identified by a key derived from a master seed and a tuple of
// stream ids. Because derivation is a pure hash of (seed, ids), a stream can
// be reconstructed anywhere without consuming state from any other stream:
// parallel and serial execution orders produce identical values.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key)
      : key_(key), state_(detail::mix64(key + detail::kGolden)) {}

  std::uint64_t next_u64() {
    state_ += detail::kGolden;
    return detail::mix64(state_);
  }

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    // Rejection-free modulo is fine here; span is tiny relative to 2^64.
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  // Standard normal pair via Box-Muller.
  void normal_pair(double& z0, double& z1) {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    z0 = r * std::cos(a);
    z1 = r * std::sin(a);
  }

  double normal() {
    double z0, z1;
    normal_pair(z0, z1);
    return z0;
  }

  // Derive an independent substream. Does not advance this stream.
  RngStream split(std::uint64_t id) const {
    return RngStream(detail::mix64(key_ ^ detail::mix64(id + detail::kGolden)));
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t state_;
};

// Derive a stream from a master seed and up to three counters (chain id,
// step index, slot). Pure function of its arguments.
inline RngStream derive_stream(std::uint64_t master, std::uint64_t id0 = 0,
                               std::uint64_t id1 = 0, std::uint64_t id2 = 0) {
  using detail::mix64;
  std::uint64_t k = mix64(master + detail::kGolden);
  k = mix64(k ^ (id0 + 0x1000000001b3ull));
  k = mix64(k ^ (id1 + 0x100000001b3ull));
  k = mix64(k ^ (id2 + 0x1b3ull));
  return RngStream(k);
}

inline void fill_normal(RngStream& rng, Eigen::Ref<Eigen::VectorXd> out) {
  const Eigen::Index n = out.size();
  Eigen::Index i = 0;
  for (; i + 1 < n; i += 2) rng.normal_pair(out[i], out[i + 1]);
  if (i < n) out[i] = rng.normal();
}

inline void fill_uniform(RngStream& rng, Eigen::Ref<Eigen::VectorXd> out,
                         double a, double b) {
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = rng.uniform(a, b);
}

}  // namespace mbn

#endif  // MERCERBNN_RNG_HPP_
