#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace scenex {

/// Gray-code Sobol sequence (Joe-Kuo direction numbers), up to 8 dimensions.
/// The first emitted point is sequence index 1; the all-zero index-0 point is
/// skipped.
class SobolSequence {
 public:
  static constexpr std::size_t kMaxDim = 8;

  explicit SobolSequence(std::size_t dim);

  std::size_t dim() const { return dim_; }

  /// Next point in [0,1)^dim.
  std::vector<double> next();

  void skip(std::uint64_t count);

  /// `count` points starting at sequence index `skip + 1`.
  static std::vector<std::vector<double>> generate(std::size_t dim, std::size_t count,
                                                   std::uint64_t skip = 0);

 private:
  std::size_t dim_;
  std::uint64_t index_ = 0;  // points emitted so far
  std::vector<std::array<std::uint32_t, 32>> v_;
  std::vector<std::uint32_t> x_;
};

/// splitmix64 finalizer; maps any 64-bit value to a well-mixed one.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic per-stream seed derivation from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace scenex
