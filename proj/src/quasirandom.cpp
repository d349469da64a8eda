#include "scenex/quasirandom.hpp"

#include <bit>
#include <stdexcept>

namespace scenex {

namespace {

// Joe-Kuo "new-joe-kuo-6" table entries for dimensions 2..8:
// degree s, polynomial coefficient a, initial direction integers m.
struct Direction {
  unsigned s;
  std::uint32_t a;
  std::array<std::uint32_t, 5> m;
};

constexpr Direction kDirections[7] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
};

constexpr unsigned kBits = 32;

std::array<std::uint32_t, 32> direction_vector(std::size_t dim_index) {
  std::array<std::uint32_t, 32> v{};
  if (dim_index == 0) {
    for (unsigned k = 0; k < kBits; ++k) v[k] = 1u << (kBits - 1 - k);
    return v;
  }
  const Direction& d = kDirections[dim_index - 1];
  for (unsigned k = 0; k < d.s; ++k) v[k] = d.m[k] << (kBits - 1 - k);
  for (unsigned k = d.s; k < kBits; ++k) {
    v[k] = v[k - d.s] ^ (v[k - d.s] >> d.s);
    for (unsigned i = 1; i < d.s; ++i) {
      if ((d.a >> (d.s - 1 - i)) & 1u) v[k] ^= v[k - i];
    }
  }
  return v;
}

}  // namespace

SobolSequence::SobolSequence(std::size_t dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("Sobol dimension must be in [1, 8]");
  }
  v_.reserve(dim);
  for (std::size_t j = 0; j < dim; ++j) v_.push_back(direction_vector(j));
  x_.assign(dim, 0);
}

std::vector<double> SobolSequence::next() {
  const unsigned c = static_cast<unsigned>(std::countr_one(index_));
  if (c >= kBits) throw std::overflow_error("Sobol sequence exhausted");
  ++index_;
  std::vector<double> point(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    x_[j] ^= v_[j][c];
    point[j] = static_cast<double>(x_[j]) / 4294967296.0;
  }
  return point;
}

void SobolSequence::skip(std::uint64_t count) {
  for (std::uint64_t i = 0; i < count; ++i) next();
}

std::vector<std::vector<double>> SobolSequence::generate(std::size_t dim, std::size_t count,
                                                         std::uint64_t skip) {
  SobolSequence seq(dim);
  seq.skip(skip);
  std::vector<std::vector<double>> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) points.push_back(seq.next());
  return points;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream * 0xD1B54A32D192ED03ULL + 0x9E3779B97F4A7C15ULL));
}

}  // namespace scenex
