#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace grenander {

//! Deterministic random stream identified by a master seed and a path of
//! substream indices.
//!
//! The engine state is a pure function of (seed, path): two streams with the
//! same identity produce the same sequence, and `substream(i)` does not depend
//! on how many values the parent has already consumed. Streams are move-only
//! so that a stream is never advanced from two places.
class RngStream
{
public:
  explicit RngStream(std::uint64_t seed, std::vector<std::uint64_t> path = {})
    : seed_(seed)
    , path_(std::move(path))
  {
    std::vector<std::uint32_t> words;
    words.reserve(2 * path_.size() + 3);
    push64(words, seed_);
    // separates the seed from the path so that ({a}, {}) != ({}, {a})
    words.push_back(static_cast<std::uint32_t>(path_.size()));
    for (auto p : path_)
      push64(words, p);
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  RngStream(const RngStream&) = delete;
  RngStream& operator=(const RngStream&) = delete;
  RngStream(RngStream&&) noexcept = default;
  RngStream& operator=(RngStream&&) noexcept = default;

  RngStream substream(std::uint64_t index) const
  {
    auto child = path_;
    child.push_back(index);
    return RngStream(seed_, std::move(child));
  }

  RngStream substream(std::initializer_list<std::uint64_t> indices) const
  {
    auto child = path_;
    child.insert(child.end(), indices.begin(), indices.end());
    return RngStream(seed_, std::move(child));
  }

  std::uint64_t seed() const { return seed_; }
  const std::vector<std::uint64_t>& path() const { return path_; }

  std::uint64_t next_u64() { return engine_(); }

  //! Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform()
  {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  //! Uniform integer in [0, n).
  std::size_t index(std::size_t n)
  {
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
  }

  double normal() { return normal_(engine_); }

private:
  static void push64(std::vector<std::uint32_t>& words, std::uint64_t v)
  {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  }

  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{ 0.0, 1.0 };
};

} // namespace grenander
