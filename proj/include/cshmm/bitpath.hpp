#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace cshmm {

// Packed bit sequence with value semantics. Bit 0 is the front of the
// sequence; push_back appends at the back, pop_front removes the front.
class BitPath {
 public:
  BitPath() = default;

  std::uint32_t size() const { return len_; }
  bool empty() const { return len_ == 0; }

  bool bit(std::uint32_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  bool front() const { return bit(0); }

  void push_back(bool b) {
    if ((len_ & 63) == 0) words_.push_back(0);
    if (b) words_[len_ >> 6] |= (std::uint64_t{1} << (len_ & 63));
    ++len_;
  }

  BitPath with_back(bool b) const {
    BitPath p = *this;
    p.push_back(b);
    return p;
  }

  BitPath without_front() const {
    BitPath p;
    for (std::uint32_t i = 1; i < len_; ++i) p.push_back(bit(i));
    return p;
  }

  // j - 1 in binary, most significant bit first, over `bits` positions; used
  // to turn a breadth index j in [1, 2^bits] into the root-to-node path.
  static BitPath from_index(std::uint64_t j_minus_1, std::uint32_t bits) {
    BitPath p;
    for (std::uint32_t m = 0; m < bits; ++m)
      p.push_back((j_minus_1 >> (bits - 1 - m)) & 1u);
    return p;
  }

  std::uint64_t to_index() const {
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < len_; ++i) v = (v << 1) | (bit(i) ? 1u : 0u);
    return v;
  }

  std::string str() const {
    std::string s;
    s.reserve(len_);
    for (std::uint32_t i = 0; i < len_; ++i) s.push_back(bit(i) ? '1' : '0');
    return s;
  }

  friend std::strong_ordering operator<=>(const BitPath& a, const BitPath& b) {
    if (auto c = a.len_ <=> b.len_; c != 0) return c;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      if (auto c = a.words_[i] <=> b.words_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const BitPath& a, const BitPath& b) {
    return (a <=> b) == 0;
  }

 private:
  std::uint32_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace cshmm
