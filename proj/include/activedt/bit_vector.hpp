#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace activedt {

/// Fixed-length packed bit vector. Used both for labelings (bit i = label of
/// point i) and for index masks over a dataset.
class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false)
      : size_(size), words_(word_count(size), value ? ~Word{0} : Word{0}) {
    trim();
  }

  static std::size_t word_count(std::size_t bits) {
    return (bits + kWordBits - 1) / kWordBits;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool test(std::size_t i) const {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t i, bool value = true) {
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  std::size_t count() const {
    std::size_t total = 0;
    for (Word w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }
  bool none() const {
    for (Word w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  BitVector& operator|=(const BitVector& other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
    return *this;
  }
  BitVector& operator&=(const BitVector& other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
    return *this;
  }
  BitVector& operator^=(const BitVector& other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= other.words_[k];
    return *this;
  }
  BitVector operator~() const {
    BitVector out(*this);
    for (Word& w : out.words_) w = ~w;
    out.trim();
    return out;
  }

  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  friend bool operator==(const BitVector& a, const BitVector& b) = default;
  friend auto operator<=>(const BitVector& a, const BitVector& b) {
    return a.words_ <=> b.words_;
  }

  /// Indices of the set bits, ascending.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::size_t k = 0; k < words_.size(); ++k) {
      Word w = words_[k];
      while (w != 0) {
        out.push_back(k * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  static BitVector from_indices(std::size_t size, std::span<const std::size_t> idx) {
    BitVector out(size);
    for (std::size_t i : idx) out.set(i);
    return out;
  }

 private:
  void trim() {
    if (size_ % kWordBits != 0 && !words_.empty()) {
      words_.back() &= (Word{1} << (size_ % kWordBits)) - 1;
    }
  }

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

/// Number of positions where two equally sized word rows differ, optionally
/// restricted to a mask row.
inline std::size_t hamming(std::span<const BitVector::Word> a,
                           std::span<const BitVector::Word> b) {
  std::size_t total = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    total += static_cast<std::size_t>(std::popcount(a[k] ^ b[k]));
  }
  return total;
}

inline std::size_t hamming(std::span<const BitVector::Word> a,
                           std::span<const BitVector::Word> b,
                           std::span<const BitVector::Word> mask) {
  std::size_t total = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    total += static_cast<std::size_t>(std::popcount((a[k] ^ b[k]) & mask[k]));
  }
  return total;
}

struct BitVectorHash {
  std::size_t operator()(const BitVector& v) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ v.size();
    for (BitVector::Word w : v.words()) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xbf58476d1ce4e5b9ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

}  // namespace activedt
