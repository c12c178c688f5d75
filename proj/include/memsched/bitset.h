/* Copyright 2026 The memsched Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef MEMSCHED_BITSET_H_
#define MEMSCHED_BITSET_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace memsched {

// Fixed-width bitset sized at runtime. Used for reachability sets and as the
// executed-operator key of the scheduling search.
class DynamicBitset {
 public:
  static constexpr size_t kWordBits = 64;

  DynamicBitset() = default;
  explicit DynamicBitset(size_t num_bits)
      : num_bits_(num_bits), words_(WordsFor(num_bits), 0) {}

  static size_t WordsFor(size_t num_bits) {
    return (num_bits + kWordBits - 1) / kWordBits;
  }

  size_t size() const { return num_bits_; }
  size_t num_words() const { return words_.size(); }
  std::span<const uint64_t> words() const { return words_; }
  std::span<uint64_t> mutable_words() { return words_; }

  bool test(size_t bit) const {
    return (words_[bit / kWordBits] >> (bit % kWordBits)) & 1U;
  }
  void set(size_t bit) { words_[bit / kWordBits] |= Mask(bit); }
  void reset(size_t bit) { words_[bit / kWordBits] &= ~Mask(bit); }

  size_t count() const {
    size_t total = 0;
    for (uint64_t w : words_) total += static_cast<size_t>(std::popcount(w));
    return total;
  }
  bool none() const {
    for (uint64_t w : words_) {
      if (w != 0) return false;
    }
    return true;
  }
  bool all() const { return count() == num_bits_; }

  // True when every bit set here is also set in `other`.
  bool IsSubsetOf(const DynamicBitset& other) const {
    for (size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & ~other.words_[i]) != 0) return false;
    }
    return true;
  }
  bool Intersects(const DynamicBitset& other) const {
    for (size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & other.words_[i]) != 0) return true;
    }
    return false;
  }

  DynamicBitset& operator|=(const DynamicBitset& other) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  DynamicBitset& operator&=(const DynamicBitset& other) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }

  // Calls fn(bit) for every set bit in ascending order.
  template <typename Fn>
  void ForEach(Fn&& fn) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      uint64_t word = words_[w];
      while (word != 0) {
        size_t bit = static_cast<size_t>(std::countr_zero(word));
        fn(w * kWordBits + bit);
        word &= word - 1;
      }
    }
  }

  friend bool operator==(const DynamicBitset&, const DynamicBitset&) = default;

 private:
  static uint64_t Mask(size_t bit) { return uint64_t{1} << (bit % kWordBits); }

  size_t num_bits_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace memsched

#endif  // MEMSCHED_BITSET_H_
