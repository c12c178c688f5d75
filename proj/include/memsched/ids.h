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

#ifndef MEMSCHED_IDS_H_
#define MEMSCHED_IDS_H_

#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>

namespace memsched {

// Dense index into one of the graph's id spaces. Operators and tensors use
// distinct tag types so they cannot be mixed up.
template <typename Tag>
class StrongId {
 public:
  using ValueType = uint32_t;
  static constexpr ValueType kInvalid = std::numeric_limits<ValueType>::max();

  constexpr StrongId() = default;
  template <std::integral I>
  constexpr explicit StrongId(I value)
      : value_(static_cast<ValueType>(value)) {}

  constexpr ValueType value() const { return value_; }
  constexpr size_t index() const { return value_; }
  constexpr bool valid() const { return value_ != kInvalid; }

  friend constexpr auto operator<=>(StrongId, StrongId) = default;

 private:
  ValueType value_ = kInvalid;
};

struct OpTag {};
struct TensorTag {};

using OpId = StrongId<OpTag>;
using TensorId = StrongId<TensorTag>;

}  // namespace memsched

template <typename Tag>
struct std::hash<memsched::StrongId<Tag>> {
  size_t operator()(memsched::StrongId<Tag> id) const noexcept {
    return std::hash<uint32_t>{}(id.value());
  }
};

#endif  // MEMSCHED_IDS_H_
