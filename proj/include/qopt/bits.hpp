// Copyright 2026 The qopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QOPT_BITS_HPP_INCLUDED
#define QOPT_BITS_HPP_INCLUDED

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qopt/error.hpp"

namespace qopt {

// A binary search vector, one byte per bit, entries 0 or 1.
using Bits = std::vector<std::uint8_t>;
using BitsView = std::span<const std::uint8_t>;

// Bit i of the vector is bit (n-1-i) of the index, so enumerating indices
// 0..2^n-1 visits bit vectors in lexicographic order.
inline Bits bits_from_index(std::uint64_t index, std::size_t n) {
  Bits q(n);
  for (std::size_t i = 0; i < n; ++i)
    q[i] = static_cast<std::uint8_t>((index >> (n - 1 - i)) & 1u);
  return q;
}

inline std::uint64_t index_from_bits(BitsView q) {
  if (q.size() > 64)
    throw InvalidArgument("bit vector longer than 64 has no index form");
  std::uint64_t index = 0;
  for (auto b : q)
    index = (index << 1) | (b & 1u);
  return index;
}

inline std::string to_string(BitsView q) {
  std::string s(q.size(), '0');
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i])
      s[i] = '1';
  return s;
}

inline Bits bits_from_string(std::string_view s) {
  Bits q(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      q[i] = 1;
    else if (s[i] != '0')
      throw InvalidArgument("bit string contains '" + std::string(1, s[i]) +
                            "' at position " + std::to_string(i));
  }
  return q;
}

inline bool is_binary(BitsView q) {
  for (auto b : q)
    if (b > 1)
      return false;
  return true;
}

// Largest n accepted by the exhaustive enumerators unless the caller opts in.
inline constexpr std::size_t kDefaultExhaustiveLimit = 26;

inline void require_exhaustive(std::size_t n, std::size_t limit,
                               const char *what) {
  if (n > limit)
    throw Refusal(std::string(what) + ": " + std::to_string(n) +
                  " bits exceeds the exhaustive limit of " +
                  std::to_string(limit) + " (raise --limit-exhaustive)");
  if (n > 62)
    throw Refusal(std::string(what) + ": exhaustive enumeration is capped at 62 bits");
}

} // namespace qopt

#endif // QOPT_BITS_HPP_INCLUDED
