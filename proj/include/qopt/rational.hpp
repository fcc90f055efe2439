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

#ifndef QOPT_RATIONAL_HPP_INCLUDED
#define QOPT_RATIONAL_HPP_INCLUDED

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

#include "qopt/error.hpp"

namespace qopt {

using Rational = boost::rational<std::int64_t>;

// Mixed Rational/int equality recurses under C++20 rewritten comparisons in
// boost::rational, so compare against the numerator instead.
inline bool is_zero(const Rational &r) { return r.numerator() == 0; }

inline double to_double(const Rational &r) {
  return boost::rational_cast<double>(r);
}

inline std::int64_t floor(const Rational &r) {
  auto q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0)
    --q;
  return q;
}

inline std::int64_t ceil(const Rational &r) {
  auto q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0)
    ++q;
  return q;
}

// "p/q" or a plain integer.
inline std::string format_rational(const Rational &r) {
  if (r.denominator() == 1)
    return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view part) {
    std::int64_t v = 0;
    auto first = part.data();
    if (!part.empty() && part.front() == '+')
      ++first;
    auto [ptr, ec] = std::from_chars(first, part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty())
      throw InvalidArgument("malformed rational '" + std::string(text) + "'");
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return Rational(parse_int(text));
  auto den = parse_int(text.substr(slash + 1));
  if (den == 0)
    throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

} // namespace qopt

#endif // QOPT_RATIONAL_HPP_INCLUDED
