// Copyright 2026 The nosig-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NSL_RATIONAL_H
#define NSL_RATIONAL_H

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace nsl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Renders "p/q", or "p" when the denominator is one.
std::string to_string(const Rational &r);

/// Parses "p/q" or "p". Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string &text);

double to_double(const Rational &r);

/// Recovers the small-denominator rational behind a floating-point
/// probability computed from exact amplitudes (e.g. 0.4999999999999999 ->
/// 1/2). Throws std::domain_error when no rational with denominator at most
/// `max_denominator` lies within `tolerance` of `value`. The default keeps
/// max_denominator^2 * tolerance well below 1, so generic irrationals fail.
Rational rationalize(double value, double tolerance = 1e-12, std::int64_t max_denominator = std::int64_t{1} << 16);

Rational pow2(int exponent);

}  // namespace nsl

#endif
