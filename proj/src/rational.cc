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

#include "nsl/rational.h"

#include <cmath>
#include <stdexcept>

namespace nsl {

std::string to_string(const Rational &r) {
    if (denominator(r) == 1) {
        return numerator(r).str();
    }
    return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(const std::string &text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(BigInt(text));
        }
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) {
            throw std::invalid_argument("zero denominator");
        }
        return Rational(num, den);
    } catch (const std::runtime_error &) {
        throw std::invalid_argument("malformed rational: '" + text + "'");
    }
}

double to_double(const Rational &r) {
    return r.convert_to<double>();
}

Rational rationalize(double value, double tolerance, std::int64_t max_denominator) {
    if (!std::isfinite(value)) {
        throw std::domain_error("cannot rationalize a non-finite value");
    }
    // Continued-fraction convergents h/k of value.
    std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(value));
    std::int64_t k_prev = 0, k = 1;
    double rest = value - std::floor(value);
    while (true) {
        if (std::fabs(static_cast<double>(h) / static_cast<double>(k) - value) <= tolerance) {
            return Rational(h, k);
        }
        if (rest < 1e-300) {
            break;
        }
        double inv = 1.0 / rest;
        auto a = static_cast<std::int64_t>(std::floor(inv));
        rest = inv - std::floor(inv);
        std::int64_t k_next = a * k + k_prev;
        if (a > max_denominator || k_next > max_denominator) {
            break;
        }
        std::int64_t h_next = a * h + h_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
    throw std::domain_error("no rational within tolerance of " + std::to_string(value));
}

Rational pow2(int exponent) {
    BigInt one = 1;
    if (exponent >= 0) {
        return Rational(one << exponent);
    }
    return Rational(one, one << -exponent);
}

}  // namespace nsl
