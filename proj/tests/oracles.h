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

// Independent reference computations for the tests: dense Kronecker-product
// matrices and brute-force enumeration over outcome strings. Nothing here
// goes through the library's state-vector or convolution code.

#ifndef NSL_TESTS_ORACLES_H
#define NSL_TESTS_ORACLES_H

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nsl/rational.h"

namespace oracle {

using C = std::complex<double>;
using Vec = std::vector<C>;
using Mat = std::vector<Vec>;

inline Mat identity(std::size_t d) {
    Mat m(d, Vec(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) m[i][i] = 1.0;
    return m;
}

inline Mat pauli(char c) {
    const C i(0, 1);
    switch (c) {
        case 'X':
            return {{0.0, 1.0}, {1.0, 0.0}};
        case 'Y':
            return {{0.0, -i}, {i, 0.0}};
        case 'Z':
            return {{1.0, 0.0}, {0.0, -1.0}};
        default:
            return identity(2);
    }
}

// cos(t) Z + sin(t) X.
inline Mat xz_axis(double t) {
    return {{std::cos(t), std::sin(t)}, {std::sin(t), -std::cos(t)}};
}

inline Mat kron(const Mat &a, const Mat &b) {
    const std::size_t ra = a.size(), rb = b.size();
    Mat out(ra * rb, Vec(ra * rb, 0.0));
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < ra; ++j)
            for (std::size_t k = 0; k < rb; ++k)
                for (std::size_t l = 0; l < rb; ++l) out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
    return out;
}

// "XYZ" -> X (x) Y (x) Z, first character on the most significant qubit.
inline Mat pauli_string(const std::string &s) {
    Mat m = pauli(s[0]);
    for (std::size_t k = 1; k < s.size(); ++k) m = kron(m, pauli(s[k]));
    return m;
}

inline Mat matmul(const Mat &a, const Mat &b) {
    const std::size_t d = a.size();
    Mat out(d, Vec(d, 0.0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < d; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

inline Vec matvec(const Mat &m, const Vec &v) {
    Vec out(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

inline C inner(const Vec &a, const Vec &b) {
    C s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double expect(const Vec &psi, const Mat &m) {
    return inner(psi, matvec(m, psi)).real();
}

// (I + s M)/2.
inline Mat projector(const Mat &m, int s) {
    Mat p = identity(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) p[i][j] = 0.5 * (p[i][j] + static_cast<double>(s) * m[i][j]);
    return p;
}

inline double frobenius_commutator(const Mat &a, const Mat &b) {
    Mat ab = matmul(a, b), ba = matmul(b, a);
    double s = 0;
    for (std::size_t i = 0; i < ab.size(); ++i)
        for (std::size_t j = 0; j < ab.size(); ++j) s += std::norm(ab[i][j] - ba[i][j]);
    return std::sqrt(s);
}

inline Vec ghz() {
    Vec v(8, 0.0);
    v[0] = 1 / std::sqrt(2.0);
    v[7] = -1 / std::sqrt(2.0);
    return v;
}

inline Vec bell() {
    Vec v(4, 0.0);
    v[0] = 1 / std::sqrt(2.0);
    v[3] = 1 / std::sqrt(2.0);
    return v;
}

// Born probability that the listed observables return the listed outcomes.
inline double joint_probability(const Vec &psi, const std::vector<Mat> &obs, const std::vector<int> &outcomes) {
    Vec v = psi;
    for (std::size_t k = 0; k < obs.size(); ++k) v = matvec(projector(obs[k], outcomes[k]), v);
    return inner(v, v).real();
}

using RoundLaw = std::vector<std::pair<std::vector<int>, nsl::Rational>>;

// Law of per-variable outcome sums after n rounds, by walking every one of
// the |law|^n outcome strings.
inline std::map<std::vector<int>, nsl::Rational> enumerate_sums(const RoundLaw &law, int n) {
    std::map<std::vector<int>, nsl::Rational> out;
    const std::size_t m = law.size(), k = law.front().first.size();
    std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
    while (true) {
        std::vector<int> sums(k, 0);
        nsl::Rational p = 1;
        for (auto d : digits) {
            for (std::size_t v = 0; v < k; ++v) sums[v] += law[d].first[v];
            p *= law[d].second;
        }
        out[sums] += p;
        std::size_t pos = 0;
        while (pos < digits.size() && ++digits[pos] == m) digits[pos++] = 0;
        if (pos == digits.size()) break;
    }
    return out;
}

inline nsl::Rational binomial(int n, int k) {
    nsl::Rational c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

}  // namespace oracle

#endif
