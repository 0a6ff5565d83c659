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

#ifndef NSL_QUANTUM_H
#define NSL_QUANTUM_H

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsl/random.h"

namespace nsl {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix.
using Matrix2 = std::array<Complex, 4>;

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// A single-qubit +-1-valued observable: a Pauli matrix, or a spin axis in the
/// xz plane, cos(angle) Z + sin(angle) X. (Z + X)/sqrt(2) is the axis at +45
/// degrees and (Z - X)/sqrt(2) the axis at -45 degrees.
class SiteOperator {
public:
    SiteOperator() = default;
    /* implicit */ SiteOperator(Pauli p) : pauli_(p) {}

    static SiteOperator xz_axis(double angle);

    bool is_identity() const { return !rotated_ && pauli_ == Pauli::I; }
    bool is_rotated() const { return rotated_; }
    Pauli pauli() const { return pauli_; }
    double angle() const { return angle_; }

    Matrix2 matrix() const;
    std::string to_string() const;

private:
    Pauli pauli_ = Pauli::I;
    bool rotated_ = false;
    double angle_ = 0.0;
};

/// Tensor product of site operators times a sign. Qubit 0 is the most
/// significant bit of a basis index (Alice, then Bob, then Jim).
class PauliObservable {
public:
    PauliObservable(std::vector<SiteOperator> factors, int sign = +1);

    /// Parses strings such as "XXX", "-YXY" or "ZZI".
    static PauliObservable parse(const std::string &text);

    /// `op` on `qubit`, identity elsewhere.
    static PauliObservable local(int n_qubits, int qubit, SiteOperator op);

    int n_qubits() const { return static_cast<int>(factors_.size()); }
    int sign() const { return sign_; }
    const std::vector<SiteOperator> &factors() const { return factors_; }

    /// Product of two observables acting on disjoint qubits (a tensor
    /// product, hence again +-1-valued). Throws std::invalid_argument when
    /// both act non-trivially on the same qubit.
    PauliObservable disjoint_product(const PauliObservable &other) const;

    std::string to_string() const;

private:
    std::vector<SiteOperator> factors_;
    int sign_;
};

inline constexpr int kMaxQubits = 12;

class PureState {
public:
    /// Throws std::invalid_argument unless the length is 2^n with
    /// 1 <= n <= kMaxQubits and the squared norm is 1 within 1e-12.
    explicit PureState(std::vector<Complex> amplitudes);

    static PureState basis(int n_qubits, std::uint64_t index);

    int n_qubits() const { return n_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }

    double norm_squared() const;

private:
    std::vector<Complex> amplitudes_;
    int n_qubits_;
};

/// (|000> - |111>)/sqrt(2), with |0> = spin up along z.
PureState ghz_state();

/// (|00> + |11>)/sqrt(2).
PureState bell_state();

/// O|psi> for an arbitrary (not necessarily normalized) vector.
std::vector<Complex> apply_observable(const PauliObservable &obs, std::span<const Complex> vec);

double expectation(const PureState &state, const PauliObservable &obs);

/// Born probability of `outcome` (+1 or -1), <psi|(I + outcome O)/2|psi>.
double outcome_probability(const PureState &state, const PauliObservable &obs, int outcome);

/// Frobenius norm of [a, b].
double commutator_norm(const PauliObservable &a, const PauliObservable &b);

struct MeasurementRecord {
    PauliObservable observable;
    int outcome;
    PureState post_state;
};

/// Normalized projection onto the `outcome` eigenspace. Throws
/// std::domain_error if that outcome has zero probability.
PureState project(const PureState &state, const PauliObservable &obs, int outcome);

MeasurementRecord measure(const PureState &state, const PauliObservable &obs, RandomStream &rng);

inline constexpr double kCommutatorThreshold = 1e-10;

class NonCommutingError : public std::invalid_argument {
public:
    NonCommutingError(std::size_t first, std::size_t second, double norm);
    std::size_t first;
    std::size_t second;
    double norm;
};

/// Measures the observables in order, collapsing the state after each one.
/// Every pair must commute (commutator norm below kCommutatorThreshold);
/// otherwise throws NonCommutingError naming the first offending pair.
std::vector<MeasurementRecord> sequential_measure(
    const PureState &state, std::span<const PauliObservable> observables, RandomStream &rng);

/// A simultaneous +-1 assignment to the six GHZ variables.
struct HiddenAssignment {
    int a_x, a_y, b_x, b_y, j_x, j_y;
    bool operator==(const HiddenAssignment &) const = default;
};

/// The four GHZ product constraints, usable as a bit mask.
enum GhzConstraint : unsigned {
    kXXX = 1u << 0,  // a_x b_x j_x = -1
    kXYY = 1u << 1,  // a_x b_y j_y = +1
    kYXY = 1u << 2,  // a_y b_x j_y = +1
    kYYX = 1u << 3,  // a_y b_y j_x = +1
    kAllGhzConstraints = kXXX | kXYY | kYXY | kYYX,
};

/// Exhaustively searches all 64 assignments and returns those satisfying
/// every constraint in `constraints`.
std::vector<HiddenAssignment> ghz_assignment_search(unsigned constraints = kAllGhzConstraints);

nlohmann::json to_json(const PureState &state);
nlohmann::json to_json(const MeasurementRecord &record);

}  // namespace nsl

#endif
