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

#include "nsl/quantum.h"

#include <cmath>
#include <numbers>

namespace nsl {

namespace {

constexpr double kNormTolerance = 1e-12;

bool is_power_of_two(std::size_t v) {
    return v != 0 && (v & (v - 1)) == 0;
}

// Applies a 2x2 matrix to `qubit` of `vec` in place.
void apply_site(const Matrix2 &m, int qubit, int n_qubits, std::vector<Complex> &vec) {
    const std::size_t stride = std::size_t{1} << (n_qubits - 1 - qubit);
    for (std::size_t base = 0; base < vec.size(); base += 2 * stride) {
        for (std::size_t k = base; k < base + stride; ++k) {
            Complex v0 = vec[k];
            Complex v1 = vec[k + stride];
            vec[k] = m[0] * v0 + m[1] * v1;
            vec[k + stride] = m[2] * v0 + m[3] * v1;
        }
    }
}

void check_dimensions(const PureState &state, const PauliObservable &obs) {
    if (state.n_qubits() != obs.n_qubits()) {
        throw std::invalid_argument(
            "observable " + obs.to_string() + " acts on " + std::to_string(obs.n_qubits()) +
            " qubits but the state has " + std::to_string(state.n_qubits()));
    }
}

// (psi + s O psi)/2, unnormalized.
std::vector<Complex> projected(const PureState &state, const PauliObservable &obs, int outcome) {
    if (outcome != 1 && outcome != -1) {
        throw std::invalid_argument("outcome must be +1 or -1");
    }
    check_dimensions(state, obs);
    auto amps = state.amplitudes();
    auto o_psi = apply_observable(obs, amps);
    std::vector<Complex> out(amps.size());
    for (std::size_t k = 0; k < amps.size(); ++k) {
        out[k] = 0.5 * (amps[k] + static_cast<double>(outcome) * o_psi[k]);
    }
    return out;
}

double squared_norm(std::span<const Complex> v) {
    double s = 0;
    for (const auto &c : v) {
        s += std::norm(c);
    }
    return s;
}

}  // namespace

SiteOperator SiteOperator::xz_axis(double angle) {
    SiteOperator op;
    op.rotated_ = true;
    op.angle_ = angle;
    return op;
}

Matrix2 SiteOperator::matrix() const {
    using namespace std::complex_literals;
    if (rotated_) {
        double c = std::cos(angle_), s = std::sin(angle_);
        return {c, s, s, -c};
    }
    switch (pauli_) {
        case Pauli::I:
            return {1.0, 0.0, 0.0, 1.0};
        case Pauli::X:
            return {0.0, 1.0, 1.0, 0.0};
        case Pauli::Y:
            return {0.0, -1.0i, 1.0i, 0.0};
        case Pauli::Z:
            return {1.0, 0.0, 0.0, -1.0};
    }
    throw std::logic_error("unreachable");
}

std::string SiteOperator::to_string() const {
    if (rotated_) {
        return "R(" + std::to_string(angle_) + ")";
    }
    return std::string(1, "IXYZ"[static_cast<int>(pauli_)]);
}

PauliObservable::PauliObservable(std::vector<SiteOperator> factors, int sign)
    : factors_(std::move(factors)), sign_(sign) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("observable sign must be +1 or -1");
    }
    if (factors_.empty() || factors_.size() > static_cast<std::size_t>(kMaxQubits)) {
        throw std::invalid_argument("observable must act on 1.." + std::to_string(kMaxQubits) + " qubits");
    }
}

PauliObservable PauliObservable::parse(const std::string &text) {
    int sign = 1;
    std::size_t pos = 0;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
        sign = text[0] == '-' ? -1 : 1;
        pos = 1;
    }
    std::vector<SiteOperator> factors;
    for (; pos < text.size(); ++pos) {
        switch (text[pos]) {
            case 'I':
            case '_':
                factors.emplace_back(Pauli::I);
                break;
            case 'X':
                factors.emplace_back(Pauli::X);
                break;
            case 'Y':
                factors.emplace_back(Pauli::Y);
                break;
            case 'Z':
                factors.emplace_back(Pauli::Z);
                break;
            default:
                throw std::invalid_argument("unrecognized Pauli character in '" + text + "'");
        }
    }
    return PauliObservable(std::move(factors), sign);
}

PauliObservable PauliObservable::local(int n_qubits, int qubit, SiteOperator op) {
    if (qubit < 0 || qubit >= n_qubits) {
        throw std::invalid_argument("qubit index out of range");
    }
    std::vector<SiteOperator> factors(static_cast<std::size_t>(n_qubits));
    factors[static_cast<std::size_t>(qubit)] = op;
    return PauliObservable(std::move(factors));
}

PauliObservable PauliObservable::disjoint_product(const PauliObservable &other) const {
    if (other.n_qubits() != n_qubits()) {
        throw std::invalid_argument("observables act on different numbers of qubits");
    }
    std::vector<SiteOperator> factors = factors_;
    for (std::size_t q = 0; q < factors.size(); ++q) {
        const auto &f = other.factors_[q];
        if (f.is_identity()) {
            continue;
        }
        if (!factors[q].is_identity()) {
            throw std::invalid_argument("observables overlap on qubit " + std::to_string(q));
        }
        factors[q] = f;
    }
    return PauliObservable(std::move(factors), sign_ * other.sign_);
}

std::string PauliObservable::to_string() const {
    std::string out = sign_ < 0 ? "-" : "";
    for (const auto &f : factors_) {
        out += f.to_string();
    }
    return out;
}

PureState::PureState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)), n_qubits_(0) {
    if (!is_power_of_two(amplitudes_.size()) || amplitudes_.size() < 2) {
        throw std::invalid_argument("amplitude count must be a power of two >= 2");
    }
    while ((std::size_t{1} << n_qubits_) < amplitudes_.size()) {
        ++n_qubits_;
    }
    if (n_qubits_ > kMaxQubits) {
        throw std::invalid_argument("at most " + std::to_string(kMaxQubits) + " qubits are supported");
    }
    if (std::fabs(norm_squared() - 1.0) > kNormTolerance) {
        throw std::invalid_argument("state is not normalized (|psi|^2 = " + std::to_string(norm_squared()) + ")");
    }
}

PureState PureState::basis(int n_qubits, std::uint64_t index) {
    if (n_qubits < 1 || n_qubits > kMaxQubits || index >= (std::uint64_t{1} << n_qubits)) {
        throw std::invalid_argument("basis index out of range");
    }
    std::vector<Complex> amps(std::size_t{1} << n_qubits);
    amps[index] = 1.0;
    return PureState(std::move(amps));
}

double PureState::norm_squared() const {
    return squared_norm(amplitudes_);
}

PureState ghz_state() {
    std::vector<Complex> amps(8);
    amps[0] = std::numbers::sqrt2 / 2;
    amps[7] = -std::numbers::sqrt2 / 2;
    return PureState(std::move(amps));
}

PureState bell_state() {
    std::vector<Complex> amps(4);
    amps[0] = std::numbers::sqrt2 / 2;
    amps[3] = std::numbers::sqrt2 / 2;
    return PureState(std::move(amps));
}

std::vector<Complex> apply_observable(const PauliObservable &obs, std::span<const Complex> vec) {
    if (vec.size() != (std::size_t{1} << obs.n_qubits())) {
        throw std::invalid_argument("vector length does not match observable " + obs.to_string());
    }
    std::vector<Complex> out(vec.begin(), vec.end());
    for (int q = 0; q < obs.n_qubits(); ++q) {
        const auto &f = obs.factors()[static_cast<std::size_t>(q)];
        if (!f.is_identity()) {
            apply_site(f.matrix(), q, obs.n_qubits(), out);
        }
    }
    if (obs.sign() < 0) {
        for (auto &c : out) {
            c = -c;
        }
    }
    return out;
}

double expectation(const PureState &state, const PauliObservable &obs) {
    check_dimensions(state, obs);
    auto amps = state.amplitudes();
    auto o_psi = apply_observable(obs, amps);
    Complex acc = 0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        acc += std::conj(amps[k]) * o_psi[k];
    }
    return acc.real();
}

double outcome_probability(const PureState &state, const PauliObservable &obs, int outcome) {
    return squared_norm(projected(state, obs, outcome));
}

double commutator_norm(const PauliObservable &a, const PauliObservable &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("commutator of observables on different qubit counts");
    }
    // Column by column: ||[A,B]||_F^2 = sum_k ||(AB - BA) e_k||^2.
    const std::size_t dim = std::size_t{1} << a.n_qubits();
    std::vector<Complex> e(dim);
    double total = 0;
    for (std::size_t k = 0; k < dim; ++k) {
        e[k] = 1.0;
        auto ab = apply_observable(a, apply_observable(b, e));
        auto ba = apply_observable(b, apply_observable(a, e));
        for (std::size_t r = 0; r < dim; ++r) {
            total += std::norm(ab[r] - ba[r]);
        }
        e[k] = 0.0;
    }
    return std::sqrt(total);
}

PureState project(const PureState &state, const PauliObservable &obs, int outcome) {
    auto v = projected(state, obs, outcome);
    double p = squared_norm(v);
    if (p <= 0.0) {
        throw std::domain_error("outcome " + std::to_string(outcome) + " of " + obs.to_string() +
                                " has zero probability");
    }
    double scale = 1.0 / std::sqrt(p);
    for (auto &c : v) {
        c *= scale;
    }
    return PureState(std::move(v));
}

MeasurementRecord measure(const PureState &state, const PauliObservable &obs, RandomStream &rng) {
    double p_plus = outcome_probability(state, obs, +1);
    int outcome = rng.sign(p_plus);
    return MeasurementRecord{obs, outcome, project(state, obs, outcome)};
}

NonCommutingError::NonCommutingError(std::size_t first, std::size_t second, double norm)
    : std::invalid_argument("observables " + std::to_string(first) + " and " + std::to_string(second) +
                            " do not commute (commutator norm " + std::to_string(norm) + ")"),
      first(first), second(second), norm(norm) {}

std::vector<MeasurementRecord> sequential_measure(
    const PureState &state, std::span<const PauliObservable> observables, RandomStream &rng) {
    for (std::size_t i = 0; i < observables.size(); ++i) {
        for (std::size_t j = i + 1; j < observables.size(); ++j) {
            double norm = commutator_norm(observables[i], observables[j]);
            if (norm >= kCommutatorThreshold) {
                throw NonCommutingError(i, j, norm);
            }
        }
    }
    std::vector<MeasurementRecord> records;
    records.reserve(observables.size());
    const PureState *current = &state;
    for (const auto &obs : observables) {
        records.push_back(measure(*current, obs, rng));
        current = &records.back().post_state;
    }
    return records;
}

std::vector<HiddenAssignment> ghz_assignment_search(unsigned constraints) {
    std::vector<HiddenAssignment> found;
    for (unsigned bits = 0; bits < 64; ++bits) {
        auto v = [bits](int k) { return (bits >> k) & 1u ? -1 : 1; };
        HiddenAssignment h{v(0), v(1), v(2), v(3), v(4), v(5)};
        bool ok = true;
        if (constraints & kXXX) ok = ok && h.a_x * h.b_x * h.j_x == -1;
        if (constraints & kXYY) ok = ok && h.a_x * h.b_y * h.j_y == 1;
        if (constraints & kYXY) ok = ok && h.a_y * h.b_x * h.j_y == 1;
        if (constraints & kYYX) ok = ok && h.a_y * h.b_y * h.j_x == 1;
        if (ok) {
            found.push_back(h);
        }
    }
    return found;
}

nlohmann::json to_json(const PureState &state) {
    nlohmann::json amps = nlohmann::json::array();
    for (const auto &c : state.amplitudes()) {
        amps.push_back({c.real(), c.imag()});
    }
    return {{"n_qubits", state.n_qubits()}, {"amplitudes", amps}};
}

nlohmann::json to_json(const MeasurementRecord &record) {
    return {
        {"observable", record.observable.to_string()},
        {"outcome", record.outcome},
        {"post_state", to_json(record.post_state)},
    };
}

}  // namespace nsl
