#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpipe/errors.hpp"
#include "qpipe/rng.hpp"
#include "qpipe/state.hpp"

namespace qpipe {

/// Probability floor below which a post-selection outcome counts as impossible.
inline constexpr double kPostselectFloor = 1e-12;

/// Shot-based evaluation request: `shots` samples drawn from the stream `seed`.
struct ShotsSpec {
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
};

/// <Z> on one qubit: sum of +-|a_i|^2 with the sign given by the qubit's bit.
inline double expectation_z(const StateVector& state, int qubit) {
    check_qubit(state, qubit, "expectation_z");
    double value = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const double p = std::norm(state.amps[i]);
        value += state.bit(i, qubit) ? -p : p;
    }
    return value;
}

/// Draws `shots` i.i.d. outcomes over the listed qubits from the Born
/// distribution. Deterministic for a given seed.
inline MeasurementCounts sample_shots(const StateVector& state, std::span<const int> qubits,
                                      std::int64_t shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample_shots: shots must be >= 1");
    for (int q : qubits) check_qubit(state, q, "sample_shots");
    if (qubits.empty()) throw std::invalid_argument("sample_shots: empty qubit list");

    const std::size_t n_outcomes = std::size_t{1} << qubits.size();
    std::vector<double> prob(n_outcomes, 0.0);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        std::size_t outcome = 0;
        for (std::size_t k = 0; k < qubits.size(); ++k)
            outcome = (outcome << 1) | static_cast<std::size_t>(state.bit(i, qubits[k]));
        prob[outcome] += std::norm(state.amps[i]);
    }
    std::vector<double> cumulative(n_outcomes);
    double running = 0.0;
    for (std::size_t o = 0; o < n_outcomes; ++o) {
        running += prob[o];
        cumulative[o] = running;
    }
    cumulative.back() = 1.0;  // guard the last bin against rounding

    auto outcome_key = [&](std::size_t o) {
        std::string key(qubits.size(), '0');
        for (std::size_t k = 0; k < qubits.size(); ++k)
            if (o >> (qubits.size() - 1 - k) & 1) key[k] = '1';
        return key;
    };

    MeasurementCounts result;
    result.total_shots = shots;
    result.seed = seed;
    Rng rng(seed);
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform();
        const std::size_t o = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        ++result.counts[outcome_key(std::min(o, n_outcomes - 1))];
    }
    return result;
}

/// Reduced density matrix of the kept qubit of a 2-qubit pure state.
inline DensityMatrix partial_trace(const StateVector& state, int keep) {
    if (state.n_qubits != 2) throw std::invalid_argument("partial_trace: expected a 2-qubit state");
    check_qubit(state, keep, "partial_trace");
    const int other = 1 - keep;
    auto index = [&](int keep_bit, int other_bit) {
        std::size_t i = 0;
        i |= static_cast<std::size_t>(keep_bit) << (1 - keep);
        i |= static_cast<std::size_t>(other_bit) << (1 - other);
        return i;
    };
    DensityMatrix rho;
    rho.n_qubits = 1;
    rho.m.assign(4, cdouble{0.0, 0.0});
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int t = 0; t < 2; ++t)
                rho.at(a, b) += state.amps[index(a, t)] * std::conj(state.amps[index(b, t)]);
    return rho;
}

/// Reduced density matrix of the kept qubit of a 2-qubit mixed state.
inline DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
    if (rho.n_qubits != 2) throw std::invalid_argument("partial_trace: expected a 2-qubit state");
    if (keep < 0 || keep >= 2) throw std::invalid_argument("partial_trace: qubit index out of range");
    const int other = 1 - keep;
    auto index = [&](int keep_bit, int other_bit) {
        std::size_t i = 0;
        i |= static_cast<std::size_t>(keep_bit) << (1 - keep);
        i |= static_cast<std::size_t>(other_bit) << (1 - other);
        return i;
    };
    DensityMatrix out;
    out.n_qubits = 1;
    out.m.assign(4, cdouble{0.0, 0.0});
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int t = 0; t < 2; ++t)
                out.at(a, b) += rho.at(index(a, t), index(b, t));
    return out;
}

struct Postselection {
    StateVector state;   // renormalized state of the remaining qubit
    double probability;  // probability of the conditioned outcome
};

/// Projects a 2-qubit state onto `outcome` of `qubit` and renormalizes the
/// surviving single-qubit state. Throws PostselectionError when the outcome
/// probability is below kPostselectFloor.
inline Postselection postselect(const StateVector& state, int qubit, int outcome) {
    if (state.n_qubits != 2) throw std::invalid_argument("postselect: expected a 2-qubit state");
    check_qubit(state, qubit, "postselect");
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("postselect: outcome must be 0 or 1");

    double p = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        if (state.bit(i, qubit) == outcome) p += std::norm(state.amps[i]);
    if (p <= kPostselectFloor)
        throw PostselectionError("postselect: outcome probability " + std::to_string(p) +
                                 " is below the impossibility floor");

    const int kept = 1 - qubit;
    StateVector out;
    out.n_qubits = 1;
    out.amps.resize(2);
    const double scale = 1.0 / std::sqrt(p);
    for (int v = 0; v < 2; ++v) {
        std::size_t i = 0;
        i |= static_cast<std::size_t>(outcome) << (1 - qubit);
        i |= static_cast<std::size_t>(v) << (1 - kept);
        out.amps[v] = state.amps[i] * scale;
    }
    return {std::move(out), p};
}

/// Tensors a fresh |0> wire into a 1-qubit pure state at `position`.
inline StateVector attach_ground_qubit(const StateVector& state, int position) {
    if (state.n_qubits != 1) throw std::invalid_argument("attach_ground_qubit: expected a 1-qubit state");
    if (position < 0 || position > 1) throw std::invalid_argument("attach_ground_qubit: position must be 0 or 1");
    const int data = 1 - position;
    StateVector out;
    out.n_qubits = 2;
    out.amps.assign(4, cdouble{0.0, 0.0});
    for (int v = 0; v < 2; ++v) out.amps[static_cast<std::size_t>(v) << (1 - data)] = state.amps[v];
    return out;
}

/// Tensors |0><0| into a 1-qubit density matrix at `position`.
inline DensityMatrix attach_ground_qubit(const DensityMatrix& rho, int position) {
    if (rho.n_qubits != 1) throw std::invalid_argument("attach_ground_qubit: expected a 1-qubit state");
    if (position < 0 || position > 1) throw std::invalid_argument("attach_ground_qubit: position must be 0 or 1");
    const int data = 1 - position;
    DensityMatrix out;
    out.n_qubits = 2;
    out.m.assign(16, cdouble{0.0, 0.0});
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            out.at(static_cast<std::size_t>(a) << (1 - data), static_cast<std::size_t>(b) << (1 - data)) =
                rho.at(a, b);
    return out;
}

/// Tr[rho sigma] for a pure rho; equals |<psi|phi>|^2 when both are pure.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.n_qubits != sigma.n_qubits)
        throw std::invalid_argument("fidelity: dimension mismatch");
    if (std::abs(purity(rho) - 1.0) > 1e-8)
        throw std::invalid_argument("fidelity: rho must be pure (rank 1 within 1e-8)");
    const std::size_t d = rho.dim();
    cdouble t{0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) t += rho.at(i, k) * sigma.at(k, i);
    return std::clamp(t.real(), 0.0, 1.0);
}

}  // namespace qpipe
