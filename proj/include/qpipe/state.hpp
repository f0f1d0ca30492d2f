#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpipe {

using cdouble = std::complex<double>;

inline constexpr int kMaxQubits = 3;

/// Pure state of n qubits as 2^n complex amplitudes.
///
/// Bit convention (fixed project-wide): qubit 0 is the MOST significant bit
/// of the basis index. For two qubits, wire A (compressed) = qubit 0 and
/// wire B (trash) = qubit 1, so index = bit(A) << 1 | bit(B).
struct StateVector {
    int n_qubits = 0;
    std::vector<cdouble> amps;

    std::size_t dim() const { return amps.size(); }

    /// Value of `qubit`'s bit within basis index `index`.
    int bit(std::size_t index, int qubit) const {
        return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1U);
    }
};

/// Mixed state of n qubits; row-major 2^n x 2^n Hermitian matrix.
struct DensityMatrix {
    int n_qubits = 0;
    std::vector<cdouble> m;

    std::size_t dim() const { return std::size_t{1} << n_qubits; }
    cdouble& at(std::size_t i, std::size_t j) { return m[i * dim() + j]; }
    const cdouble& at(std::size_t i, std::size_t j) const { return m[i * dim() + j]; }

    int bit(std::size_t index, int qubit) const {
        return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1U);
    }
};

/// Histogram of sampled measurement outcomes, keyed by bit strings over the
/// measured qubits in the order they were requested.
struct MeasurementCounts {
    std::map<std::string, std::int64_t> counts;
    std::int64_t total_shots = 0;
    std::uint64_t seed = 0;
};

inline void check_qubit(const StateVector& state, int qubit, const char* who) {
    if (qubit < 0 || qubit >= state.n_qubits)
        throw std::invalid_argument(std::string(who) + ": qubit index out of range");
}

/// |0...0> on n_qubits wires, 1 <= n_qubits <= 3.
inline StateVector statevector_init(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw std::invalid_argument("statevector_init: n_qubits must be in [1, 3]");
    StateVector state;
    state.n_qubits = n_qubits;
    state.amps.assign(std::size_t{1} << n_qubits, cdouble{0.0, 0.0});
    state.amps[0] = cdouble{1.0, 0.0};
    return state;
}

inline double norm_squared(const StateVector& state) {
    double total = 0.0;
    for (const auto& a : state.amps) total += std::norm(a);
    return total;
}

/// |psi><psi|
inline DensityMatrix density_from_state(const StateVector& state) {
    DensityMatrix rho;
    rho.n_qubits = state.n_qubits;
    const std::size_t d = state.dim();
    rho.m.resize(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            rho.m[i * d + j] = state.amps[i] * std::conj(state.amps[j]);
    return rho;
}

inline cdouble trace(const DensityMatrix& rho) {
    cdouble t{0.0, 0.0};
    for (std::size_t i = 0; i < rho.dim(); ++i) t += rho.at(i, i);
    return t;
}

/// Re Tr[rho^2]; 1 for pure states.
inline double purity(const DensityMatrix& rho) {
    const std::size_t d = rho.dim();
    cdouble t{0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) t += rho.at(i, k) * rho.at(k, i);
    return t.real();
}

/// Smaller eigenvalue of a 2x2 Hermitian matrix.
inline double min_eigenvalue_2x2(const DensityMatrix& rho) {
    if (rho.dim() != 2) throw std::invalid_argument("min_eigenvalue_2x2: expected a 1-qubit matrix");
    const double a = rho.at(0, 0).real();
    const double d = rho.at(1, 1).real();
    const double off = std::abs(rho.at(0, 1));
    const double mid = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + off * off);
    return mid - rad;
}

}  // namespace qpipe
