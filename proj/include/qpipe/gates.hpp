#pragma once

#include <array>
#include <cmath>
#include <span>

#include "qpipe/state.hpp"

namespace qpipe {

namespace detail {

/// Applies a 2x2 matrix to `qubit` of an amplitude vector, in place.
inline void single_qubit_gate(std::span<cdouble> amps, int n_qubits, int qubit,
                              cdouble u00, cdouble u01, cdouble u10, cdouble u11) {
    const std::size_t mask = std::size_t{1} << (n_qubits - 1 - qubit);
    const std::size_t dim = amps.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) continue;
        const std::size_t j = i | mask;
        const cdouble a0 = amps[i];
        const cdouble a1 = amps[j];
        amps[i] = u00 * a0 + u01 * a1;
        amps[j] = u10 * a0 + u11 * a1;
    }
}

inline void cnot_gate(std::span<cdouble> amps, int n_qubits, int control, int target) {
    const std::size_t cmask = std::size_t{1} << (n_qubits - 1 - control);
    const std::size_t tmask = std::size_t{1} << (n_qubits - 1 - target);
    const std::size_t dim = amps.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & cmask) && !(i & tmask)) std::swap(amps[i], amps[i | tmask]);
    }
}

/// Ry(theta) = e^{+i sigma_y theta/2} = [[cos(t/2), sin(t/2)], [-sin(t/2), cos(t/2)]].
/// Paper sign convention; opposite of the more common e^{-i sigma_y theta/2}.
inline std::array<cdouble, 4> ry_matrix(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {cdouble{c, 0}, cdouble{s, 0}, cdouble{-s, 0}, cdouble{c, 0}};
}

/// General single-qubit unitary
///   [[cos(a/2),            -e^{i g} sin(a/2)      ],
///    [e^{i b} sin(a/2),     e^{i (b+g)} cos(a/2)  ]].
inline std::array<cdouble, 4> u3_matrix(double alpha, double beta, double gamma) {
    const double c = std::cos(alpha / 2.0);
    const double s = std::sin(alpha / 2.0);
    return {cdouble{c, 0},
            -std::polar(s, gamma),
            std::polar(s, beta),
            std::polar(c, beta + gamma)};
}

/// Applies U rho U^dagger for a single-qubit gate U acting on `qubit`.
inline void single_qubit_gate_density(DensityMatrix& rho, int qubit,
                                      cdouble u00, cdouble u01, cdouble u10, cdouble u11) {
    const std::size_t d = rho.dim();
    const std::size_t mask = std::size_t{1} << (rho.n_qubits - 1 - qubit);
    // rows: rho <- U rho
    for (std::size_t i = 0; i < d; ++i) {
        if (i & mask) continue;
        const std::size_t j = i | mask;
        for (std::size_t c = 0; c < d; ++c) {
            const cdouble r0 = rho.at(i, c);
            const cdouble r1 = rho.at(j, c);
            rho.at(i, c) = u00 * r0 + u01 * r1;
            rho.at(j, c) = u10 * r0 + u11 * r1;
        }
    }
    // columns: rho <- rho U^dagger
    for (std::size_t i = 0; i < d; ++i) {
        if (i & mask) continue;
        const std::size_t j = i | mask;
        for (std::size_t r = 0; r < d; ++r) {
            const cdouble c0 = rho.at(r, i);
            const cdouble c1 = rho.at(r, j);
            rho.at(r, i) = std::conj(u00) * c0 + std::conj(u01) * c1;
            rho.at(r, j) = std::conj(u10) * c0 + std::conj(u11) * c1;
        }
    }
}

inline void cnot_gate_density(DensityMatrix& rho, int control, int target) {
    const std::size_t d = rho.dim();
    const std::size_t cmask = std::size_t{1} << (rho.n_qubits - 1 - control);
    const std::size_t tmask = std::size_t{1} << (rho.n_qubits - 1 - target);
    for (std::size_t i = 0; i < d; ++i) {
        if ((i & cmask) && !(i & tmask)) {
            const std::size_t j = i | tmask;
            for (std::size_t c = 0; c < d; ++c) std::swap(rho.at(i, c), rho.at(j, c));
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        if ((i & cmask) && !(i & tmask)) {
            const std::size_t j = i | tmask;
            for (std::size_t r = 0; r < d; ++r) std::swap(rho.at(r, i), rho.at(r, j));
        }
    }
}

inline void check_cnot_wires(int n_qubits, int control, int target, const char* who) {
    if (control < 0 || control >= n_qubits || target < 0 || target >= n_qubits)
        throw std::invalid_argument(std::string(who) + ": qubit index out of range");
    if (control == target)
        throw std::invalid_argument(std::string(who) + ": control and target must differ");
}

}  // namespace detail

inline StateVector apply_ry(StateVector state, int qubit, double angle) {
    check_qubit(state, qubit, "apply_ry");
    const auto u = detail::ry_matrix(angle);
    detail::single_qubit_gate(state.amps, state.n_qubits, qubit, u[0], u[1], u[2], u[3]);
    return state;
}

inline StateVector apply_cnot(StateVector state, int control, int target) {
    detail::check_cnot_wires(state.n_qubits, control, target, "apply_cnot");
    detail::cnot_gate(state.amps, state.n_qubits, control, target);
    return state;
}

inline StateVector apply_u3(StateVector state, int qubit, double alpha, double beta, double gamma) {
    check_qubit(state, qubit, "apply_u3");
    const auto u = detail::u3_matrix(alpha, beta, gamma);
    detail::single_qubit_gate(state.amps, state.n_qubits, qubit, u[0], u[1], u[2], u[3]);
    return state;
}

inline DensityMatrix apply_ry(DensityMatrix rho, int qubit, double angle) {
    if (qubit < 0 || qubit >= rho.n_qubits)
        throw std::invalid_argument("apply_ry: qubit index out of range");
    const auto u = detail::ry_matrix(angle);
    detail::single_qubit_gate_density(rho, qubit, u[0], u[1], u[2], u[3]);
    return rho;
}

inline DensityMatrix apply_cnot(DensityMatrix rho, int control, int target) {
    detail::check_cnot_wires(rho.n_qubits, control, target, "apply_cnot");
    detail::cnot_gate_density(rho, control, target);
    return rho;
}

inline DensityMatrix apply_u3(DensityMatrix rho, int qubit, double alpha, double beta, double gamma) {
    if (qubit < 0 || qubit >= rho.n_qubits)
        throw std::invalid_argument("apply_u3: qubit index out of range");
    const auto u = detail::u3_matrix(alpha, beta, gamma);
    detail::single_qubit_gate_density(rho, qubit, u[0], u[1], u[2], u[3]);
    return rho;
}

/// Loads a real 4-vector into the phases of a 2-qubit state:
/// amplitude on |i> is e^{i x_i} / 2. The 1/2 factor normalizes the state;
/// range normalization of x is the caller's job.
inline StateVector phase_encode(const std::array<double, 4>& x) {
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("phase_encode: non-finite component");
    StateVector state;
    state.n_qubits = 2;
    state.amps.resize(4);
    for (std::size_t i = 0; i < 4; ++i) state.amps[i] = std::polar(0.5, x[i]);
    return state;
}

}  // namespace qpipe
