#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpipe/adam.hpp"
#include "qpipe/dataset.hpp"
#include "qpipe/errors.hpp"
#include "qpipe/gates.hpp"
#include "qpipe/measure.hpp"
#include "qpipe/rng.hpp"
#include "qpipe/state.hpp"

namespace qpipe {

inline constexpr int kQaeParamCount = 6;
inline constexpr int kCompressedQubit = 0;  // wire A
inline constexpr int kTrashQubit = 1;       // wire B

/// Ansatz convention baked into saved models: gate order, CNOT orientation,
/// rotation sign, bit ordering.
inline constexpr const char* kAnsatzTag = "ry(q0,q1)|cnot(q0->q1)|ry(q0,q1)|cnot(q0->q1)|ry(q0,q1);ry=exp(+i*sy*t/2);q0=msb";
inline constexpr const char* kNormalizationTag = "x<-pi*x/l2norm(x)";

/// Trained encoder parameters plus training provenance.
struct QaeModel {
    std::array<double, kQaeParamCount> theta{};
    int epochs_run = 0;
    int best_epoch = -1;  // 0-based epoch whose parameters these are
    double final_train_loss = std::numeric_limits<double>::quiet_NaN();
    double final_val_loss = std::numeric_limits<double>::quiet_NaN();
    double best_val_loss = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t seed = 0;
    std::string ansatz = kAnsatzTag;
    std::string normalization = kNormalizationTag;
};

struct TrainConfig {
    double learning_rate = 0.001;
    int batch_size = 20;
    int epochs = 100;
    std::uint64_t seed = 0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
};

namespace detail {

inline void check_theta(std::span<const double> theta, const char* who) {
    if (theta.size() != kQaeParamCount)
        throw std::invalid_argument(std::string(who) + ": expected 6 parameters, got " +
                                    std::to_string(theta.size()));
}

/// Encoder on raw 2-qubit amplitudes. `adjoint` runs the decoder
/// (reversed gate order, negated angles).
inline void encoder_in_place(std::span<cdouble> amps, std::span<const double> theta, bool adjoint) {
    struct Op {
        int kind;  // 0: ry, 1: cnot
        int qubit;
        int param;
    };
    static constexpr Op kOps[] = {
        {0, 0, 0}, {0, 1, 1}, {1, 0, -1}, {0, 0, 2}, {0, 1, 3}, {1, 0, -1}, {0, 0, 4}, {0, 1, 5},
    };
    constexpr int n_ops = static_cast<int>(sizeof(kOps) / sizeof(kOps[0]));
    for (int step = 0; step < n_ops; ++step) {
        const Op& op = kOps[adjoint ? n_ops - 1 - step : step];
        if (op.kind == 1) {
            cnot_gate(amps, 2, 0, 1);
        } else {
            const double angle = adjoint ? -theta[op.param] : theta[op.param];
            const auto u = ry_matrix(angle);
            single_qubit_gate(amps, 2, op.qubit, u[0], u[1], u[2], u[3]);
        }
    }
}

/// 1 - <Z_B> for one already-encoded state, evaluated in place.
inline double trash_loss(std::array<cdouble, 4> amps, std::span<const double> theta) {
    encoder_in_place(amps, theta, false);
    const double z = std::norm(amps[0]) - std::norm(amps[1]) + std::norm(amps[2]) - std::norm(amps[3]);
    return 1.0 - z;
}

inline double loss_over_encoded(std::span<const std::array<cdouble, 4>> encoded,
                                std::span<const std::size_t> subset, std::span<const double> theta) {
    double total = 0.0;
    for (std::size_t idx : subset) total += trash_loss(encoded[idx], theta);
    return total / static_cast<double>(subset.size());
}

inline std::array<cdouble, 4> encode_amps(const FeatureVec& x) {
    const StateVector s = phase_encode(x);
    return {s.amps[0], s.amps[1], s.amps[2], s.amps[3]};
}

}  // namespace detail

/// Fig. 4b ansatz: Ry layer, CNOT(A->B), Ry layer, CNOT(A->B), Ry layer.
/// theta ordered (q0, q1) within each layer.
inline StateVector apply_encoder(StateVector state, std::span<const double> theta) {
    detail::check_theta(theta, "apply_encoder");
    if (state.n_qubits != 2) throw std::invalid_argument("apply_encoder: expected a 2-qubit state");
    detail::encoder_in_place(state.amps, theta, false);
    return state;
}

/// Exact adjoint of apply_encoder.
inline StateVector apply_decoder(StateVector state, std::span<const double> theta) {
    detail::check_theta(theta, "apply_decoder");
    if (state.n_qubits != 2) throw std::invalid_argument("apply_decoder: expected a 2-qubit state");
    detail::encoder_in_place(state.amps, theta, true);
    return state;
}

/// Encoder as a superoperator: E rho E^dagger.
inline DensityMatrix apply_encoder(DensityMatrix rho, std::span<const double> theta) {
    detail::check_theta(theta, "apply_encoder");
    if (rho.n_qubits != 2) throw std::invalid_argument("apply_encoder: expected a 2-qubit state");
    rho = apply_ry(std::move(rho), 0, theta[0]);
    rho = apply_ry(std::move(rho), 1, theta[1]);
    rho = apply_cnot(std::move(rho), 0, 1);
    rho = apply_ry(std::move(rho), 0, theta[2]);
    rho = apply_ry(std::move(rho), 1, theta[3]);
    rho = apply_cnot(std::move(rho), 0, 1);
    rho = apply_ry(std::move(rho), 0, theta[4]);
    rho = apply_ry(std::move(rho), 1, theta[5]);
    return rho;
}

inline DensityMatrix apply_decoder(DensityMatrix rho, std::span<const double> theta) {
    detail::check_theta(theta, "apply_decoder");
    if (rho.n_qubits != 2) throw std::invalid_argument("apply_decoder: expected a 2-qubit state");
    rho = apply_ry(std::move(rho), 1, -theta[5]);
    rho = apply_ry(std::move(rho), 0, -theta[4]);
    rho = apply_cnot(std::move(rho), 0, 1);
    rho = apply_ry(std::move(rho), 1, -theta[3]);
    rho = apply_ry(std::move(rho), 0, -theta[2]);
    rho = apply_cnot(std::move(rho), 0, 1);
    rho = apply_ry(std::move(rho), 1, -theta[1]);
    rho = apply_ry(std::move(rho), 0, -theta[0]);
    return rho;
}

/// Trash-qubit loss (1/M) sum_j |1 - <Z_B>_j| over phase-encoded inputs.
/// <Z_B> <= 1, so this is computed as 1 - mean(<Z_B>), which is smooth.
inline double qae_loss(std::span<const double> theta, std::span<const FeatureVec> batch) {
    detail::check_theta(theta, "qae_loss");
    if (batch.empty()) throw std::invalid_argument("qae_loss: empty batch");
    double total = 0.0;
    for (const auto& x : batch) total += detail::trash_loss(detail::encode_amps(x), theta);
    return total / static_cast<double>(batch.size());
}

/// Exact two-point parameter-shift gradient:
/// dL/dtheta_k = (L(theta + pi/2 e_k) - L(theta - pi/2 e_k)) / 2.
/// Valid because each parameter enters through a single Ry.
inline std::array<double, kQaeParamCount> parameter_shift_gradient(std::span<const double> theta,
                                                                   std::span<const FeatureVec> batch) {
    detail::check_theta(theta, "parameter_shift_gradient");
    if (batch.empty()) throw std::invalid_argument("parameter_shift_gradient: empty batch");
    std::array<double, kQaeParamCount> shifted;
    std::copy(theta.begin(), theta.end(), shifted.begin());
    std::array<double, kQaeParamCount> grad{};
    constexpr double half_pi = 1.5707963267948966;
    for (int k = 0; k < kQaeParamCount; ++k) {
        const double original = shifted[k];
        shifted[k] = original + half_pi;
        const double plus = qae_loss(shifted, batch);
        shifted[k] = original - half_pi;
        const double minus = qae_loss(shifted, batch);
        shifted[k] = original;
        grad[k] = (plus - minus) / 2.0;
    }
    return grad;
}

/// Adam over shuffled mini-batches with best-validation checkpointing.
/// Inputs must already be normalized (norm-pi vectors). Deterministic for a
/// given config.seed. Epoch losses are full passes over train and val.
inline std::pair<QaeModel, TrainingHistory> train_qae(const Dataset& train, const Dataset& val,
                                                      const TrainConfig& config) {
    if (train.empty()) throw std::invalid_argument("train_qae: empty training set");
    if (val.empty()) throw std::invalid_argument("train_qae: empty validation set");
    if (config.batch_size < 1) throw std::invalid_argument("train_qae: batch_size must be >= 1");
    if (!(config.learning_rate > 0.0)) throw std::invalid_argument("train_qae: learning_rate must be positive");
    if (config.epochs < 1) throw std::invalid_argument("train_qae: epochs must be >= 1");

    std::vector<std::array<cdouble, 4>> encoded;
    encoded.reserve(train.size() + val.size());
    for (const auto& s : train.samples) encoded.push_back(detail::encode_amps(s.features));
    for (const auto& s : val.samples) encoded.push_back(detail::encode_amps(s.features));
    std::vector<std::size_t> train_idx(train.size()), val_idx(val.size());
    for (std::size_t i = 0; i < train.size(); ++i) train_idx[i] = i;
    for (std::size_t i = 0; i < val.size(); ++i) val_idx[i] = train.size() + i;

    Rng rng(config.seed);
    std::array<double, kQaeParamCount> theta;
    for (auto& t : theta) t = rng.uniform(-0.1, 0.1);

    AdamOptimizer adam(kQaeParamCount,
                       {config.learning_rate, config.adam_beta1, config.adam_beta2, config.adam_eps});

    // gradient over already-encoded batch indices
    auto batch_gradient = [&](std::span<const std::size_t> batch) {
        std::array<double, kQaeParamCount> grad{};
        std::array<double, kQaeParamCount> shifted = theta;
        constexpr double half_pi = 1.5707963267948966;
        for (int k = 0; k < kQaeParamCount; ++k) {
            const double original = shifted[k];
            shifted[k] = original + half_pi;
            const double plus = detail::loss_over_encoded(encoded, batch, shifted);
            shifted[k] = original - half_pi;
            const double minus = detail::loss_over_encoded(encoded, batch, shifted);
            shifted[k] = original;
            grad[k] = (plus - minus) / 2.0;
        }
        return grad;
    };

    TrainingHistory history;
    QaeModel best;
    best.seed = config.seed;
    best.best_val_loss = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> order = train_idx;
    const std::size_t batch = static_cast<std::size_t>(config.batch_size);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t len = std::min(batch, order.size() - start);
            const auto grad = batch_gradient(std::span<const std::size_t>(order).subspan(start, len));
            adam.step(theta, grad);
        }
        const double train_loss = detail::loss_over_encoded(encoded, train_idx, theta);
        const double val_loss = detail::loss_over_encoded(encoded, val_idx, theta);
        history.train_loss.push_back(train_loss);
        history.val_loss.push_back(val_loss);
        if (val_loss < best.best_val_loss) {
            best.theta = theta;
            best.best_val_loss = val_loss;
            best.best_epoch = epoch;
        }
    }
    best.epochs_run = config.epochs;
    best.final_train_loss = history.train_loss.back();
    best.final_val_loss = history.val_loss.back();
    return {best, history};
}

struct Compression {
    StateVector state;   // compressed 1-qubit state |psi_c>_A
    double probability;  // post-selection success probability p0
};

/// phase encode -> encoder -> post-select trash |0>.
inline Compression compress(const FeatureVec& x, std::span<const double> theta) {
    StateVector s = apply_encoder(phase_encode(x), theta);
    auto post = postselect(s, kTrashQubit, 0);
    return {std::move(post.state), post.probability};
}

namespace detail {

/// Wraps to (-pi, pi].
inline double wrap_pi(double v) {
    constexpr double pi = 3.141592653589793238462643;
    double w = std::fmod(v, 2.0 * pi);
    if (w <= -pi)
        w += 2.0 * pi;
    else if (w > pi)
        w -= 2.0 * pi;
    return w;
}

}  // namespace detail

/// Decodes the compressed state and extracts the four phases, gauge-fixing
/// the unobservable global constant against the original input: c is chosen
/// among the 4 candidates {x_i - phi_i} minimizing sum_j |wrap(phi_j + c - x_j)|.
/// Statevector-level diagnostic; a hardware run could only recover the phases
/// up to this constant.
inline FeatureVec reconstruct(const FeatureVec& x, std::span<const double> theta) {
    Compression c = compress(x, theta);
    StateVector decoded = apply_decoder(attach_ground_qubit(c.state, kTrashQubit), theta);
    FeatureVec phi;
    for (std::size_t i = 0; i < 4; ++i) phi[i] = std::arg(decoded.amps[i]);

    double best_constant = 0.0;
    double best_residual = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 4; ++i) {
        const double candidate = x[i] - phi[i];
        double residual = 0.0;
        for (std::size_t j = 0; j < 4; ++j) residual += std::abs(detail::wrap_pi(phi[j] + candidate - x[j]));
        if (residual < best_residual) {
            best_residual = residual;
            best_constant = candidate;
        }
    }
    FeatureVec out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = detail::wrap_pi(phi[i] + best_constant);
    return out;
}

/// Mean relative reconstruction error
/// e = (1/M) sum_i (1/4) sum_j |dec_ij - orig_ij| / |orig_ij|.
inline double reconstruction_error(std::span<const FeatureVec> originals,
                                   std::span<const FeatureVec> decoded) {
    if (originals.size() != decoded.size())
        throw std::invalid_argument("reconstruction_error: length mismatch");
    if (originals.empty()) throw std::invalid_argument("reconstruction_error: empty input");
    double total = 0.0;
    for (std::size_t i = 0; i < originals.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            const double denom = std::abs(originals[i][j]);
            if (denom < 1e-9)
                throw DegenerateDenominatorError("reconstruction_error: |original| below 1e-9 at sample " +
                                                     std::to_string(i) + ", feature " + std::to_string(j),
                                                 i, j);
            row += std::abs(decoded[i][j] - originals[i][j]) / denom;
        }
        total += row / 4.0;
    }
    return total / static_cast<double>(originals.size());
}

/// Exact compute-uncompute fidelity Tr[rho_x sigma_theta_x] with
/// sigma = D[|0><0|_B (x) Tr_B(E[rho_x])].
inline double autoencoder_fidelity(const FeatureVec& x, std::span<const double> theta) {
    const DensityMatrix rho_x = density_from_state(phase_encode(x));
    const DensityMatrix encoded = apply_encoder(rho_x, theta);
    const DensityMatrix rho_a = partial_trace(encoded, kCompressedQubit);
    const DensityMatrix sigma = apply_decoder(attach_ground_qubit(rho_a, kTrashQubit), theta);
    return fidelity(rho_x, sigma);
}

namespace detail {

/// |<00| P(x)^dagger |state>|^2, with P(x) = diag(e^{i x_i}) (H (x) H).
inline double ground_return_probability(StateVector state, const FeatureVec& x) {
    for (std::size_t i = 0; i < 4; ++i) state.amps[i] *= std::polar(1.0, -x[i]);
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    const cdouble h{inv_sqrt2, 0.0};
    single_qubit_gate(state.amps, 2, 0, h, h, h, -h);
    single_qubit_gate(state.amps, 2, 1, h, h, h, -h);
    return std::norm(state.amps[0]);
}

}  // namespace detail

/// Sampled compute-uncompute fidelity: P(x), E, measure-and-reset the trash
/// qubit (per-shot collapse), D, P(x)^dagger, frequency of |00> outcomes.
/// Deterministic for a given spec.seed; each shot draws the trash collapse
/// first and the final readout second.
inline double autoencoder_fidelity(const FeatureVec& x, std::span<const double> theta,
                                   const ShotsSpec& spec) {
    if (spec.shots < 1) throw std::invalid_argument("autoencoder_fidelity: shots must be >= 1");
    const StateVector encoded = apply_encoder(phase_encode(x), theta);
    double p1 = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        if (encoded.bit(i, kTrashQubit) == 1) p1 += std::norm(encoded.amps[i]);

    // |00> return probability of each collapse branch
    std::array<double, 2> branch{0.0, 0.0};
    for (int b = 0; b < 2; ++b) {
        const double pb = b == 1 ? p1 : 1.0 - p1;
        if (pb <= kPostselectFloor) continue;
        StateVector collapsed = postselect(encoded, kTrashQubit, b).state;
        StateVector reset = attach_ground_qubit(collapsed, kTrashQubit);
        branch[b] = detail::ground_return_probability(apply_decoder(std::move(reset), theta), x);
    }

    Rng rng(spec.seed);
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < spec.shots; ++s) {
        const int b = rng.uniform() < p1 ? 1 : 0;
        if (rng.uniform() < branch[b]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(spec.shots);
}

}  // namespace qpipe
