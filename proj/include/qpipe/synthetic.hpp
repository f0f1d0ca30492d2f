#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "qpipe/dataset.hpp"
#include "qpipe/rng.hpp"

namespace qpipe {

using Covariance = std::array<std::array<double, 4>, 4>;

inline Covariance diagonal_covariance(const FeatureVec& variances) {
    Covariance c{};
    for (std::size_t j = 0; j < 4; ++j) c[j][j] = variances[j];
    return c;
}

/// Two-component Gaussian mixture standing in for the plant's sensor series.
/// Samples are drawn per component, optionally AR(1)-correlated in time, and
/// shifted per feature so every value stays at or above `min_feature` (keeps
/// relative reconstruction errors well defined).
struct SyntheticConfig {
    std::size_t n_samples = 0;
    FeatureVec mean_a{};
    FeatureVec mean_b{};
    Covariance cov_a{};
    Covariance cov_b{};
    double fraction_a = 0.5;  // P(component A), in (0, 1)
    std::uint64_t seed = 0;
    double ar1 = 0.0;  // temporal correlation of the noise, in (-1, 1)
    double min_feature = 0.1;
    bool with_timestamps = true;
    std::int64_t start_timestamp = 1609459200;  // 2021-01-01T00:00:00Z
    std::int64_t sample_period_s = 10;          // sensors sampled every 10 s
};

namespace detail {

/// Lower-triangular Cholesky factor; tolerates semidefinite inputs and throws
/// invalid_argument when the matrix is not PSD.
inline Covariance cholesky(const Covariance& cov) {
    Covariance L{};
    for (std::size_t j = 0; j < 4; ++j) {
        double pivot = cov[j][j];
        for (std::size_t k = 0; k < j; ++k) pivot -= L[j][k] * L[j][k];
        if (pivot < -1e-9) throw std::invalid_argument("covariance is not positive semidefinite");
        L[j][j] = std::sqrt(std::max(pivot, 0.0));
        for (std::size_t i = j + 1; i < 4; ++i) {
            double v = cov[i][j];
            for (std::size_t k = 0; k < j; ++k) v -= L[i][k] * L[j][k];
            if (L[j][j] > 0.0) {
                L[i][j] = v / L[j][j];
            } else if (std::abs(v) > 1e-9) {
                throw std::invalid_argument("covariance is not positive semidefinite");
            }
        }
    }
    return L;
}

inline void check_symmetric(const Covariance& cov) {
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (std::abs(cov[i][j] - cov[j][i]) > 1e-12)
                throw std::invalid_argument("covariance must be symmetric");
}

}  // namespace detail

inline Dataset generate_synthetic(const SyntheticConfig& cfg) {
    if (cfg.n_samples == 0) throw std::invalid_argument("generate_synthetic: n_samples must be positive");
    if (!(cfg.fraction_a > 0.0 && cfg.fraction_a < 1.0))
        throw std::invalid_argument("generate_synthetic: fraction_a must be in (0, 1)");
    if (!(cfg.ar1 > -1.0 && cfg.ar1 < 1.0))
        throw std::invalid_argument("generate_synthetic: ar1 must be in (-1, 1)");
    detail::check_symmetric(cfg.cov_a);
    detail::check_symmetric(cfg.cov_b);
    const Covariance chol_a = detail::cholesky(cfg.cov_a);
    const Covariance chol_b = detail::cholesky(cfg.cov_b);

    Rng component_rng(Rng::mix(cfg.seed, "components"));
    std::array<Rng, 4> feature_rng{Rng(Rng::mix(cfg.seed, "feature-0")), Rng(Rng::mix(cfg.seed, "feature-1")),
                                   Rng(Rng::mix(cfg.seed, "feature-2")), Rng(Rng::mix(cfg.seed, "feature-3"))};

    Dataset ds;
    ds.provenance = "synthetic(seed=" + std::to_string(cfg.seed) + ",n=" + std::to_string(cfg.n_samples) + ")";
    ds.samples.resize(cfg.n_samples);

    const double innovation = std::sqrt(1.0 - cfg.ar1 * cfg.ar1);
    FeatureVec z{};  // stationary AR(1) noise, standard normal marginals
    for (std::size_t t = 0; t < cfg.n_samples; ++t) {
        const int comp = component_rng.uniform() < cfg.fraction_a ? 0 : 1;
        for (std::size_t j = 0; j < 4; ++j) {
            const double eps = feature_rng[j].normal();
            z[j] = t == 0 ? eps : cfg.ar1 * z[j] + innovation * eps;
        }
        const FeatureVec& mean = comp == 0 ? cfg.mean_a : cfg.mean_b;
        const Covariance& L = comp == 0 ? chol_a : chol_b;
        Sample& s = ds.samples[t];
        for (std::size_t i = 0; i < 4; ++i) {
            double v = mean[i];
            for (std::size_t k = 0; k <= i; ++k) v += L[i][k] * z[k];
            s.features[i] = v;
        }
        s.component = comp;
        if (cfg.with_timestamps)
            s.timestamp = cfg.start_timestamp + static_cast<std::int64_t>(t) * cfg.sample_period_s;
    }

    for (std::size_t j = 0; j < 4; ++j) {
        double lo = ds.samples[0].features[j];
        for (const auto& s : ds.samples) lo = std::min(lo, s.features[j]);
        if (lo < cfg.min_feature) {
            const double shift = cfg.min_feature - lo;
            for (auto& s : ds.samples) s.features[j] += shift;
        }
    }
    return ds;
}

}  // namespace qpipe
