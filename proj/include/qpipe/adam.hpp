#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace qpipe {

/// Per-epoch training and validation losses.
struct TrainingHistory {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
};

struct AdamParams {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with bias correction (Kingma & Ba defaults).
class AdamOptimizer {
public:
    AdamOptimizer(std::size_t n_params, AdamParams params)
        : params_(params), m_(n_params, 0.0), v_(n_params, 0.0) {
        if (!(params.learning_rate > 0.0))
            throw std::invalid_argument("AdamOptimizer: learning rate must be positive");
    }

    void step(std::span<double> x, std::span<const double> grad) {
        if (x.size() != m_.size() || grad.size() != m_.size())
            throw std::invalid_argument("AdamOptimizer::step: size mismatch");
        ++t_;
        const double c1 = 1.0 - std::pow(params_.beta1, t_);
        const double c2 = 1.0 - std::pow(params_.beta2, t_);
        for (std::size_t i = 0; i < m_.size(); ++i) {
            m_[i] = params_.beta1 * m_[i] + (1.0 - params_.beta1) * grad[i];
            v_[i] = params_.beta2 * v_[i] + (1.0 - params_.beta2) * grad[i] * grad[i];
            x[i] -= params_.learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + params_.epsilon);
        }
    }

private:
    AdamParams params_;
    std::vector<double> m_, v_;
    long t_ = 0;
};

}  // namespace qpipe
