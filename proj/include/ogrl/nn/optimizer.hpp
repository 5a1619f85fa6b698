#pragma once

#include "ogrl/nn/mlp.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ogrl::nn {

enum class OptimizerKind : std::uint8_t { sgd, adam };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// A gradient held a NaN or infinity; parameters were left untouched.
class NonFiniteGradient : public std::runtime_error {
public:
    explicit NonFiniteGradient(std::size_t layer)
        : std::runtime_error("non-finite gradient in layer " + std::to_string(layer)), layer_(layer)
    {
    }
    std::size_t layer() const noexcept { return layer_; }

private:
    std::size_t layer_;
};

class Optimizer {
public:
    Optimizer(OptimizerConfig config, const Parameters& shape);

    /// SGD: p -= lr * g.  Adam: bias-corrected moment update.
    void step(Parameters& params, const Parameters& grads);

    const OptimizerConfig& config() const noexcept { return config_; }
    void set_learning_rate(double lr) { config_.learning_rate = lr; }
    std::int64_t step_count() const noexcept { return step_count_; }
    const Parameters& first_moments() const noexcept { return m_; }
    const Parameters& second_moments() const noexcept { return v_; }

private:
    OptimizerConfig config_;
    Parameters m_;
    Parameters v_;
    std::int64_t step_count_ = 0;
};

} // namespace ogrl::nn
