#include "ogrl/nn/optimizer.hpp"

#include "ogrl/core/errors.hpp"

#include <cmath>

namespace ogrl::nn {

namespace {

void check_shapes(const Parameters& a, const Parameters& b, const char* what)
{
    if (a.size() != b.size())
        throw DimensionMismatch(what, a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].weight.rows() != b[i].weight.rows() || a[i].weight.cols() != b[i].weight.cols())
            throw DimensionMismatch(std::string(what) + " layer " + std::to_string(i) + " weight",
                                    static_cast<std::size_t>(a[i].weight.size()),
                                    static_cast<std::size_t>(b[i].weight.size()));
        if (a[i].bias.size() != b[i].bias.size())
            throw DimensionMismatch(std::string(what) + " layer " + std::to_string(i) + " bias",
                                    static_cast<std::size_t>(a[i].bias.size()),
                                    static_cast<std::size_t>(b[i].bias.size()));
    }
}

} // namespace

Optimizer::Optimizer(OptimizerConfig config, const Parameters& shape) : config_(config)
{
    if (!(config_.learning_rate >= 0.0))
        throw std::invalid_argument("learning rate must be non-negative");
    if (config_.kind == OptimizerKind::adam) {
        m_ = zeros_like(shape);
        v_ = zeros_like(shape);
    }
}

void Optimizer::step(Parameters& params, const Parameters& grads)
{
    check_shapes(params, grads, "optimizer gradients");
    for (std::size_t i = 0; i < grads.size(); ++i)
        if (!grads[i].weight.allFinite() || !grads[i].bias.allFinite())
            throw NonFiniteGradient(i);

    ++step_count_;
    const double lr = config_.learning_rate;
    if (config_.kind == OptimizerKind::sgd) {
        add_scaled(params, grads, -lr);
        return;
    }

    check_shapes(params, m_, "adam moments");
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_count_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_count_));
    const double eps = config_.epsilon;
    auto update = [&](auto& p, auto& m, auto& v, const auto& g) {
        m = b1 * m + (1.0 - b1) * g;
        v = (b2 * v.array() + (1.0 - b2) * g.array().square()).matrix();
        p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
    };
    for (std::size_t i = 0; i < params.size(); ++i) {
        update(params[i].weight, m_[i].weight, v_[i].weight, grads[i].weight);
        update(params[i].bias, m_[i].bias, v_[i].bias, grads[i].bias);
    }
}

} // namespace ogrl::nn
