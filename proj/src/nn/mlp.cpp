#include "ogrl/nn/mlp.hpp"

#include "ogrl/core/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace ogrl::nn {

std::string to_string(HiddenActivation a) { return a == HiddenActivation::relu ? "relu" : "tanh"; }
std::string to_string(OutputActivation a) { return a == OutputActivation::identity ? "identity" : "sigmoid"; }

Parameters zeros_like(const Parameters& p)
{
    Parameters out;
    out.reserve(p.size());
    for (const auto& layer : p)
        out.push_back({Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()),
                       Eigen::VectorXd::Zero(layer.bias.size())});
    return out;
}

void add_scaled(Parameters& acc, const Parameters& delta, double scale)
{
    if (acc.size() != delta.size())
        throw DimensionMismatch("add_scaled layers", acc.size(), delta.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
        acc[i].weight += scale * delta[i].weight;
        acc[i].bias += scale * delta[i].bias;
    }
}

Mlp::Mlp(std::vector<int> layer_sizes, HiddenActivation hidden, OutputActivation output)
    : layer_sizes_(std::move(layer_sizes)), hidden_(hidden), output_(output)
{
    if (layer_sizes_.size() < 2)
        throw std::invalid_argument("Mlp needs at least an input and an output layer");
    for (int n : layer_sizes_)
        if (n <= 0)
            throw std::invalid_argument("Mlp layer sizes must be positive");
    for (std::size_t i = 0; i + 1 < layer_sizes_.size(); ++i)
        params_.push_back({Eigen::MatrixXd::Zero(layer_sizes_[i + 1], layer_sizes_[i]),
                           Eigen::VectorXd::Zero(layer_sizes_[i + 1])});
}

Mlp Mlp::glorot(std::vector<int> layer_sizes, HiddenActivation hidden, OutputActivation output, Rng& rng)
{
    Mlp net(std::move(layer_sizes), hidden, output);
    for (auto& layer : net.params_) {
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.weight.rows() + layer.weight.cols()));
        std::uniform_real_distribution<double> dist(-limit, limit);
        // Row-major fill so the draw order matches the checkpoint layout.
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
                layer.weight(r, c) = dist(rng);
    }
    return net;
}

std::size_t Mlp::parameter_count() const
{
    std::size_t n = 0;
    for (const auto& layer : params_)
        n += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
    return n;
}

void Mlp::apply_hidden(Eigen::MatrixXd& z) const
{
    if (hidden_ == HiddenActivation::relu)
        z = z.cwiseMax(0.0);
    else
        z = z.array().tanh().matrix();
}

void Mlp::apply_output(Eigen::MatrixXd& z) const
{
    if (output_ == OutputActivation::sigmoid)
        z = (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

Eigen::MatrixXd Mlp::propagate_from_first(Eigen::MatrixXd z) const
{
    for (std::size_t l = 1; l < params_.size(); ++l) {
        apply_hidden(z);
        Eigen::MatrixXd next = params_[l].weight * z;
        next.colwise() += params_[l].bias;
        z = std::move(next);
    }
    apply_output(z);
    return z;
}

Eigen::VectorXd Mlp::forward(const Eigen::Ref<const Eigen::VectorXd>& input) const
{
    return forward_batch(input);
}

Eigen::MatrixXd Mlp::forward_batch(const Eigen::Ref<const Eigen::MatrixXd>& inputs) const
{
    if (inputs.rows() != input_size())
        throw DimensionMismatch("Mlp::forward input", static_cast<std::size_t>(input_size()),
                                static_cast<std::size_t>(inputs.rows()));
    Eigen::MatrixXd z = params_[0].weight * inputs;
    z.colwise() += params_[0].bias;
    return propagate_from_first(std::move(z));
}

Eigen::MatrixXd Mlp::forward_shared_prefix(const Eigen::Ref<const Eigen::MatrixXd>& prefixes,
                                           const Eigen::Ref<const Eigen::MatrixXd>& suffixes, int group) const
{
    const auto p = prefixes.rows();
    if (p + suffixes.rows() != input_size())
        throw DimensionMismatch("Mlp::forward_shared_prefix input", static_cast<std::size_t>(input_size()),
                                static_cast<std::size_t>(p + suffixes.rows()));
    if (group <= 0 || suffixes.cols() != prefixes.cols() * group)
        throw DimensionMismatch("Mlp::forward_shared_prefix columns",
                                static_cast<std::size_t>(prefixes.cols() * std::max(group, 0)),
                                static_cast<std::size_t>(suffixes.cols()));
    const auto& first = params_[0];
    Eigen::MatrixXd shared = first.weight.leftCols(p) * prefixes;
    shared.colwise() += first.bias;
    Eigen::MatrixXd z = first.weight.rightCols(suffixes.rows()) * suffixes;
    for (Eigen::Index j = 0; j < z.cols(); ++j)
        z.col(j) += shared.col(j / group);
    return propagate_from_first(std::move(z));
}

Gradients Mlp::backward(const Eigen::Ref<const Eigen::VectorXd>& input,
                        const Eigen::Ref<const Eigen::VectorXd>& upstream) const
{
    auto batch = backward_batch(input, upstream);
    return {std::move(batch.params), batch.inputs.col(0)};
}

BatchGradients Mlp::backward_batch(const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                                   const Eigen::Ref<const Eigen::MatrixXd>& upstreams) const
{
    if (inputs.rows() != input_size())
        throw DimensionMismatch("Mlp::backward input", static_cast<std::size_t>(input_size()),
                                static_cast<std::size_t>(inputs.rows()));
    if (upstreams.rows() != output_size())
        throw DimensionMismatch("Mlp::backward upstream", static_cast<std::size_t>(output_size()),
                                static_cast<std::size_t>(upstreams.rows()));
    if (upstreams.cols() != inputs.cols())
        throw DimensionMismatch("Mlp::backward batch", static_cast<std::size_t>(inputs.cols()),
                                static_cast<std::size_t>(upstreams.cols()));

    const std::size_t n_layers = params_.size();
    // activations[l] is the input to layer l; pre[l] its pre-activation output.
    std::vector<Eigen::MatrixXd> activations(n_layers + 1);
    std::vector<Eigen::MatrixXd> pre(n_layers);
    activations[0] = inputs;
    for (std::size_t l = 0; l < n_layers; ++l) {
        pre[l] = params_[l].weight * activations[l];
        pre[l].colwise() += params_[l].bias;
        activations[l + 1] = pre[l];
        if (l + 1 < n_layers)
            apply_hidden(activations[l + 1]);
        else
            apply_output(activations[l + 1]);
    }

    BatchGradients grads;
    grads.params.resize(n_layers);

    Eigen::MatrixXd delta = upstreams;
    if (output_ == OutputActivation::sigmoid) {
        const auto& y = activations[n_layers].array();
        delta = (delta.array() * y * (1.0 - y)).matrix();
    }
    for (std::size_t l = n_layers; l-- > 0;) {
        grads.params[l].weight = delta * activations[l].transpose();
        grads.params[l].bias = delta.rowwise().sum();
        Eigen::MatrixXd back = params_[l].weight.transpose() * delta;
        if (l == 0) {
            grads.inputs = std::move(back);
            break;
        }
        if (hidden_ == HiddenActivation::relu)
            delta = (back.array() * (pre[l - 1].array() > 0.0).cast<double>()).matrix();
        else
            delta = (back.array() * (1.0 - activations[l].array().square())).matrix();
    }
    return grads;
}

bool Mlp::operator==(const Mlp& other) const
{
    return layer_sizes_ == other.layer_sizes_ && hidden_ == other.hidden_ && output_ == other.output_ &&
           params_ == other.params_;
}

} // namespace ogrl::nn
