#pragma once

#include "ogrl/core/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace ogrl::nn {

enum class HiddenActivation : std::uint8_t { relu = 0, tanh = 1 };
enum class OutputActivation : std::uint8_t { identity = 0, sigmoid = 1 };

std::string to_string(HiddenActivation a);
std::string to_string(OutputActivation a);

struct DenseLayer {
    Eigen::MatrixXd weight; // (fan_out x fan_in)
    Eigen::VectorXd bias;

    bool operator==(const DenseLayer& other) const { return weight == other.weight && bias == other.bias; }
};

/// Parameters (or gradients with the same shapes) of a whole network, input layer first.
using Parameters = std::vector<DenseLayer>;

Parameters zeros_like(const Parameters& p);
void add_scaled(Parameters& acc, const Parameters& delta, double scale);

struct Gradients {
    Parameters params;
    Eigen::VectorXd input;
};

struct BatchGradients {
    Parameters params;      // summed over the batch
    Eigen::MatrixXd inputs; // one column per sample
};

/// Fully connected network with a shared hidden activation and a separate output activation.
///
/// Samples are columns: batch routines take an (input_size x n) matrix.
class Mlp {
public:
    /// All parameters zero.
    Mlp(std::vector<int> layer_sizes, HiddenActivation hidden, OutputActivation output);

    /// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
    static Mlp glorot(std::vector<int> layer_sizes, HiddenActivation hidden, OutputActivation output, Rng& rng);

    const std::vector<int>& layer_sizes() const noexcept { return layer_sizes_; }
    int input_size() const noexcept { return layer_sizes_.front(); }
    int output_size() const noexcept { return layer_sizes_.back(); }
    HiddenActivation hidden_activation() const noexcept { return hidden_; }
    OutputActivation output_activation() const noexcept { return output_; }
    std::size_t parameter_count() const;

    Parameters& params() noexcept { return params_; }
    const Parameters& params() const noexcept { return params_; }

    Eigen::VectorXd forward(const Eigen::Ref<const Eigen::VectorXd>& input) const;
    Eigen::MatrixXd forward_batch(const Eigen::Ref<const Eigen::MatrixXd>& inputs) const;

    /// Evaluates inputs of the form [prefix ; suffix] where many suffixes share one prefix.
    ///
    /// Column j of the result is the output for [prefixes.col(j / group) ; suffixes.col(j)].
    /// The prefix part of the first layer is computed once per prefix, which makes
    /// scoring many candidate actions for one observation cheap.
    Eigen::MatrixXd forward_shared_prefix(const Eigen::Ref<const Eigen::MatrixXd>& prefixes,
                                          const Eigen::Ref<const Eigen::MatrixXd>& suffixes, int group) const;

    /// Exact gradients of upstream . f(input) w.r.t. parameters and input.
    Gradients backward(const Eigen::Ref<const Eigen::VectorXd>& input,
                       const Eigen::Ref<const Eigen::VectorXd>& upstream) const;
    BatchGradients backward_batch(const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                                  const Eigen::Ref<const Eigen::MatrixXd>& upstreams) const;

    bool operator==(const Mlp& other) const;

private:
    void apply_hidden(Eigen::MatrixXd& z) const;
    void apply_output(Eigen::MatrixXd& z) const;
    Eigen::MatrixXd propagate_from_first(Eigen::MatrixXd z) const;

    std::vector<int> layer_sizes_;
    HiddenActivation hidden_;
    OutputActivation output_;
    Parameters params_;
};

} // namespace ogrl::nn
