#pragma once

#include "aeolus/nn/tensor.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace aeolus::nn {

enum class Activation { Linear, Relu, Softmax };

struct LayerSpec {
    enum class Kind { Conv1d, Gru, Dense };
    Kind kind = Kind::Dense;
    std::string name;            ///< parameter-name prefix ("conv1", ...)
    std::size_t units = 0;       ///< filters / hidden units / outputs
    std::size_t kernel = 0;      ///< conv only
    bool return_sequences = false; ///< gru only
    Activation activation = Activation::Linear;
};

/// Ordered layer stack plus the input contract. A dense layer fed a sequence
/// consumes the last timestep (the only reduction the architectures need).
struct NetworkSpec {
    std::string name;            ///< "velocity" | "acceleration" | "status"
    std::size_t input_channels = 0;
    std::size_t window_len = 0;  ///< samples per input window
    std::vector<LayerSpec> layers;

    /// Canonical architecture string; stored in weights files and checked on
    /// load so weights can never be applied to a different architecture.
    std::string fingerprint() const;
    std::size_t parameter_count() const;
    /// Channel count of the network output.
    std::size_t output_dim() const;
};

/// One named parameter array, row-major.
struct ParamTensor {
    std::string name;
    std::vector<std::size_t> shape;
    std::vector<double> data;

    std::size_t numel() const { return data.size(); }
};

/// Ordered parameter set plus the per-input-channel normalization frozen at
/// training time (x_norm = (x - mean) / std applied inside forward).
struct Weights {
    std::vector<ParamTensor> params;
    std::vector<double> norm_mean, norm_std;

    ParamTensor& find(std::string_view name);
    const ParamTensor& find(std::string_view name) const;
};

/// Glorot-uniform weights, zero biases, identity normalization. Values come
/// from per-parameter deterministic streams, so the result depends only on
/// (spec, seed).
Weights init_weights(const NetworkSpec& spec, std::uint64_t seed);

/// Same parameter names/shapes as w, all zeros; gradient accumulator.
Weights zero_like(const Weights& w);

/// Run the stack on x (B, T, C) and return the (B, output_dim) result.
/// Throws ConfigError on any shape mismatch, NumericError on non-finite
/// outputs.
Tensor network_forward(const NetworkSpec& spec, const Weights& w,
                       const Tensor& x);

enum class Loss { Mse, CrossEntropy };

/// Mean batch loss of the network output against target (B, output_dim).
/// MSE averages over every element; cross-entropy averages over rows and
/// expects one-hot targets against softmax outputs.
double network_loss(const NetworkSpec& spec, const Weights& w, const Tensor& x,
                    const Tensor& target, Loss loss);

/// Loss plus exact reverse-mode gradients, accumulated into grads (which
/// must come from zero_like and may carry earlier accumulation).
double network_loss_and_gradients(const NetworkSpec& spec, const Weights& w,
                                  const Tensor& x, const Tensor& target,
                                  Loss loss, Weights& grads);

} // namespace aeolus::nn
