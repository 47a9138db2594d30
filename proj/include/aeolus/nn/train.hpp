#pragma once

#include "aeolus/nn/network.hpp"
#include "aeolus/nn/windows.hpp"

#include <cstdint>
#include <vector>

namespace aeolus::nn {

struct TrainConfig {
    std::size_t batch_size = 512;
    std::size_t max_epochs = 60;
    std::size_t patience = 10;  ///< epochs without val improvement before stop
    double base_lr = 1e-4;
    double max_lr = 3e-3;
    std::size_t cycle_epochs = 8; ///< triangular learning-rate period
    std::size_t train_stride = 32;
    std::size_t val_stride = 64;
    std::uint64_t seed = 1;
    Loss loss = Loss::Mse;
};

/// Triangular schedule: base at the cycle edges, max at the half cycle.
double clr_learning_rate(std::size_t step, std::size_t cycle_steps,
                         double base_lr, double max_lr);

/// Adam first/second moment accumulators, one pair per parameter tensor.
struct AdamState {
    std::vector<std::vector<double>> m, v;
    std::size_t step = 0;

    static AdamState for_weights(const Weights& w);
};

/// One Adam update (beta1 0.9, beta2 0.999, eps 1e-8) at the given rate.
void adam_step(Weights& w, const Weights& grads, AdamState& state, double lr);

struct EpochStats {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double lr = 0.0; ///< learning rate at the first step of the epoch
};

struct TrainResult {
    Weights weights; ///< best-validation-epoch snapshot
    std::vector<EpochStats> history;
    std::size_t best_epoch = 0;
    double best_val_loss = 0.0;
};

/// Full training run: deterministic Glorot init from cfg.seed, per-epoch
/// Fisher-Yates shuffle of the training windows (hand-rolled so the order
/// is identical across standard libraries), Adam with the triangular
/// schedule, early stopping on validation loss with best-epoch restore.
/// Normalization is computed from the training windows and frozen into the
/// returned weights. NaN/inf loss aborts with NumericError.
TrainResult train_network(const NetworkSpec& spec,
                          const std::vector<SessionChannels>& train_sessions,
                          const std::vector<SessionChannels>& val_sessions,
                          const TrainConfig& cfg);

} // namespace aeolus::nn
