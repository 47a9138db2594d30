#include "aeolus/nn/train.hpp"

#include "aeolus/core/errors.hpp"
#include "aeolus/sim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace aeolus::nn {

namespace {

/// Deterministic in-place shuffle; std::shuffle's draw sequence is
/// implementation-defined, this one is pinned.
void fisher_yates(std::vector<WindowRef>& v, std::mt19937_64& eng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[eng() % i]);
}

/// ReLU maps NaN to 0, so a bad sample can silently vanish from the loss;
/// reject non-finite data up front instead.
void require_finite_data(const std::vector<SessionChannels>& sessions,
                         const char* which) {
    for (std::size_t si = 0; si < sessions.size(); ++si) {
        const auto& s = sessions[si];
        for (double v : s.values)
            if (!std::isfinite(v))
                throw core::NumericError("non-finite value in " +
                                         std::string(which) + " session " +
                                         std::to_string(si));
        for (double v : s.targets)
            if (!std::isfinite(v))
                throw core::NumericError("non-finite target in " +
                                         std::string(which) + " session " +
                                         std::to_string(si));
    }
}

double run_epoch_eval(const NetworkSpec& spec, const Weights& w,
                      const std::vector<SessionChannels>& sessions,
                      const std::vector<WindowRef>& windows,
                      const TrainConfig& cfg) {
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t at = 0; at < windows.size(); at += cfg.batch_size) {
        const std::size_t B =
            std::min(cfg.batch_size, windows.size() - at);
        Tensor x = Tensor::zeros3(B, spec.window_len, spec.input_channels);
        Tensor t = Tensor::zeros2(B, spec.output_dim());
        for (std::size_t b = 0; b < B; ++b) {
            const auto& ref = windows[at + b];
            assemble_window(sessions[ref.session], ref, spec.window_len, x, t,
                            b);
        }
        acc += network_loss(spec, w, x, t, cfg.loss) * static_cast<double>(B);
        count += B;
    }
    return acc / static_cast<double>(count);
}

} // namespace

double clr_learning_rate(std::size_t step, std::size_t cycle_steps,
                         double base_lr, double max_lr) {
    if (cycle_steps == 0)
        return base_lr;
    const double phase =
        static_cast<double>(step % cycle_steps) / static_cast<double>(cycle_steps);
    const double tri = 1.0 - std::abs(2.0 * phase - 1.0);
    return base_lr + (max_lr - base_lr) * tri;
}

AdamState AdamState::for_weights(const Weights& w) {
    AdamState s;
    s.m.reserve(w.params.size());
    s.v.reserve(w.params.size());
    for (const auto& p : w.params) {
        s.m.emplace_back(p.data.size(), 0.0);
        s.v.emplace_back(p.data.size(), 0.0);
    }
    return s;
}

void adam_step(Weights& w, const Weights& grads, AdamState& state, double lr) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    state.step += 1;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    for (std::size_t pi = 0; pi < w.params.size(); ++pi) {
        auto& theta = w.params[pi].data;
        const auto& g = grads.params[pi].data;
        auto& m = state.m[pi];
        auto& v = state.v[pi];
        for (std::size_t i = 0; i < theta.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * g[i];
            v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
            theta[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
    }
}

TrainResult train_network(const NetworkSpec& spec,
                          const std::vector<SessionChannels>& train_sessions,
                          const std::vector<SessionChannels>& val_sessions,
                          const TrainConfig& cfg) {
    require_finite_data(train_sessions, "training");
    require_finite_data(val_sessions, "validation");
    auto train_windows =
        make_windows(train_sessions, spec.window_len, cfg.train_stride);
    const auto val_windows =
        make_windows(val_sessions, spec.window_len, cfg.val_stride);

    Weights w = init_weights(spec, cfg.seed);
    compute_normalization(train_sessions, train_windows, spec.window_len,
                          w.norm_mean, w.norm_std);

    AdamState adam = AdamState::for_weights(w);
    const std::size_t steps_per_epoch =
        (train_windows.size() + cfg.batch_size - 1) / cfg.batch_size;
    const std::size_t cycle_steps = cfg.cycle_epochs * steps_per_epoch;

    TrainResult result;
    result.best_val_loss = std::numeric_limits<double>::infinity();
    std::size_t global_step = 0;

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        std::mt19937_64 shuffle_eng(
            sim::splitmix64(cfg.seed ^ (0x9e3779b97f4a7c15ULL + epoch)));
        fisher_yates(train_windows, shuffle_eng);

        const double epoch_lr =
            clr_learning_rate(global_step, cycle_steps, cfg.base_lr, cfg.max_lr);
        double loss_acc = 0.0;
        for (std::size_t at = 0; at < train_windows.size();
             at += cfg.batch_size) {
            const std::size_t B =
                std::min(cfg.batch_size, train_windows.size() - at);
            Tensor x = Tensor::zeros3(B, spec.window_len, spec.input_channels);
            Tensor t = Tensor::zeros2(B, spec.output_dim());
            for (std::size_t b = 0; b < B; ++b) {
                const auto& ref = train_windows[at + b];
                assemble_window(train_sessions[ref.session], ref,
                                spec.window_len, x, t, b);
            }
            Weights grads = zero_like(w);
            const double L =
                network_loss_and_gradients(spec, w, x, t, cfg.loss, grads);
            if (!std::isfinite(L))
                throw core::NumericError(
                    "training diverged (non-finite loss) at epoch " +
                    std::to_string(epoch));
            const double lr = clr_learning_rate(global_step, cycle_steps,
                                                cfg.base_lr, cfg.max_lr);
            adam_step(w, grads, adam, lr);
            ++global_step;
            loss_acc += L * static_cast<double>(B);
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss =
            loss_acc / static_cast<double>(train_windows.size());
        stats.val_loss = run_epoch_eval(spec, w, val_sessions, val_windows, cfg);
        stats.lr = epoch_lr;
        if (!std::isfinite(stats.val_loss))
            throw core::NumericError(
                "validation diverged (non-finite loss) at epoch " +
                std::to_string(epoch));
        result.history.push_back(stats);

        if (stats.val_loss < result.best_val_loss) {
            result.best_val_loss = stats.val_loss;
            result.best_epoch = epoch;
            result.weights = w;
        } else if (epoch - result.best_epoch >= cfg.patience) {
            break;
        }
    }
    return result;
}

} // namespace aeolus::nn
