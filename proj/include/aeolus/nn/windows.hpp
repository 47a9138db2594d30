#pragma once

#include "aeolus/nn/tensor.hpp"

#include <cstddef>
#include <vector>

namespace aeolus::nn {

/// Dense per-row channel matrix of one recording session, plus the per-row
/// training target (valid at any row; a window is supervised by the target
/// at its last row). Sparse sensors are forward-filled by the extractor
/// that builds this, so every cell is populated.
struct SessionChannels {
    std::size_t rows = 0;
    std::size_t channels = 0;
    std::size_t target_dim = 0;
    std::vector<double> values;  ///< rows x channels, row-major
    std::vector<double> targets; ///< rows x target_dim, row-major
    /// Channel re-zeroed to the window's first element at assembly time
    /// (used for the altitude channel, which is only meaningful as a
    /// within-window excursion); -1 = none.
    int shift_channel = -1;

    double value(std::size_t row, std::size_t c) const {
        return values[row * channels + c];
    }
};

/// One training window: rows [start, start + window_len) of a session.
struct WindowRef {
    std::size_t session = 0;
    std::size_t start = 0;
};

/// All windows of the given length with the given stride, never crossing a
/// session boundary. Throws DataError when a session is shorter than one
/// window (an empty batch would otherwise appear downstream).
std::vector<WindowRef> make_windows(const std::vector<SessionChannels>& sessions,
                                    std::size_t window_len, std::size_t stride);

/// Copy one window into row b of x (B, window_len, channels) and its target
/// into row b of target (B, target_dim), applying the shift channel.
void assemble_window(const SessionChannels& s, const WindowRef& ref,
                     std::size_t window_len, Tensor& x, Tensor& target,
                     std::size_t b);

/// Per-channel mean/std over the assembled windows (shift applied), with a
/// 1e-6 floor on std. This is the normalization frozen into trained weights.
void compute_normalization(const std::vector<SessionChannels>& sessions,
                           const std::vector<WindowRef>& windows,
                           std::size_t window_len, std::vector<double>& mean,
                           std::vector<double>& stddev);

} // namespace aeolus::nn
