#include "aeolus/nn/windows.hpp"

#include "aeolus/core/errors.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace aeolus::nn {

std::vector<WindowRef> make_windows(const std::vector<SessionChannels>& sessions,
                                    std::size_t window_len, std::size_t stride) {
    if (window_len == 0 || stride == 0)
        throw core::ConfigError("window length and stride must be positive");
    std::vector<WindowRef> out;
    for (std::size_t si = 0; si < sessions.size(); ++si) {
        const auto& s = sessions[si];
        if (s.rows < window_len)
            throw core::DataError(
                "session " + std::to_string(si) + " has " +
                std::to_string(s.rows) + " rows, shorter than one window (" +
                std::to_string(window_len) + ")");
        for (std::size_t start = 0; start + window_len <= s.rows;
             start += stride)
            out.push_back({si, start});
    }
    return out;
}

void assemble_window(const SessionChannels& s, const WindowRef& ref,
                     std::size_t window_len, Tensor& x, Tensor& target,
                     std::size_t b) {
    const std::size_t C = s.channels;
    std::memcpy(&x.at(b, 0, 0), &s.values[ref.start * C],
                sizeof(double) * window_len * C);
    if (s.shift_channel >= 0) {
        const auto sc = static_cast<std::size_t>(s.shift_channel);
        const double base = s.value(ref.start, sc);
        for (std::size_t t = 0; t < window_len; ++t)
            x.at(b, t, sc) -= base;
    }
    const std::size_t last = ref.start + window_len - 1;
    std::memcpy(&target.at(b, 0), &s.targets[last * s.target_dim],
                sizeof(double) * s.target_dim);
}

void compute_normalization(const std::vector<SessionChannels>& sessions,
                           const std::vector<WindowRef>& windows,
                           std::size_t window_len, std::vector<double>& mean,
                           std::vector<double>& stddev) {
    if (windows.empty())
        throw core::DataError("no windows to compute normalization from");
    const std::size_t C = sessions[windows[0].session].channels;
    std::vector<double> sum(C, 0.0), sumsq(C, 0.0);
    std::size_t n = 0;
    for (const auto& ref : windows) {
        const auto& s = sessions[ref.session];
        const double base =
            s.shift_channel >= 0
                ? s.value(ref.start, static_cast<std::size_t>(s.shift_channel))
                : 0.0;
        for (std::size_t t = 0; t < window_len; ++t) {
            const double* row = &s.values[(ref.start + t) * C];
            for (std::size_t c = 0; c < C; ++c) {
                double v = row[c];
                if (s.shift_channel >= 0 &&
                    c == static_cast<std::size_t>(s.shift_channel))
                    v -= base;
                sum[c] += v;
                sumsq[c] += v * v;
            }
        }
        ++n;
    }
    const double count = static_cast<double>(n) * window_len;
    mean.assign(C, 0.0);
    stddev.assign(C, 0.0);
    for (std::size_t c = 0; c < C; ++c) {
        mean[c] = sum[c] / count;
        const double var = std::max(0.0, sumsq[c] / count - mean[c] * mean[c]);
        stddev[c] = std::max(std::sqrt(var), 1e-6);
    }
}

} // namespace aeolus::nn
